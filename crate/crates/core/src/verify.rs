//! Numerical certification of smoothness, curvature and simplicity.
//!
//! The simplicity certificate relies on two facts about unit-speed curves of
//! curvature at most one:
//!
//! * points closer than π in arclength are never equal, because the chord
//!   over an arc of length Δ ≤ π is at least `2 sin(Δ/2)`;
//! * sampling every δ puts each point within δ/2 of a sample, so the sampled
//!   minimum distance minus δ bounds the true minimum from below.
//!
//! Together these turn a finite scan into a lower bound on the distance
//! between any two points that are at least π apart along the curve.

use std::collections::HashMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{JointResidual, LocalPosition, PiecewiseCurve, Vec3, CONSTRUCTION_TOL, JOINT_TOL};

/// Finite-difference step for derivatives along the curve.
pub const FD_STEP: f64 = 1e-4;
/// Allowed deviation of finite-difference curvature from the target.
pub const FD_TOL: f64 = 1e-5;
/// Default curvature sampling density, samples per unit arclength.
pub const CURVATURE_SAMPLES_PER_UNIT: f64 = 1000.0;
/// Distance below which a locally minimized pair counts as an intersection.
pub const INTERSECTION_TOL: f64 = 1e-9;
/// Minimum sample count for the tube check.
pub const TUBE_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct C2Report {
    pub joints: usize,
    pub max_position: f64,
    pub max_tangent: f64,
    pub max_acceleration: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Compares both sides of every joint, including the seam of a closed curve.
pub fn check_c2(curve: &PiecewiseCurve, tol: f64) -> C2Report {
    let residuals = curve.joint_residuals();
    let fold = |f: fn(&JointResidual) -> f64| residuals.iter().map(f).fold(0.0, f64::max);
    let max_position = fold(|r| r.position);
    let max_tangent = fold(|r| r.tangent);
    let max_acceleration = fold(|r| r.acceleration);
    C2Report {
        joints: residuals.len(),
        max_position,
        max_tangent,
        max_acceleration,
        tolerance: tol,
        passed: max_position <= tol && max_tangent <= tol && max_acceleration <= tol,
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct CurvatureConfig {
    pub target: f64,
    pub fd_tol: f64,
    pub step: f64,
    pub samples_per_unit: f64,
}

impl Default for CurvatureConfig {
    fn default() -> Self {
        Self {
            target: 1.0,
            fd_tol: FD_TOL,
            step: FD_STEP,
            samples_per_unit: CURVATURE_SAMPLES_PER_UNIT,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CurvatureReport {
    pub target: f64,
    pub analytic_min: f64,
    pub analytic_max: f64,
    /// |r''| as the central difference |T(s+h) − T(s−h)| / 2h, over all
    /// samples including those straddling joints.
    pub fd_min: f64,
    pub fd_max: f64,
    /// Largest |(r(s+h) − 2r(s) + r(s−h)) / h² − κ| over stencils inside a
    /// single segment.
    pub position_fd_deviation: f64,
    /// Forward chord over step, which should sit just below 1.
    pub speed_min: f64,
    pub speed_max: f64,
    /// max |(T(s+h) − T(s−h)) / 2h − κN(s)|.
    pub frenet_residual: f64,
    /// Allowed Frenet residual: the tolerance plus h/4 times the largest
    /// jump of κτ across a joint.
    pub frenet_bound: f64,
    pub samples: usize,
    pub joint_samples: usize,
    pub passed: bool,
}

/// Checks that every segment has the target curvature exactly and that the
/// sampled curve bends at that rate, including across joints.
///
/// Second differences of positions straddling a joint are not used: they
/// amplify a joint gap ε to 2ε/h², so a gap of 10⁻¹³ already costs 2·10⁻⁵.
/// The tangent is analytic, so its central difference stays accurate there.
/// At a joint the torsion may jump, which moves (T(s+h) − T(s−h)) / 2h off
/// κN by up to hκ|Δτ|/4 along the binormal without changing its length.
pub fn check_curvature(curve: &PiecewiseCurve, config: &CurvatureConfig) -> CurvatureReport {
    let (analytic_min, analytic_max) = curve
        .segments()
        .iter()
        .map(|s| s.segment.curvature())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), k| (lo.min(k), hi.max(k)));

    let h = config.step;
    let mut acc = FdAccumulator::new(config.target);
    let n_seg = curve.len();
    let segs = curve.segments();
    let mut jump = 0.0f64;
    for k in 0..n_seg {
        let len = curve.segment_length(k);
        let count = ((len * config.samples_per_unit).ceil() as usize).max(2);
        for i in 0..count {
            let offset = len * (i as f64 + 0.5) / count as f64;
            acc.sample(curve, LocalPosition { segment: k, offset }, h);
        }
        // Stencils whose points fall on both sides of the joint after segment k.
        let joint_exists = k + 1 < n_seg || curve.is_closed();
        if joint_exists {
            let (a, b) = (&segs[k].segment, &segs[(k + 1) % n_seg].segment);
            jump = jump.max((a.curvature() * a.torsion() - b.curvature() * b.torsion()).abs());
            for frac in [0.0, 0.25, 0.5, 0.75, 1.0] {
                let at = LocalPosition {
                    segment: k,
                    offset: (len - frac * h).max(0.0),
                };
                if acc.sample(curve, at, h) {
                    acc.joint_samples += 1;
                }
            }
        }
    }
    let frenet_bound = config.fd_tol + h * jump / 4.0;
    let analytic_ok = (analytic_min - config.target).abs() <= CONSTRUCTION_TOL
        && (analytic_max - config.target).abs() <= CONSTRUCTION_TOL;
    let fd_ok = acc.samples > 0
        && (acc.fd_min - config.target).abs() <= config.fd_tol
        && (acc.fd_max - config.target).abs() <= config.fd_tol
        && acc.position <= config.fd_tol;
    CurvatureReport {
        target: config.target,
        analytic_min,
        analytic_max,
        fd_min: acc.fd_min,
        fd_max: acc.fd_max,
        position_fd_deviation: acc.position,
        speed_min: acc.speed_min,
        speed_max: acc.speed_max,
        frenet_residual: acc.frenet,
        frenet_bound,
        samples: acc.samples,
        joint_samples: acc.joint_samples,
        passed: analytic_ok && fd_ok && acc.frenet <= frenet_bound,
    }
}

struct FdAccumulator {
    target: f64,
    fd_min: f64,
    fd_max: f64,
    position: f64,
    speed_min: f64,
    speed_max: f64,
    frenet: f64,
    samples: usize,
    joint_samples: usize,
}

impl FdAccumulator {
    fn new(target: f64) -> Self {
        Self {
            target,
            fd_min: f64::INFINITY,
            fd_max: f64::NEG_INFINITY,
            position: 0.0,
            speed_min: f64::INFINITY,
            speed_max: f64::NEG_INFINITY,
            frenet: 0.0,
            samples: 0,
            joint_samples: 0,
        }
    }

    fn sample(&mut self, curve: &PiecewiseCurve, at: LocalPosition, h: f64) -> bool {
        let (Some(fwd), Some(back)) = (curve.step(at, h), curve.step(at, -h)) else {
            return false;
        };
        let d_fwd = curve.chord(at, curve, fwd);
        if fwd.segment == at.segment && back.segment == at.segment {
            let d_back = curve.chord(at, curve, back);
            let second = ((d_fwd + d_back) / (h * h)).norm();
            self.position = self.position.max((second - self.target).abs());
        }
        let speed = d_fwd.norm() / h;
        let dt = (curve.local_frame(fwd).tangent - curve.local_frame(back).tangent) / (2.0 * h);
        let fd = dt.norm();
        let frenet = (dt - curve.local_acceleration(at)).norm();
        self.fd_min = self.fd_min.min(fd);
        self.fd_max = self.fd_max.max(fd);
        self.speed_min = self.speed_min.min(speed);
        self.speed_max = self.speed_max.max(speed);
        self.frenet = self.frenet.max(frenet);
        self.samples += 1;
        true
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct DistanceConfig {
    /// Pairs closer than this in arclength on the same curve are skipped.
    pub diagonal_exclusion: f64,
    pub initial_step: f64,
    pub min_step: f64,
}

impl Default for DistanceConfig {
    fn default() -> Self {
        Self {
            diagonal_exclusion: PI,
            initial_step: 0.05,
            min_step: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum DistanceStatus {
    /// The lower bound is positive: no two points at least the diagonal
    /// exclusion apart coincide.
    Certified,
    /// Local minimization found two points closer than [`INTERSECTION_TOL`].
    Intersecting,
    /// Neither a positive bound nor an intersection at the finest step.
    Indeterminate,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct Witness {
    pub curve_a: usize,
    pub s_a: f64,
    pub curve_b: usize,
    pub s_b: f64,
    pub distance: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DistanceCertificate {
    pub status: DistanceStatus,
    /// Lower bound on the distance between admissible pairs; positive iff
    /// certified.
    pub bound: f64,
    /// Smallest sampled distance over admissible sample pairs.
    pub sampled_min: f64,
    pub step: f64,
    pub samples: usize,
    /// Closest admissible pair after local refinement.
    pub closest: Option<Witness>,
}

impl DistanceCertificate {
    pub fn is_certified(&self) -> bool {
        self.status == DistanceStatus::Certified
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self.status {
            DistanceStatus::Intersecting => self.closest.as_ref(),
            _ => None,
        }
    }
}

struct Sample {
    curve: usize,
    at: LocalPosition,
    s: f64,
    point: Vec3,
}

fn sample_curves(curves: &[&PiecewiseCurve], step: f64) -> Vec<Sample> {
    let mut out = Vec::new();
    for (ci, curve) in curves.iter().enumerate() {
        for k in 0..curve.len() {
            let len = curve.segment_length(k);
            let count = ((len / step).ceil() as usize).max(1);
            for i in 0..count {
                let at = LocalPosition {
                    segment: k,
                    offset: len * i as f64 / count as f64,
                };
                out.push(Sample {
                    curve: ci,
                    at,
                    s: curve.arclength_of(at),
                    point: curve.local_point(at),
                });
            }
        }
        if !curve.is_closed() {
            let k = curve.len() - 1;
            let at = LocalPosition {
                segment: k,
                offset: curve.segment_length(k),
            };
            out.push(Sample {
                curve: ci,
                at,
                s: curve.length(),
                point: curve.local_point(at),
            });
        }
    }
    out
}

fn arclength_gap(curve: &PiecewiseCurve, s: f64, t: f64) -> f64 {
    let d = (s - t).abs();
    if curve.is_closed() {
        d.min(curve.length() - d)
    } else {
        d
    }
}

/// Candidate pair found by the sampled scan.
#[derive(Clone, Copy)]
struct Candidate {
    distance: f64,
    a: usize,
    b: usize,
}

/// Admissible sample pairs closer than `radius`, found with a uniform grid.
/// Returns the smallest distance seen and the closest few pairs.
fn scan_pairs(
    curves: &[&PiecewiseCurve],
    samples: &[Sample],
    radius: f64,
    min_gap: f64,
    keep: usize,
) -> (f64, Vec<Candidate>) {
    let cell = |p: &Vec3| {
        (
            (p.x / radius).floor() as i64,
            (p.y / radius).floor() as i64,
            (p.z / radius).floor() as i64,
        )
    };
    let mut grid: HashMap<(i64, i64, i64), Vec<usize>> = HashMap::new();
    for (i, s) in samples.iter().enumerate() {
        grid.entry(cell(&s.point)).or_default().push(i);
    }
    let mut best = f64::INFINITY;
    let mut candidates: Vec<Candidate> = Vec::new();
    let mut worst_kept = f64::INFINITY;
    for (i, si) in samples.iter().enumerate() {
        let (cx, cy, cz) = cell(&si.point);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    let Some(bucket) = grid.get(&(cx + dx, cy + dy, cz + dz)) else {
                        continue;
                    };
                    for &j in bucket {
                        if j <= i {
                            continue;
                        }
                        let sj = &samples[j];
                        if si.curve == sj.curve
                            && arclength_gap(curves[si.curve], si.s, sj.s) < min_gap
                        {
                            continue;
                        }
                        let d = curves[si.curve].chord(si.at, curves[sj.curve], sj.at).norm();
                        if d >= radius {
                            continue;
                        }
                        best = best.min(d);
                        if candidates.len() < keep || d < worst_kept {
                            candidates.push(Candidate { distance: d, a: i, b: j });
                            if candidates.len() > 4 * keep.max(1) {
                                candidates.sort_by(|x, y| x.distance.total_cmp(&y.distance));
                                candidates.truncate(keep);
                                worst_kept = candidates.last().map_or(f64::INFINITY, |c| c.distance);
                            }
                        }
                    }
                }
            }
        }
    }
    candidates.sort_by(|x, y| x.distance.total_cmp(&y.distance));
    candidates.truncate(keep);
    (best, candidates)
}

/// Newton iteration on `|r_a(s) − r_b(t)|²` from a sampled pair.
fn refine_pair(
    curves: &[&PiecewiseCurve],
    ca: usize,
    sa: f64,
    cb: usize,
    sb: f64,
    min_gap: f64,
) -> Option<Witness> {
    let (a, b) = (curves[ca], curves[cb]);
    let clamp = |c: &PiecewiseCurve, s: f64| {
        if c.is_closed() {
            s
        } else {
            s.clamp(0.0, c.length())
        }
    };
    let eval = |s: f64, t: f64| -> Option<(Vec3, Vec3, Vec3, Vec3, Vec3)> {
        let pa = a.local_position(s).ok()?;
        let pb = b.local_position(t).ok()?;
        // r_a(s) − r_b(t)
        let diff = b.chord(pb, a, pa);
        Some((
            diff,
            a.local_frame(pa).tangent,
            b.local_frame(pb).tangent,
            a.local_acceleration(pa),
            b.local_acceleration(pb),
        ))
    };
    let (mut s, mut t) = (sa, sb);
    let mut best: Option<(f64, f64, f64)> = None;
    for _ in 0..60 {
        let (d, ta, tb, aa, ab) = eval(s, t)?;
        let dist = d.norm();
        if best.is_none_or(|(bd, _, _)| dist < bd) {
            best = Some((dist, s, t));
        }
        if dist < 1e-14 {
            break;
        }
        // Gradient and Hessian of f = |d|²/2 with d = r_a(s) − r_b(t).
        let gs = d.dot(&ta);
        let gt = -d.dot(&tb);
        let hss = 1.0 + d.dot(&aa);
        let htt = 1.0 - d.dot(&ab);
        let hst = -ta.dot(&tb);
        let det = hss * htt - hst * hst;
        let (mut ds, mut dt) = if det > 1e-12 && hss > 0.0 {
            (-(htt * gs - hst * gt) / det, -(hss * gt - hst * gs) / det)
        } else {
            (-gs, -gt)
        };
        let max_move = 0.5;
        let norm = ds.hypot(dt);
        if norm > max_move {
            ds *= max_move / norm;
            dt *= max_move / norm;
        }
        if norm < 1e-16 {
            break;
        }
        s = clamp(a, s + ds);
        t = clamp(b, t + dt);
    }
    let (dist, s, t) = best?;
    if ca == cb && arclength_gap(a, s, t) < min_gap {
        return None;
    }
    Some(Witness {
        curve_a: ca,
        s_a: s,
        curve_b: cb,
        s_b: t,
        distance: dist,
    })
}

/// Lower bound on the distance between any two points of `curves`, where
/// pairs on the same curve closer than the diagonal exclusion in arclength
/// are ignored. Halves the sampling step until a positive bound or an
/// intersection is found, or the step floor is reached.
pub fn certified_min_distance(curves: &[&PiecewiseCurve], config: &DistanceConfig) -> DistanceCertificate {
    let mut step = config.initial_step;
    loop {
        let cert = certify_at_step(curves, config.diagonal_exclusion, step);
        if cert.status != DistanceStatus::Indeterminate || step / 2.0 < config.min_step {
            return cert;
        }
        step /= 2.0;
    }
}

/// One pass of [`certified_min_distance`] at a fixed step.
pub fn certify_at_step(curves: &[&PiecewiseCurve], diagonal_exclusion: f64, step: f64) -> DistanceCertificate {
    let samples = sample_curves(curves, step);
    let min_gap = (diagonal_exclusion - step).max(0.0);
    let extent = samples
        .iter()
        .fold((Vec3::repeat(f64::INFINITY), Vec3::repeat(f64::NEG_INFINITY)), |(lo, hi), s| {
            (lo.inf(&s.point), hi.sup(&s.point))
        });
    let diameter = (extent.1 - extent.0).norm().max(1.0);

    // Grow the search radius until some admissible pair shows up.
    let mut radius = 1.0;
    let (sampled_min, candidates) = loop {
        let (best, cands) = scan_pairs(curves, &samples, radius, min_gap, 16);
        if best.is_finite() || radius > 2.0 * diameter {
            break (best.min(radius), cands);
        }
        radius *= 2.0;
    };

    let closest = candidates
        .iter()
        .filter_map(|c| {
            let (a, b) = (&samples[c.a], &samples[c.b]);
            refine_pair(curves, a.curve, a.s, b.curve, b.s, diagonal_exclusion)
        })
        .min_by(|x, y| x.distance.total_cmp(&y.distance));

    let bound = sampled_min - step;
    let status = if bound > 0.0 {
        DistanceStatus::Certified
    } else if closest.is_some_and(|w| w.distance < INTERSECTION_TOL) {
        DistanceStatus::Intersecting
    } else {
        DistanceStatus::Indeterminate
    };
    DistanceCertificate {
        status,
        bound,
        sampled_min,
        step,
        samples: samples.len(),
        closest,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TubeReport {
    pub max_distance: f64,
    pub radius: f64,
    pub samples: usize,
    pub passed: bool,
}

/// Largest distance from the curve to the line through its endpoints.
pub fn tube_radius_check(curve: &PiecewiseCurve, min_samples: usize) -> Result<TubeReport> {
    let chord = curve.displacement();
    let len = chord.norm();
    if len <= CONSTRUCTION_TOL {
        return Err(Error::CoincidentEndpoints);
    }
    let axis = chord / len;
    let origin = curve.start_point();
    let n = min_samples.max(2);
    let total = curve.length();
    let mut max_distance: f64 = 0.0;
    for i in 0..=n {
        let s = total * i as f64 / n as f64;
        let v = curve.offset(s.min(total), &origin)?;
        max_distance = max_distance.max((v - axis * v.dot(&axis)).norm());
    }
    // Joint endpoints are where the sticks turn; include them exactly.
    for &s in curve.cumulative_lengths() {
        let v = curve.offset(s.min(total), &origin)?;
        max_distance = max_distance.max((v - axis * v.dot(&axis)).norm());
    }
    let radius = PI;
    Ok(TubeReport {
        max_distance,
        radius,
        samples: n + 1 + curve.cumulative_lengths().len(),
        passed: max_distance <= radius * (1.0 + JOINT_TOL),
    })
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct VerifyConfig {
    pub joint_tol: f64,
    pub curvature: CurvatureConfig,
    pub distance: DistanceConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            joint_tol: JOINT_TOL,
            curvature: CurvatureConfig::default(),
            distance: DistanceConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ComponentReport {
    pub closed: bool,
    pub length: f64,
    pub segments: usize,
    pub closure_residual: f64,
    pub c2: C2Report,
    pub curvature: CurvatureReport,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct VerificationReport {
    pub components: Vec<ComponentReport>,
    pub distance: DistanceCertificate,
    pub passed: bool,
}

/// Full suite: C² joints, curvature, closure of closed curves, and a joint
/// simplicity certificate for all curves together.
pub fn verify_curves(curves: &[&PiecewiseCurve], config: &VerifyConfig) -> VerificationReport {
    let components: Vec<ComponentReport> = curves
        .iter()
        .map(|c| ComponentReport {
            closed: c.is_closed(),
            length: c.length(),
            segments: c.len(),
            closure_residual: if c.is_closed() { c.seam_residual().max() } else { 0.0 },
            c2: check_c2(c, config.joint_tol),
            curvature: check_curvature(c, &config.curvature),
        })
        .collect();
    let distance = certified_min_distance(curves, &config.distance);
    let passed = !curves.is_empty()
        && components.iter().all(|c| c.c2.passed && c.curvature.passed)
        && distance.is_certified();
    VerificationReport {
        components,
        distance,
        passed,
    }
}
