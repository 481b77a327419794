//! Helix arcs, Frenet frames and the splicing of constant-curvature curves.
//!
//! Every curve in this crate is a chain of circular-helix arcs, each placed in
//! space by a proper rigid motion. Splicing rotates the second curve so its
//! initial Frenet frame lands on the terminal frame of the first, then
//! translates it onto the first curve's endpoint. Position, unit tangent and
//! `κN` therefore agree at the joint, so the result is C² with the same
//! constant curvature.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;

/// Identities that hold by construction (frames, rotations, curvature).
pub const CONSTRUCTION_TOL: f64 = 1e-12;
/// Residual allowed between the two sides of a joint.
pub const JOINT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetFrame {
    pub tangent: Vec3,
    pub normal: Vec3,
    pub binormal: Vec3,
}

impl FrenetFrame {
    /// Columns are (T, N, B).
    pub fn matrix(&self) -> Mat3 {
        Mat3::from_columns(&[self.tangent, self.normal, self.binormal])
    }

    pub fn rotated(&self, rotation: &Mat3) -> Self {
        Self {
            tangent: rotation * self.tangent,
            normal: rotation * self.normal,
            binormal: rotation * self.binormal,
        }
    }

    /// Largest absolute difference over the nine matrix entries.
    pub fn max_abs_diff(&self, other: &FrenetFrame) -> f64 {
        (self.matrix() - other.matrix()).amax()
    }

    /// Worst violation of orthonormality and right-handedness.
    pub fn orthonormality_residual(&self) -> f64 {
        let (t, n, b) = (&self.tangent, &self.normal, &self.binormal);
        [
            t.dot(n).abs(),
            t.dot(b).abs(),
            n.dot(b).abs(),
            (t.norm() - 1.0).abs(),
            (n.norm() - 1.0).abs(),
            (b.norm() - 1.0).abs(),
            (t.cross(n) - b).amax(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// A proper rigid motion `x ↦ R x + w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidMotion {
    pub rotation: Mat3,
    pub translation: Vec3,
}

impl Default for RigidMotion {
    fn default() -> Self {
        Self::identity()
    }
}

impl RigidMotion {
    pub fn identity() -> Self {
        Self {
            rotation: Mat3::identity(),
            translation: Vec3::zeros(),
        }
    }

    pub fn translation(w: Vec3) -> Self {
        Self {
            rotation: Mat3::identity(),
            translation: w,
        }
    }

    /// Builds a motion, rejecting matrices that are not in SO(3) within `tol`.
    pub fn try_new(rotation: Mat3, translation: Vec3, tol: f64) -> Result<Self> {
        let motion = Self {
            rotation,
            translation,
        };
        let residual = motion.rotation_residual();
        if residual > tol || !residual.is_finite() {
            return Err(Error::NotARotation(residual));
        }
        Ok(motion)
    }

    /// max(|RᵀR − I|, |det R − 1|).
    pub fn rotation_residual(&self) -> f64 {
        let r = &self.rotation;
        let ortho = (r.transpose() * r - Mat3::identity()).amax();
        ortho.max((r.determinant() - 1.0).abs())
    }

    pub fn apply_point(&self, p: &Vec3) -> Vec3 {
        self.rotation * p + self.translation
    }

    pub fn apply_vector(&self, v: &Vec3) -> Vec3 {
        self.rotation * v
    }

    /// `outer ∘ self`.
    pub fn then(&self, outer: &RigidMotion) -> RigidMotion {
        RigidMotion {
            rotation: outer.rotation * self.rotation,
            translation: outer.rotation * self.translation + outer.translation,
        }
    }
}

/// Arc `t ∈ [t_start, t_end]` of the helix `(r cos t, r sin t, h t)`.
///
/// The sign of `h` carries the handedness; `h = 0` gives a circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSegment", into = "RawSegment")]
pub struct HelixSegment {
    radius: f64,
    pitch: f64,
    t_start: f64,
    t_end: f64,
}

#[derive(Serialize, Deserialize)]
struct RawSegment {
    r: f64,
    h: f64,
    t_i: f64,
    t_e: f64,
}

impl TryFrom<RawSegment> for HelixSegment {
    type Error = Error;
    fn try_from(raw: RawSegment) -> Result<Self> {
        HelixSegment::new(raw.r, raw.h, raw.t_i, raw.t_e)
    }
}

impl From<HelixSegment> for RawSegment {
    fn from(seg: HelixSegment) -> Self {
        RawSegment {
            r: seg.radius,
            h: seg.pitch,
            t_i: seg.t_start,
            t_e: seg.t_end,
        }
    }
}

impl HelixSegment {
    pub fn new(radius: f64, pitch: f64, t_start: f64, t_end: f64) -> Result<Self> {
        let invalid = |reason| Error::InvalidSegment {
            radius,
            pitch,
            t_start,
            t_end,
            reason,
        };
        if ![radius, pitch, t_start, t_end].iter().all(|v| v.is_finite()) {
            return Err(invalid("non-finite parameter"));
        }
        if radius <= 0.0 {
            return Err(invalid("radius must be positive"));
        }
        if t_end <= t_start {
            return Err(invalid("t_e must exceed t_i"));
        }
        Ok(Self {
            radius,
            pitch,
            t_start,
            t_end,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    /// |α'(t)| = √(r² + h²).
    pub fn speed(&self) -> f64 {
        self.radius.hypot(self.pitch)
    }

    /// κ = r / (r² + h²).
    pub fn curvature(&self) -> f64 {
        self.radius / (self.radius * self.radius + self.pitch * self.pitch)
    }

    /// τ = h / (r² + h²).
    pub fn torsion(&self) -> f64 {
        self.pitch / (self.radius * self.radius + self.pitch * self.pitch)
    }

    pub fn arclength(&self) -> f64 {
        self.speed() * (self.t_end - self.t_start)
    }

    fn check_angle(&self, t: f64) -> Result<()> {
        // A few ulps of slack so interpolated endpoints are accepted.
        let slack = 4.0 * f64::EPSILON * self.t_start.abs().max(self.t_end.abs()).max(1.0);
        if t < self.t_start - slack || t > self.t_end + slack || t.is_nan() {
            return Err(Error::AngleOutOfDomain {
                t,
                t_start: self.t_start,
                t_end: self.t_end,
            });
        }
        Ok(())
    }

    pub fn point(&self, t: f64) -> Result<Vec3> {
        self.check_angle(t)?;
        Ok(self.point_at(t))
    }

    pub fn frame(&self, t: f64) -> Result<FrenetFrame> {
        self.check_angle(t)?;
        Ok(self.frame_at(t))
    }

    pub(crate) fn point_at(&self, t: f64) -> Vec3 {
        let (sin, cos) = t.sin_cos();
        Vec3::new(self.radius * cos, self.radius * sin, self.pitch * t)
    }

    pub(crate) fn frame_at(&self, t: f64) -> FrenetFrame {
        let (sin, cos) = t.sin_cos();
        let c = self.speed();
        let tangent = Vec3::new(-self.radius * sin / c, self.radius * cos / c, self.pitch / c);
        let normal = Vec3::new(-cos, -sin, 0.0);
        FrenetFrame {
            tangent,
            normal,
            binormal: tangent.cross(&normal),
        }
    }

    /// Angle reached after travelling `s` along the arc from its start.
    pub(crate) fn angle_at_arclength(&self, s: f64) -> f64 {
        (self.t_start + s / self.speed()).clamp(self.t_start, self.t_end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlacedSegment {
    pub segment: HelixSegment,
    pub motion: RigidMotion,
}

impl PlacedSegment {
    pub fn point_at(&self, t: f64) -> Vec3 {
        self.motion.apply_point(&self.segment.point_at(t))
    }

    pub fn frame_at(&self, t: f64) -> FrenetFrame {
        self.segment.frame_at(t).rotated(&self.motion.rotation)
    }

    /// Second derivative with respect to arclength, `κN`.
    pub fn acceleration_at(&self, t: f64) -> Vec3 {
        self.frame_at(t).normal * self.segment.curvature()
    }

    /// `point_at(t) − origin`, subtracting the translation first so that far
    /// from the origin the difference keeps its precision.
    pub fn offset_at(&self, t: f64, origin: &Vec3) -> Vec3 {
        self.motion.rotation * self.segment.point_at(t) + (self.motion.translation - origin)
    }
}

/// Where an arclength value falls on a curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveLocation {
    pub segment: usize,
    pub angle: f64,
}

/// A point on a curve given as (segment index, arclength into that segment).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalPosition {
    pub segment: usize,
    pub offset: f64,
}

/// Residuals between the two sides of one joint.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct JointResidual {
    pub position: f64,
    pub tangent: f64,
    pub acceleration: f64,
}

impl JointResidual {
    pub fn max(&self) -> f64 {
        self.position.max(self.tangent).max(self.acceleration)
    }
}

fn joint_residual(before: &PlacedSegment, after: &PlacedSegment) -> JointResidual {
    let t_end = before.segment.t_end;
    let t_start = after.segment.t_start;
    let end_point = before.point_at(t_end);
    JointResidual {
        position: after.offset_at(t_start, &end_point).norm(),
        tangent: (before.frame_at(t_end).tangent - after.frame_at(t_start).tangent).norm(),
        acceleration: (before.acceleration_at(t_end) - after.acceleration_at(t_start)).norm(),
    }
}

/// An arclength-parameterized chain of placed helix arcs.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseCurve {
    segments: Vec<PlacedSegment>,
    cumulative: Vec<f64>,
    closed: bool,
}

impl PiecewiseCurve {
    /// Assembles an open curve from already-placed segments. Joints are not
    /// checked here; that is the verifier's job.
    pub fn from_placed(segments: Vec<PlacedSegment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::EmptyCurve);
        }
        let mut cumulative = Vec::with_capacity(segments.len() + 1);
        let mut acc = 0.0;
        cumulative.push(acc);
        for seg in &segments {
            acc += seg.segment.arclength();
            cumulative.push(acc);
        }
        Ok(Self {
            segments,
            cumulative,
            closed: false,
        })
    }

    pub fn from_segment(segment: HelixSegment) -> Self {
        Self {
            segments: vec![PlacedSegment {
                segment,
                motion: RigidMotion::identity(),
            }],
            cumulative: vec![0.0, segment.arclength()],
            closed: false,
        }
    }

    pub fn segments(&self) -> &[PlacedSegment] {
        &self.segments
    }

    /// Arclength at the start of each segment, followed by the total length.
    pub fn cumulative_lengths(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn length(&self) -> f64 {
        *self.cumulative.last().expect("cumulative is never empty")
    }

    pub fn start_point(&self) -> Vec3 {
        let first = &self.segments[0];
        first.point_at(first.segment.t_start)
    }

    pub fn end_point(&self) -> Vec3 {
        let last = self.segments.last().expect("nonempty");
        last.point_at(last.segment.t_end)
    }

    pub fn start_frame(&self) -> FrenetFrame {
        let first = &self.segments[0];
        first.frame_at(first.segment.t_start)
    }

    pub fn end_frame(&self) -> FrenetFrame {
        let last = self.segments.last().expect("nonempty");
        last.frame_at(last.segment.t_end)
    }

    /// End point minus start point, computed without losing precision to
    /// large translations.
    pub fn displacement(&self) -> Vec3 {
        let last = self.segments.last().expect("nonempty");
        let first = &self.segments[0];
        let start = first.segment.point_at(first.segment.t_start);
        last.motion.rotation * last.segment.point_at(last.segment.t_end)
            - first.motion.rotation * start
            + (last.motion.translation - first.motion.translation)
    }

    /// The common curvature of all segments, if they agree within `tol`.
    pub fn constant_curvature(&self, tol: f64) -> Option<f64> {
        let kappa = self.segments[0].segment.curvature();
        self.segments
            .iter()
            .all(|s| (s.segment.curvature() - kappa).abs() <= tol)
            .then_some(kappa)
    }

    /// Maps an arclength to a segment index and local helix angle. Closed
    /// curves wrap `s` modulo the total length.
    pub fn locate(&self, s: f64) -> Result<CurveLocation> {
        let length = self.length();
        let s = if self.closed {
            s.rem_euclid(length)
        } else if (0.0..=length).contains(&s) {
            s
        } else {
            return Err(Error::ArclengthOutOfRange { s, length });
        };
        let idx = self
            .cumulative
            .partition_point(|&c| c <= s)
            .saturating_sub(1)
            .min(self.segments.len() - 1);
        let seg = &self.segments[idx].segment;
        Ok(CurveLocation {
            segment: idx,
            angle: seg.angle_at_arclength(s - self.cumulative[idx]),
        })
    }

    pub fn eval(&self, s: f64) -> Result<(Vec3, FrenetFrame)> {
        let loc = self.locate(s)?;
        let seg = &self.segments[loc.segment];
        Ok((seg.point_at(loc.angle), seg.frame_at(loc.angle)))
    }

    pub fn point(&self, s: f64) -> Result<Vec3> {
        let loc = self.locate(s)?;
        Ok(self.segments[loc.segment].point_at(loc.angle))
    }

    /// `r(s) − origin`, precise even when the curve sits far from the origin.
    pub fn offset(&self, s: f64, origin: &Vec3) -> Result<Vec3> {
        let loc = self.locate(s)?;
        Ok(self.segments[loc.segment].offset_at(loc.angle, origin))
    }

    /// Rotation and translation that [`splice`](Self::splice) would apply to
    /// `next`.
    pub fn splice_motion(&self, next: &PiecewiseCurve) -> RigidMotion {
        let rotation = self.end_frame().matrix() * next.start_frame().matrix().transpose();
        let translation = self.end_point() - rotation * next.start_point();
        RigidMotion {
            rotation,
            translation,
        }
    }

    /// Γ₁ * Γ₂: attach `next` to the end of `self` so the joint is C².
    pub fn splice(&self, next: &PiecewiseCurve) -> Result<PiecewiseCurve> {
        let mut out = self.clone();
        out.append(next)?;
        Ok(out)
    }

    /// In-place [`splice`](Self::splice).
    pub fn append(&mut self, next: &PiecewiseCurve) -> Result<()> {
        if self.closed || next.closed {
            return Err(Error::ClosedCurve);
        }
        let kappa = self.segments[0].segment.curvature();
        for seg in self.segments.iter().chain(&next.segments) {
            let other = seg.segment.curvature();
            if (other - kappa).abs() > CONSTRUCTION_TOL {
                return Err(Error::CurvatureMismatch {
                    first: kappa,
                    second: other,
                });
            }
        }
        let motion = self.splice_motion(next);
        // Running sum, as in from_placed, so a reloaded curve is identical.
        let mut acc = self.length();
        for s in &next.segments {
            acc += s.segment.arclength();
            self.cumulative.push(acc);
            self.segments.push(PlacedSegment {
                segment: s.segment,
                motion: s.motion.then(&motion),
            });
        }
        Ok(())
    }

    /// Left fold of [`splice`](Self::splice) over a sequence of curves.
    pub fn splice_all<'a, I>(curves: I) -> Result<PiecewiseCurve>
    where
        I: IntoIterator<Item = &'a PiecewiseCurve>,
    {
        let mut iter = curves.into_iter();
        let mut out = iter.next().ok_or(Error::EmptyCurve)?.clone();
        for next in iter {
            out.append(next)?;
        }
        Ok(out)
    }

    /// Arclength of segment `k`.
    pub fn segment_length(&self, k: usize) -> f64 {
        self.cumulative[k + 1] - self.cumulative[k]
    }

    /// Moves `delta` along the curve from a local position, crossing joints
    /// (and the seam of a closed curve) as needed. Returns `None` when an
    /// open curve runs out.
    ///
    /// Working in per-segment offsets keeps stencils symmetric: a global
    /// arclength near 10⁴ cannot represent a step of 10⁻⁴ exactly.
    pub fn step(&self, from: LocalPosition, delta: f64) -> Option<LocalPosition> {
        let n = self.segments.len();
        let mut k = from.segment;
        let mut u = from.offset + delta;
        let mut guard = 0usize;
        loop {
            let len = self.segment_length(k);
            if u < 0.0 {
                if k == 0 && !self.closed {
                    return None;
                }
                k = if k == 0 { n - 1 } else { k - 1 };
                u += self.segment_length(k);
            } else if u > len {
                if k == n - 1 && !self.closed {
                    return None;
                }
                u -= len;
                k = (k + 1) % n;
            } else {
                return Some(LocalPosition {
                    segment: k,
                    offset: u,
                });
            }
            guard += 1;
            if guard > 2 * n + 2 {
                return None;
            }
        }
    }

    pub fn local_point(&self, at: LocalPosition) -> Vec3 {
        let seg = &self.segments[at.segment];
        seg.point_at(seg.segment.angle_at_arclength(at.offset))
    }

    pub fn local_frame(&self, at: LocalPosition) -> FrenetFrame {
        let seg = &self.segments[at.segment];
        seg.frame_at(seg.segment.angle_at_arclength(at.offset))
    }

    pub fn local_acceleration(&self, at: LocalPosition) -> Vec3 {
        let seg = &self.segments[at.segment];
        seg.acceleration_at(seg.segment.angle_at_arclength(at.offset))
    }

    /// Global arclength of a local position.
    pub fn arclength_of(&self, at: LocalPosition) -> f64 {
        self.cumulative[at.segment] + at.offset
    }

    /// `r(to) − r(from)` without ever forming the absolute positions.
    pub fn chord(&self, from: LocalPosition, other: &PiecewiseCurve, to: LocalPosition) -> Vec3 {
        let a = &self.segments[from.segment];
        let b = &other.segments[to.segment];
        let pa = a.segment.point_at(a.segment.angle_at_arclength(from.offset));
        let pb = b.segment.point_at(b.segment.angle_at_arclength(to.offset));
        if std::ptr::eq(a, b) {
            return a.motion.rotation * (pb - pa);
        }
        b.motion.rotation * pb - a.motion.rotation * pa
            + (b.motion.translation - a.motion.translation)
    }

    /// Local position of a global arclength (wrapping for closed curves).
    pub fn local_position(&self, s: f64) -> Result<LocalPosition> {
        let loc = self.locate(s)?;
        let seg = &self.segments[loc.segment].segment;
        Ok(LocalPosition {
            segment: loc.segment,
            offset: ((loc.angle - seg.t_start) * seg.speed()).clamp(0.0, seg.arclength()),
        })
    }

    pub fn transformed(&self, motion: &RigidMotion) -> PiecewiseCurve {
        PiecewiseCurve {
            segments: self
                .segments
                .iter()
                .map(|s| PlacedSegment {
                    segment: s.segment,
                    motion: s.motion.then(motion),
                })
                .collect(),
            cumulative: self.cumulative.clone(),
            closed: self.closed,
        }
    }

    pub fn translated(&self, w: Vec3) -> PiecewiseCurve {
        self.transformed(&RigidMotion::translation(w))
    }

    /// Residual at each interior joint, plus the seam for closed curves.
    pub fn joint_residuals(&self) -> Vec<JointResidual> {
        let mut out: Vec<JointResidual> = self
            .segments
            .windows(2)
            .map(|w| joint_residual(&w[0], &w[1]))
            .collect();
        if self.closed {
            out.push(self.seam_residual());
        }
        out
    }

    pub fn seam_residual(&self) -> JointResidual {
        joint_residual(self.segments.last().expect("nonempty"), &self.segments[0])
    }

    /// Marks the curve closed after checking that its end meets its start
    /// C² within `tol`.
    pub fn close(mut self, tol: f64) -> Result<PiecewiseCurve> {
        let residual = self.seam_residual().max();
        if residual > tol || !residual.is_finite() {
            return Err(Error::SeamMismatch {
                residual,
                tolerance: tol,
            });
        }
        self.closed = true;
        Ok(self)
    }

    /// Marks the curve closed without checking the seam.
    pub fn assume_closed(mut self) -> PiecewiseCurve {
        self.closed = true;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

    fn seg(r: f64, h: f64, a: f64, b: f64) -> HelixSegment {
        HelixSegment::new(r, h, a, b).unwrap()
    }

    fn close(a: &Vec3, b: &Vec3, tol: f64) -> bool {
        (a - b).amax() <= tol
    }

    #[test]
    fn helix_points() {
        let circle = seg(1.0, 0.0, 0.0, 2.0 * PI);
        assert_eq!(circle.point(0.0).unwrap(), Vec3::new(1.0, 0.0, 0.0));

        let l = seg(0.5, 0.5, 0.0, 8.0 * PI);
        let p = l.point(8.0 * PI).unwrap();
        assert!(close(&p, &Vec3::new(0.5, 0.0, 4.0 * PI), 1e-14));

        let d = seg(0.5, -0.5, 1.5 * PI, 2.0 * PI);
        let p = d.point(1.5 * PI).unwrap();
        assert!(close(&p, &Vec3::new(0.0, -0.5, -0.75 * PI), 1e-15));
    }

    #[test]
    fn angle_outside_domain_is_rejected() {
        let d = seg(0.5, -0.5, 1.5 * PI, 2.0 * PI);
        assert!(matches!(d.point(0.0), Err(Error::AngleOutOfDomain { .. })));
        assert!(matches!(d.frame(7.0), Err(Error::AngleOutOfDomain { .. })));
    }

    #[test]
    fn invalid_segments() {
        assert!(HelixSegment::new(0.0, 1.0, 0.0, 1.0).is_err());
        assert!(HelixSegment::new(1.0, 1.0, 1.0, 1.0).is_err());
        assert!(HelixSegment::new(1.0, f64::NAN, 0.0, 1.0).is_err());
    }

    #[test]
    fn curvature_and_torsion() {
        assert_eq!(seg(1.0, 0.0, 0.0, 1.0).curvature(), 1.0);
        assert_eq!(seg(0.5, 0.5, 0.0, 1.0).curvature(), 1.0);
        assert_eq!(seg(0.5, -0.5, 0.0, 1.0).curvature(), 1.0);
        assert_eq!(seg(1.0, 0.0, 0.0, 1.0).torsion(), 0.0);
        assert_eq!(seg(0.5, 0.5, 0.0, 1.0).torsion(), 1.0);
        assert_eq!(seg(0.5, -0.5, 0.0, 1.0).torsion(), -1.0);
        assert_eq!(seg(1.0, 1.0, 0.0, 1.0).curvature(), 0.5);
    }

    /// Composite Simpson on |α'(t)|, independent of the closed form.
    fn quadrature_length(s: &HelixSegment) -> f64 {
        let n = 2000;
        let h = (s.t_end() - s.t_start()) / n as f64;
        let speed = |t: f64| {
            let d = Vec3::new(-s.radius() * t.sin(), s.radius() * t.cos(), s.pitch());
            d.norm()
        };
        let mut acc = speed(s.t_start()) + speed(s.t_end());
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * speed(s.t_start() + i as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn arclengths_match_quadrature() {
        let cases = [
            (seg(1.0, 0.0, 0.0, PI), PI),
            (seg(0.5, 0.5, 0.0, 8.0 * PI), 4.0 * PI * SQRT_2),
            (seg(0.5, -0.5, 0.0, PI / 2.0), PI * SQRT_2 / 4.0),
        ];
        for (s, expected) in cases {
            assert!((s.arclength() - expected).abs() < 1e-12);
            assert!((quadrature_length(&s) - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn frames() {
        let f = seg(1.0, 0.0, 0.0, 1.0).frame(0.0).unwrap();
        assert!(close(&f.tangent, &Vec3::new(0.0, 1.0, 0.0), 1e-15));
        assert!(close(&f.normal, &Vec3::new(-1.0, 0.0, 0.0), 1e-15));
        assert!(close(&f.binormal, &Vec3::new(0.0, 0.0, 1.0), 1e-15));

        let l = seg(0.5, 0.5, 0.0, 8.0 * PI);
        let f0 = l.frame(0.0).unwrap();
        assert!(close(&f0.tangent, &Vec3::new(0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2), 1e-15));
        assert!(close(&f0.normal, &Vec3::new(-1.0, 0.0, 0.0), 1e-15));
        assert!(close(&f0.binormal, &Vec3::new(0.0, -FRAC_1_SQRT_2, FRAC_1_SQRT_2), 1e-15));
        let f8 = l.frame(8.0 * PI).unwrap();
        assert!(f0.max_abs_diff(&f8) < 1e-14);
    }

    #[test]
    fn frame_orthonormal_on_samples() {
        for s in [
            seg(1.0, 0.0, 0.0, PI),
            seg(0.5, 0.5, 0.0, 8.0 * PI),
            seg(0.5, -0.5, 1.5 * PI, 2.0 * PI),
            seg(2.0, -3.0, -1.0, 5.0),
        ] {
            for i in 0..100 {
                let t = s.t_start() + (s.t_end() - s.t_start()) * i as f64 / 99.0;
                assert!(s.frame(t).unwrap().orthonormality_residual() <= 1e-12);
            }
        }
    }

    #[test]
    fn eval_single_segments() {
        let circle = PiecewiseCurve::from_segment(seg(1.0, 0.0, 0.0, 2.0 * PI));
        let (p, f) = circle.eval(0.0).unwrap();
        assert_eq!(p, Vec3::new(1.0, 0.0, 0.0));
        assert!(close(&f.tangent, &Vec3::new(0.0, 1.0, 0.0), 1e-15));

        let k = PiecewiseCurve::from_segment(seg(0.5, 0.5, 0.0, 8.0 * PI));
        let (p, _) = k.eval(4.0 * PI * SQRT_2).unwrap();
        assert!(close(&p, &Vec3::new(0.5, 0.0, 4.0 * PI), 1e-12));
        assert!(k.eval(-0.1).is_err());
        assert!(k.eval(k.length() + 1e-6).is_err());
    }

    #[test]
    fn closed_curves_wrap() {
        let circle = PiecewiseCurve::from_segment(seg(1.0, 0.0, 0.0, 2.0 * PI))
            .close(JOINT_TOL)
            .unwrap();
        let a = circle.point(1.0).unwrap();
        let b = circle.point(1.0 + 2.0 * PI).unwrap();
        assert!(close(&a, &b, 1e-12));
        assert!(circle.point(-1.0).is_ok());
    }

    #[test]
    fn identity_splice() {
        let a = PiecewiseCurve::from_segment(seg(0.5, 0.5, 0.0, PI / 2.0));
        let b = PiecewiseCurve::from_segment(seg(0.5, 0.5, PI / 2.0, PI));
        let m = a.splice_motion(&b);
        assert!((m.rotation - Mat3::identity()).amax() < 1e-12);
        assert!(m.translation.amax() < 1e-12);
    }

    #[test]
    fn splice_rejects_mismatch_and_closed() {
        let a = PiecewiseCurve::from_segment(seg(1.0, 0.0, 0.0, PI));
        let b = PiecewiseCurve::from_segment(seg(1.0, 1.0, 0.0, PI));
        assert!(matches!(a.splice(&b), Err(Error::CurvatureMismatch { .. })));
        let c = PiecewiseCurve::from_segment(seg(1.0, 0.0, 0.0, 2.0 * PI))
            .close(JOINT_TOL)
            .unwrap();
        assert!(matches!(a.splice(&c), Err(Error::ClosedCurve)));
        assert!(matches!(c.splice(&a), Err(Error::ClosedCurve)));
    }

    #[test]
    fn splice_joint_is_c2() {
        let a = PiecewiseCurve::from_segment(seg(0.5, 0.5, 0.0, PI / 2.0));
        let b = PiecewiseCurve::from_segment(seg(1.0, 0.0, 0.0, PI));
        let ab = a.splice(&b).unwrap();
        assert_eq!(ab.len(), 2);
        let r = ab.joint_residuals()[0];
        assert!(r.max() <= 1e-9, "{r:?}");
        let m = a.splice_motion(&b);
        let expected = a.end_point() + m.rotation * b.displacement();
        assert!(close(&ab.end_point(), &expected, 1e-12));
        // Splicing never touches segment parameters.
        assert_eq!(ab.segments()[1].segment, b.segments()[0].segment);
    }

    #[test]
    fn motion_composition() {
        let rot = nalgebra::Rotation3::from_euler_angles(0.3, -1.2, 2.0).into_inner();
        let m1 = RigidMotion::try_new(rot, Vec3::new(1.0, 2.0, 3.0), 1e-12).unwrap();
        let m2 = RigidMotion::try_new(rot.transpose(), Vec3::new(-4.0, 0.5, 0.0), 1e-12).unwrap();
        let p = Vec3::new(0.7, -0.1, 2.0);
        let composed = m1.then(&m2);
        assert!(close(&composed.apply_point(&p), &m2.apply_point(&m1.apply_point(&p)), 1e-12));
        assert!(RigidMotion::try_new(-Mat3::identity(), Vec3::zeros(), 1e-12).is_err());
    }
}
