//! File formats: the JSON curve document, OBJ polylines and tube meshes,
//! and CSV samples.
//!
//! Numbers are written in the shortest form that parses back to the same
//! double, so a document survives any number of load/save cycles unchanged.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    HelixSegment, LocalPosition, Mat3, PiecewiseCurve, PlacedSegment, RigidMotion, Vec3, JOINT_TOL,
};
use crate::verify::VerificationReport;

pub const FORMAT_NAME: &str = "knotcurve";
pub const FORMAT_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = concat!("knotcurve ", env!("CARGO_PKG_VERSION"));
pub const DEFAULT_TUBE_RADIUS: f64 = 0.4;
pub const DEFAULT_SAMPLES_PER_UNIT: f64 = 50.0;
/// Enough for smooth OBJ output: a unit-curvature arc turns 1/8 rad per sample.
pub const MESH_SAMPLES_PER_UNIT: f64 = 8.0;
const TUBE_SIDES: usize = 12;
const KAPPA_STEP: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentRecord {
    pub r: f64,
    pub h: f64,
    pub t_i: f64,
    pub t_e: f64,
    /// Row-major 3×3 rotation.
    pub rotation: [f64; 9],
    pub translation: [f64; 3],
}

impl SegmentRecord {
    fn from_placed(p: &PlacedSegment) -> Self {
        let m = &p.motion.rotation;
        let t = &p.motion.translation;
        Self {
            r: p.segment.radius(),
            h: p.segment.pitch(),
            t_i: p.segment.t_start(),
            t_e: p.segment.t_end(),
            rotation: [
                m[(0, 0)],
                m[(0, 1)],
                m[(0, 2)],
                m[(1, 0)],
                m[(1, 1)],
                m[(1, 2)],
                m[(2, 0)],
                m[(2, 1)],
                m[(2, 2)],
            ],
            translation: [t.x, t.y, t.z],
        }
    }

    fn to_placed(&self) -> Result<PlacedSegment> {
        let segment = HelixSegment::new(self.r, self.h, self.t_i, self.t_e)?;
        let rotation = Mat3::from_row_slice(&self.rotation);
        let translation = Vec3::from(self.translation);
        let motion = RigidMotion::try_new(rotation, translation, JOINT_TOL)?;
        Ok(PlacedSegment { segment, motion })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentRecord {
    pub closed: bool,
    pub segments: Vec<SegmentRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub braid: Option<String>,
    pub tool_version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveDocument {
    pub format: String,
    pub version: u32,
    pub metadata: Metadata,
    pub components: Vec<ComponentRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationReport>,
}

impl CurveDocument {
    pub fn from_curves(curves: &[PiecewiseCurve], braid: Option<String>) -> Self {
        Self {
            format: FORMAT_NAME.to_string(),
            version: FORMAT_VERSION,
            metadata: Metadata {
                braid,
                tool_version: TOOL_VERSION.to_string(),
            },
            components: curves
                .iter()
                .map(|c| ComponentRecord {
                    closed: c.is_closed(),
                    segments: c.segments().iter().map(SegmentRecord::from_placed).collect(),
                })
                .collect(),
            verification: None,
        }
    }

    pub fn with_verification(mut self, report: VerificationReport) -> Self {
        self.verification = Some(report);
        self
    }

    /// Rebuilds the curves. Segments and rotations are validated; a closed
    /// component is taken as closed without checking its seam, so that a
    /// bad seam shows up in verification rather than as a load error.
    pub fn to_curves(&self) -> Result<Vec<PiecewiseCurve>> {
        self.components
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let placed = c
                    .segments
                    .iter()
                    .map(SegmentRecord::to_placed)
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| Error::Document(format!("component {i}: {e}")))?;
                let curve = PiecewiseCurve::from_placed(placed)?;
                Ok(if c.closed { curve.assume_closed() } else { curve })
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document fields are serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
        if doc.format != FORMAT_NAME {
            return Err(Error::Document(format!("unknown format {:?}", doc.format)));
        }
        if doc.version != FORMAT_VERSION {
            return Err(Error::Document(format!("unsupported version {}", doc.version)));
        }
        Ok(doc)
    }
}

/// One arclength sample of a curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub s: f64,
    pub point: Vec3,
    pub normal: Vec3,
    pub binormal: Vec3,
    pub kappa_fd: f64,
}

/// Central difference of the tangent, one-sided at the ends of an open curve.
fn kappa_fd(curve: &PiecewiseCurve, at: LocalPosition) -> f64 {
    let h = KAPPA_STEP;
    let (fwd, back, span) = match (curve.step(at, h), curve.step(at, -h)) {
        (Some(f), Some(b)) => (f, b, 2.0 * h),
        (Some(f), None) => (f, at, h),
        (None, Some(b)) => (at, b, h),
        (None, None) => return f64::NAN,
    };
    ((curve.local_frame(fwd).tangent - curve.local_frame(back).tangent) / span).norm()
}

/// Samples by arclength, about `per_unit` per unit length. Open curves
/// include both endpoints; closed curves stop short of the seam.
pub fn sample_curve(curve: &PiecewiseCurve, per_unit: f64) -> Vec<Sample> {
    let length = curve.length();
    let count = ((length * per_unit).ceil() as usize).max(1);
    let last = if curve.is_closed() { count - 1 } else { count };
    (0..=last)
        .map(|i| {
            let s = length * i as f64 / count as f64;
            let at = curve.local_position(s).expect("s lies on the curve");
            let frame = curve.local_frame(at);
            Sample {
                s,
                point: curve.local_point(at),
                normal: frame.normal,
                binormal: frame.binormal,
                kappa_fd: kappa_fd(curve, at),
            }
        })
        .collect()
}

/// CSV with header `s,x,y,z,kappa_fd`. Components follow one another, each
/// restarting at s = 0.
pub fn to_csv(curves: &[PiecewiseCurve], per_unit: f64) -> String {
    let mut out = String::from("s,x,y,z,kappa_fd\n");
    for curve in curves {
        for p in sample_curve(curve, per_unit) {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                p.s, p.point.x, p.point.y, p.point.z, p.kappa_fd
            );
        }
    }
    out
}

/// OBJ polyline, one object per component.
pub fn to_obj_polyline(curves: &[PiecewiseCurve], per_unit: f64) -> String {
    let mut out = String::new();
    let mut base = 1usize;
    for (i, curve) in curves.iter().enumerate() {
        let samples = sample_curve(curve, per_unit);
        let _ = writeln!(out, "o component_{i}");
        for p in &samples {
            let _ = writeln!(out, "v {} {} {}", p.point.x, p.point.y, p.point.z);
        }
        let n = samples.len();
        for k in 0..n.saturating_sub(1) {
            let _ = writeln!(out, "l {} {}", base + k, base + k + 1);
        }
        if curve.is_closed() && n > 2 {
            let _ = writeln!(out, "l {} {}", base + n - 1, base);
        }
        base += n;
    }
    out
}

/// Triangulated tube of the given radius swept along each component, with
/// cross sections spanned by the normal and binormal.
pub fn to_obj_tube(curves: &[PiecewiseCurve], radius: f64, per_unit: f64) -> String {
    let mut out = String::new();
    let mut base = 1usize;
    for (i, curve) in curves.iter().enumerate() {
        let samples = sample_curve(curve, per_unit);
        let _ = writeln!(out, "o tube_{i}");
        for p in &samples {
            for j in 0..TUBE_SIDES {
                let a = std::f64::consts::TAU * j as f64 / TUBE_SIDES as f64;
                let v = p.point + radius * (a.cos() * p.normal + a.sin() * p.binormal);
                let _ = writeln!(out, "v {} {} {}", v.x, v.y, v.z);
            }
        }
        let rings = samples.len();
        let spans = if curve.is_closed() { rings } else { rings.saturating_sub(1) };
        let idx = |ring: usize, side: usize| base + (ring % rings) * TUBE_SIDES + side % TUBE_SIDES;
        for r in 0..spans {
            for j in 0..TUBE_SIDES {
                let (a, b) = (idx(r, j), idx(r, j + 1));
                let (c, d) = (idx(r + 1, j + 1), idx(r + 1, j));
                let _ = writeln!(out, "f {a} {b} {c}");
                let _ = writeln!(out, "f {a} {c} {d}");
            }
        }
        base += rings * TUBE_SIDES;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::StickKind;
    use std::f64::consts::PI;

    fn circle() -> PiecewiseCurve {
        PiecewiseCurve::from_segment(HelixSegment::new(1.0, 0.0, 0.0, 2.0 * PI).unwrap())
            .close(1e-12)
            .unwrap()
    }

    #[test]
    fn document_round_trip_is_byte_identical() {
        let curves = vec![StickKind::KMinus.curve().clone(), circle()];
        let doc = CurveDocument::from_curves(&curves, Some("n=2; 1".into()));
        let text = doc.to_json();
        let back = CurveDocument::from_json(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_json(), text);
        let rebuilt = back.to_curves().unwrap();
        assert_eq!(rebuilt, curves);
    }

    #[test]
    fn rejects_bad_documents() {
        let doc = CurveDocument::from_curves(&[circle()], None);
        let mut bad = doc.clone();
        bad.components[0].segments[0].rotation[0] = 2.0;
        assert!(bad.to_curves().is_err());
        let mut bad = doc.clone();
        bad.components[0].segments[0].r = -1.0;
        assert!(bad.to_curves().is_err());
        let mut bad = doc;
        bad.version = 99;
        assert!(CurveDocument::from_json(&bad.to_json()).is_err());
        assert!(CurveDocument::from_json("{").is_err());
    }

    #[test]
    fn csv_layout() {
        let csv = to_csv(&[circle()], 10.0);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "s,x,y,z,kappa_fd");
        // 2π·10 rounds up to 63 samples, the seam not repeated.
        assert_eq!(lines.len(), 1 + 63);
        for line in &lines[1..] {
            let k: f64 = line.split(',').nth(4).unwrap().parse().unwrap();
            assert!((k - 1.0).abs() < 1e-6);
        }
        let open = PiecewiseCurve::from_segment(HelixSegment::new(1.0, 0.0, 0.0, 1.0).unwrap());
        let csv = to_csv(&[open], 10.0);
        assert_eq!(csv.lines().count(), 1 + 11);
        assert!(csv.lines().last().unwrap().starts_with("1,"));
    }

    #[test]
    fn obj_layout() {
        let obj = to_obj_polyline(&[circle()], 2.0);
        let v = obj.lines().filter(|l| l.starts_with("v ")).count();
        let l = obj.lines().filter(|l| l.starts_with("l ")).count();
        assert_eq!((v, l), (13, 13));

        let tube = to_obj_tube(&[circle()], 0.4, 2.0);
        let v = tube.lines().filter(|l| l.starts_with("v ")).count();
        let f = tube.lines().filter(|l| l.starts_with("f ")).count();
        assert_eq!(v, 13 * TUBE_SIDES);
        assert_eq!(f, 13 * TUBE_SIDES * 2);
        // Every tube vertex sits at the requested radius from the circle.
        for line in tube.lines().filter(|l| l.starts_with("v ")) {
            let c: Vec<f64> = line[2..].split(' ').map(|x| x.parse().unwrap()).collect();
            let rho = (c[0] * c[0] + c[1] * c[1]).sqrt();
            let off = ((rho - 1.0).powi(2) + c[2] * c[2]).sqrt();
            assert!((off - 0.4).abs() < 1e-12);
        }
    }
}
