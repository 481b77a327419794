//! Browser bindings for the demo page in `www/`.
//!
//! Each export takes plain strings and returns a JSON string, so the page
//! needs nothing beyond `JSON.parse`. The `*_json` functions hold the logic
//! and are what the native tests exercise.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use knotcurve::blocks::{validate_stick, StickKind};
use knotcurve::braid::{assemble_link, parse_braid};
use knotcurve::export::sample_curve;
use knotcurve::lattice::{crossing_diagram, simplicity_gate, trace_path, Crossing, LatticeWord};
use knotcurve::verify::{verify_curves, CurvatureConfig, VerifyConfig};
use knotcurve::PiecewiseCurve;

/// Display sampling; a unit-curvature arc turns a quarter radian per point.
const DISPLAY_SAMPLES_PER_UNIT: f64 = 4.0;
/// Curvature sampling for in-browser verification, lighter than the CLI's.
const BROWSER_CURVATURE_SAMPLES_PER_UNIT: f64 = 50.0;

#[derive(Serialize)]
struct Polyline {
    closed: bool,
    points: Vec<[f64; 3]>,
}

fn polyline(curve: &PiecewiseCurve) -> Polyline {
    Polyline {
        closed: curve.is_closed(),
        points: sample_curve(curve, DISPLAY_SAMPLES_PER_UNIT)
            .iter()
            .map(|s| [s.point.x, s.point.y, s.point.z])
            .collect(),
    }
}

#[derive(Serialize)]
struct Summary {
    passed: bool,
    max_joint_residual: f64,
    curvature_min: f64,
    curvature_max: f64,
    curvature_samples: usize,
    distance_bound: f64,
}

#[derive(Serialize)]
struct BraidView {
    braid: String,
    strands: usize,
    height: i64,
    segments: usize,
    words: Vec<String>,
    components: Vec<Polyline>,
    crossings: Vec<Crossing>,
    verification: Option<Summary>,
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("views are serializable")
}

/// Compiles a braid word; with `verify`, also runs a lighter verifier pass.
pub fn compile_braid_json(text: &str, verify: bool) -> Result<String, String> {
    let braid = parse_braid(text).map_err(|e| e.to_string())?;
    let link = assemble_link(&braid).map_err(|e| e.to_string())?;
    let crossings = link.plan.crossings().map_err(|e| e.to_string())?;
    let verification = verify.then(|| {
        let config = VerifyConfig {
            curvature: CurvatureConfig {
                samples_per_unit: BROWSER_CURVATURE_SAMPLES_PER_UNIT,
                ..CurvatureConfig::default()
            },
            ..VerifyConfig::default()
        };
        let refs: Vec<&PiecewiseCurve> = link.curves.iter().collect();
        let r = verify_curves(&refs, &config);
        Summary {
            passed: r.passed,
            max_joint_residual: r
                .components
                .iter()
                .map(|c| c.c2.max_position.max(c.c2.max_tangent).max(c.c2.max_acceleration))
                .fold(0.0, f64::max),
            curvature_min: r.components.iter().map(|c| c.curvature.fd_min).fold(f64::INFINITY, f64::min),
            curvature_max: r.components.iter().map(|c| c.curvature.fd_max).fold(0.0, f64::max),
            curvature_samples: r.components.iter().map(|c| c.curvature.samples).sum(),
            distance_bound: r.distance.bound,
        }
    });
    Ok(to_json(&BraidView {
        braid: braid.to_string(),
        strands: braid.strands(),
        height: link.plan.height,
        segments: link.curves.iter().map(PiecewiseCurve::len).sum(),
        words: link.plan.components.iter().map(|c| c.word.to_string()).collect(),
        components: link.curves.iter().map(polyline).collect(),
        crossings,
        verification,
    }))
}

#[derive(Serialize)]
struct StickView {
    name: String,
    pieces: String,
    displacement: [f64; 3],
    passed: bool,
    distance_bound: f64,
    /// `None` when the endpoints coincide.
    tube_max: Option<f64>,
    curve: Polyline,
}

pub fn stick_json(name: &str) -> Result<String, String> {
    let kind: StickKind = name.trim().parse().map_err(|e: knotcurve::Error| e.to_string())?;
    let report = validate_stick(kind);
    Ok(to_json(&StickView {
        name: kind.to_string(),
        pieces: kind.word_str().to_string(),
        displacement: report.displacement,
        passed: report.passed(),
        distance_bound: report.distance.bound,
        tube_max: report.tube.as_ref().map(|t| t.max_distance),
        curve: polyline(kind.curve()),
    }))
}

#[derive(Serialize)]
struct LatticeView {
    word: String,
    closed: bool,
    passed: bool,
    report: String,
    pair_violations: Vec<usize>,
    vertex_repeats: Vec<usize>,
    vertices: Vec<[i64; 3]>,
    crossings: Vec<Crossing>,
}

pub fn lattice_gate_json(word: &str, closed: bool) -> Result<String, String> {
    let word = LatticeWord::parse(word, closed).map_err(|e| e.to_string())?;
    let report = simplicity_gate(&word);
    let path = trace_path(word.letters(), [0, 0, 0]);
    // Crossings of a self-intersecting path are not meaningful.
    let crossings = if report.passed {
        crossing_diagram(std::slice::from_ref(&path)).unwrap_or_default()
    } else {
        Vec::new()
    };
    Ok(to_json(&LatticeView {
        word: word.to_string(),
        closed,
        passed: report.passed,
        report: report.to_string(),
        pair_violations: report.pair_violations.iter().map(|v| v.index).collect(),
        vertex_repeats: report.vertex_repeats.clone(),
        vertices: path.vertices().to_vec(),
        crossings,
    }))
}

#[wasm_bindgen]
pub fn compile_braid(text: &str, verify: bool) -> Result<String, JsError> {
    compile_braid_json(text, verify).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn stick(name: &str) -> Result<String, JsError> {
    stick_json(name).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn lattice_gate(word: &str, closed: bool) -> Result<String, JsError> {
    lattice_gate_json(word, closed).map_err(|e| JsError::new(&e))
}
