use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid helix segment [r={radius}, h={pitch}, t_i={t_start}, t_e={t_end}]: {reason}")]
    InvalidSegment {
        radius: f64,
        pitch: f64,
        t_start: f64,
        t_end: f64,
        reason: &'static str,
    },
    #[error("angle {t} outside segment domain [{t_start}, {t_end}]")]
    AngleOutOfDomain { t: f64, t_start: f64, t_end: f64 },
    #[error("arclength {s} outside [0, {length}] on an open curve")]
    ArclengthOutOfRange { s: f64, length: f64 },
    #[error("a piecewise curve needs at least one segment")]
    EmptyCurve,
    #[error("cannot splice a closed curve")]
    ClosedCurve,
    #[error("curvature mismatch: {first} vs {second}")]
    CurvatureMismatch { first: f64, second: f64 },
    #[error("curve does not close: seam residual {residual:e} exceeds {tolerance:e}")]
    SeamMismatch { residual: f64, tolerance: f64 },
    #[error("rotation is not proper orthogonal (residual {0:e})")]
    NotARotation(f64),
    #[error("unknown stick name {0:?} (expected one of i+ i- j+ j- k+ k-)")]
    UnknownStick(String),
    #[error("unknown elementary piece {0:?} (expected one of a b c d e f g l)")]
    UnknownPiece(String),
    #[error("unknown lattice letter {0:?} (expected one of I+ I- J+ J- K+ K-)")]
    UnknownLetter(String),
    #[error("braid parse error: {0}")]
    BraidParse(String),
    #[error("generator {generator} out of range for {strands} strands")]
    GeneratorOutOfRange { generator: usize, strands: usize },
    #[error("degenerate projection: edges {first:?} and {second:?} overlap collinearly; perturb the projection")]
    DegenerateProjection {
        first: (usize, usize),
        second: (usize, usize),
    },
    #[error("closed lattice word does not return to its start (net step {0:?})")]
    WordDoesNotClose([i64; 3]),
    #[error("tube check needs distinct endpoints")]
    CoincidentEndpoints,
    #[error("lattice gate failed for component {component}: {detail}")]
    GateFailure { component: usize, detail: String },
    #[error("link components are not lattice-disjoint")]
    ComponentsNotDisjoint,
    #[error("curve document: {0}")]
    Document(String),
}
