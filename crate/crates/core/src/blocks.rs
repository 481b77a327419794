//! The eight elementary helix pieces and the six sticks built from them.
//!
//! Every stick starts and ends with the frame [`frame_f`], so sticks can be
//! chained by pure translation, and each one moves 4π along a coordinate
//! axis. That makes any walk on the 4π-lattice realizable as a C² curve of
//! curvature one.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{FrenetFrame, HelixSegment, PiecewiseCurve, Vec3, JOINT_TOL};
use crate::verify::{self, CurvatureConfig, CurvatureReport, DistanceCertificate, DistanceConfig, TubeReport};

/// Side of the lattice cell, in world units.
pub const LATTICE_UNIT: f64 = 4.0 * PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElementaryPiece {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    L,
}

impl ElementaryPiece {
    pub const ALL: [ElementaryPiece; 8] = [
        Self::A,
        Self::B,
        Self::C,
        Self::D,
        Self::E,
        Self::F,
        Self::G,
        Self::L,
    ];

    /// The `[r, h, t_i, t_e]` arc. Pieces are either on the unit circle or
    /// on a helix with `r = |h| = 1/2`, so every one has curvature 1.
    pub fn segment(self) -> HelixSegment {
        let (r, h, t_i, t_e) = match self {
            Self::A => (0.5, 0.5, 0.0, FRAC_PI_2),
            Self::B => (1.0, 0.0, 0.0, PI),
            Self::C => (0.5, 0.5, 0.0, 2.0 * PI),
            Self::D => (0.5, -0.5, 3.0 * FRAC_PI_2, 2.0 * PI),
            Self::E => (0.5, -0.5, 0.0, 2.0 * PI),
            Self::F => (0.5, -0.5, 0.0, 3.0 * FRAC_PI_2),
            Self::G => (0.5, -0.5, 0.0, FRAC_PI_2),
            Self::L => (0.5, 0.5, 0.0, 8.0 * PI),
        };
        HelixSegment::new(r, h, t_i, t_e).expect("elementary pieces are valid")
    }

    pub fn letter(self) -> char {
        match self {
            Self::A => 'a',
            Self::B => 'b',
            Self::C => 'c',
            Self::D => 'd',
            Self::E => 'e',
            Self::F => 'f',
            Self::G => 'g',
            Self::L => 'l',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.letter() == c)
    }
}

impl FromStr for ElementaryPiece {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => Self::from_letter(c),
            _ => None,
        }
        .ok_or_else(|| Error::UnknownPiece(s.to_string()))
    }
}

/// Parses a piece word such as `"abcd"`.
pub fn parse_pieces(word: &str) -> Result<Vec<ElementaryPiece>> {
    word.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| ElementaryPiece::from_letter(c).ok_or_else(|| Error::UnknownPiece(c.to_string())))
        .collect()
}

/// Splices pieces left to right, the first one placed with the identity.
pub fn splice_pieces(pieces: &[ElementaryPiece]) -> Result<PiecewiseCurve> {
    let (first, rest) = pieces.split_first().ok_or(Error::EmptyCurve)?;
    let mut curve = PiecewiseCurve::from_segment(first.segment());
    for piece in rest {
        curve.append(&PiecewiseCurve::from_segment(piece.segment()))?;
    }
    Ok(curve)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum StickKind {
    #[serde(rename = "i+")]
    IPlus,
    #[serde(rename = "i-")]
    IMinus,
    #[serde(rename = "j+")]
    JPlus,
    #[serde(rename = "j-")]
    JMinus,
    #[serde(rename = "k+")]
    KPlus,
    #[serde(rename = "k-")]
    KMinus,
}

/// Piece words as originally printed. Two of them do not close up: `j-`
/// has its last two pieces transposed and `k-` has the wrong number of turns
/// in its second descent. [`StickKind::word`] holds the working versions.
pub const PRINTED_WORDS: [(StickKind, &str); 6] = [
    (StickKind::IPlus, "abcdabcdabcdabcd"),
    (StickKind::IMinus, "aebdaebdaebdaebd"),
    (StickKind::JPlus, "adbeadbeadbeadbe"),
    (StickKind::JMinus, "adbcadbcadbcadbc"),
    (StickKind::KPlus, "l"),
    (StickKind::KMinus, "abfdgbabfdfgb"),
];

const WORDS: [(StickKind, &str); 6] = [
    (StickKind::IPlus, "abcdabcdabcdabcd"),
    (StickKind::IMinus, "aebdaebdaebdaebd"),
    (StickKind::JPlus, "adbeadbeadbeadbe"),
    (StickKind::JMinus, "adcbadcbadcbadcb"),
    (StickKind::KPlus, "l"),
    (StickKind::KMinus, "abfdgbabfdfgdeb"),
];

impl StickKind {
    pub const ALL: [StickKind; 6] = [
        Self::IPlus,
        Self::IMinus,
        Self::JPlus,
        Self::JMinus,
        Self::KPlus,
        Self::KMinus,
    ];

    pub fn ascii(self) -> &'static str {
        match self {
            Self::IPlus => "i+",
            Self::IMinus => "i-",
            Self::JPlus => "j+",
            Self::JMinus => "j-",
            Self::KPlus => "k+",
            Self::KMinus => "k-",
        }
    }

    fn index(self) -> usize {
        self as usize
    }

    /// Elementary-piece word of this stick.
    pub fn word(self) -> Vec<ElementaryPiece> {
        parse_pieces(WORDS[self.index()].1).expect("static table")
    }

    pub fn word_str(self) -> &'static str {
        WORDS[self.index()].1
    }

    pub fn printed_word_str(self) -> &'static str {
        PRINTED_WORDS[self.index()].1
    }

    /// Axis step in lattice units.
    pub fn step(self) -> [i64; 3] {
        match self {
            Self::IPlus => [1, 0, 0],
            Self::IMinus => [-1, 0, 0],
            Self::JPlus => [0, 1, 0],
            Self::JMinus => [0, -1, 0],
            Self::KPlus => [0, 0, 1],
            Self::KMinus => [0, 0, -1],
        }
    }

    /// Expected end-minus-start vector in world units.
    pub fn displacement(self) -> Vec3 {
        let [x, y, z] = self.step();
        Vec3::new(x as f64, y as f64, z as f64) * LATTICE_UNIT
    }

    /// The stick's curve, starting at the initial point of piece `a` (or `l`)
    /// with identity placement.
    pub fn curve(self) -> &'static PiecewiseCurve {
        static CACHE: OnceLock<Vec<PiecewiseCurve>> = OnceLock::new();
        &CACHE.get_or_init(|| {
            Self::ALL
                .iter()
                .map(|k| splice_pieces(&k.word()).expect("stick pieces share curvature 1"))
                .collect()
        })[self.index()]
    }
}

/// Builds a stick's curve from its piece word.
pub fn build_stick(kind: StickKind) -> PiecewiseCurve {
    kind.curve().clone()
}

impl fmt::Display for StickKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.ascii())
    }
}

impl FromStr for StickKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.ascii() == s)
            .ok_or_else(|| Error::UnknownStick(s.to_string()))
    }
}

/// Parses a stick word such as `"k+j-k+"` or `"k+ j- k+"`.
pub fn parse_stick_word(text: &str) -> Result<Vec<StickKind>> {
    let compact: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    compact
        .chunks(2)
        .map(|pair| pair.iter().collect::<String>().parse())
        .collect()
}

/// The Frenet frame at the initial point of piece `a`; every stick starts and
/// ends with it.
pub fn frame_f() -> FrenetFrame {
    ElementaryPiece::A.segment().frame_at(0.0)
}

/// Ordered pairs whose two-stick curve intersects itself.
pub const UNALLOWABLE_PAIRS: [(StickKind, StickKind); 8] = [
    (StickKind::IPlus, StickKind::IMinus),
    (StickKind::IMinus, StickKind::IPlus),
    (StickKind::JPlus, StickKind::JMinus),
    (StickKind::JMinus, StickKind::JPlus),
    (StickKind::KPlus, StickKind::KMinus),
    (StickKind::KMinus, StickKind::KPlus),
    (StickKind::KMinus, StickKind::JPlus),
    (StickKind::IMinus, StickKind::KMinus),
];

pub fn is_allowable_pair(first: StickKind, second: StickKind) -> bool {
    !UNALLOWABLE_PAIRS.contains(&(first, second))
}

/// Chains sticks by splicing and places the result so that its initial
/// point sits at `start`.
pub fn stick_word_curve(word: &[StickKind], start: Vec3) -> Result<PiecewiseCurve> {
    let (first, rest) = word.split_first().ok_or(Error::EmptyCurve)?;
    let mut curve = first.curve().clone();
    for kind in rest {
        curve.append(kind.curve())?;
    }
    let origin = curve.start_point();
    Ok(curve.translated(start - origin))
}

#[derive(Debug, Clone, Serialize)]
pub struct StickReport {
    pub kind: StickKind,
    pub initial_frame_error: f64,
    pub terminal_frame_error: f64,
    pub displacement: [f64; 3],
    pub displacement_error: f64,
    pub curvature: CurvatureReport,
    pub distance: DistanceCertificate,
    /// `None` when the endpoints coincide and there is no chord line.
    pub tube: Option<TubeReport>,
    pub failures: Vec<String>,
}

impl StickReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks a stick's frames, displacement, curvature, simplicity and tube
/// radius.
pub fn validate_stick(kind: StickKind) -> StickReport {
    validate_curve_as_stick(kind, kind.curve())
}

/// Runs the stick checks against an arbitrary curve claiming to be `kind`.
pub fn validate_curve_as_stick(kind: StickKind, curve: &PiecewiseCurve) -> StickReport {
    let f = frame_f();
    let initial_frame_error = curve.start_frame().max_abs_diff(&f);
    let terminal_frame_error = curve.end_frame().max_abs_diff(&f);
    let displacement = curve.displacement();
    let displacement_error = (displacement - kind.displacement()).amax();
    let curvature = verify::check_curvature(curve, &CurvatureConfig::default());
    let distance = verify::certified_min_distance(&[curve], &DistanceConfig::default());
    let tube = verify::tube_radius_check(curve, verify::TUBE_SAMPLES).ok();

    let mut failures = Vec::new();
    if initial_frame_error > JOINT_TOL {
        failures.push(format!("initial frame differs from F by {initial_frame_error:e}"));
    }
    if terminal_frame_error > JOINT_TOL {
        failures.push(format!("terminal frame differs from F by {terminal_frame_error:e}"));
    }
    if displacement_error > JOINT_TOL {
        failures.push(format!(
            "displacement {:?} differs from table by {displacement_error:e}",
            displacement.as_slice()
        ));
    }
    if !curvature.passed {
        failures.push(format!(
            "curvature off target: fd [{}, {}], frenet residual {:e}",
            curvature.fd_min, curvature.fd_max, curvature.frenet_residual
        ));
    }
    if !distance.is_certified() {
        failures.push(format!("simplicity not certified: {:?}", distance.status));
    }
    match &tube {
        Some(t) if !t.passed => failures.push(format!("tube radius {} exceeds π", t.max_distance)),
        Some(_) => {}
        None => failures.push("endpoints coincide, no chord line for the tube check".into()),
    }
    StickReport {
        kind,
        initial_frame_error,
        terminal_frame_error,
        displacement: [displacement.x, displacement.y, displacement.z],
        displacement_error,
        curvature,
        distance,
        tube,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    #[test]
    fn piece_table() {
        let a = ElementaryPiece::A.segment();
        assert_eq!((a.radius(), a.pitch(), a.t_start(), a.t_end()), (0.5, 0.5, 0.0, FRAC_PI_2));
        let b = ElementaryPiece::B.segment();
        assert_eq!((b.radius(), b.pitch(), b.t_start(), b.t_end()), (1.0, 0.0, 0.0, PI));
        let l = ElementaryPiece::L.segment();
        assert_eq!((l.radius(), l.pitch(), l.t_start(), l.t_end()), (0.5, 0.5, 0.0, 8.0 * PI));
        for p in ElementaryPiece::ALL {
            assert_eq!(p.segment().curvature(), 1.0, "{p:?}");
        }
    }

    #[test]
    fn frame_f_values() {
        let f = frame_f();
        assert!((f.tangent - Vec3::new(0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2)).amax() < 1e-15);
        assert!((f.normal - Vec3::new(-1.0, 0.0, 0.0)).amax() < 1e-15);
        assert!((f.tangent.cross(&f.normal) - f.binormal).amax() <= 1e-12);
    }

    #[test]
    fn k_plus_is_one_helix() {
        let k = build_stick(StickKind::KPlus);
        assert_eq!(k.len(), 1);
        assert!((k.length() - 4.0 * PI * SQRT_2).abs() < 1e-12);
        assert!((k.displacement() - Vec3::new(0.0, 0.0, LATTICE_UNIT)).amax() < 1e-12);
    }

    #[test]
    fn segment_counts() {
        assert_eq!(build_stick(StickKind::IPlus).len(), 16);
        assert_eq!(build_stick(StickKind::JMinus).len(), 16);
        assert_eq!(build_stick(StickKind::KMinus).len(), StickKind::KMinus.word().len());
    }

    #[test]
    fn names_round_trip() {
        for k in StickKind::ALL {
            assert_eq!(k.ascii().parse::<StickKind>().unwrap(), k);
        }
        assert!("i".parse::<StickKind>().is_err());
        assert!("q".parse::<ElementaryPiece>().is_err());
        assert_eq!("l".parse::<ElementaryPiece>().unwrap(), ElementaryPiece::L);
    }

    #[test]
    fn allowable_pairs() {
        use StickKind::*;
        assert!(!is_allowable_pair(KMinus, JPlus));
        assert!(is_allowable_pair(KMinus, KMinus));
        assert!(is_allowable_pair(JPlus, KMinus));
        let allowed = StickKind::ALL
            .iter()
            .flat_map(|&x| StickKind::ALL.iter().map(move |&y| (x, y)))
            .filter(|&(x, y)| is_allowable_pair(x, y))
            .count();
        assert_eq!(allowed, 28);
    }

    #[test]
    fn every_stick_segment_has_unit_curvature() {
        for k in StickKind::ALL {
            assert!(k.curve().segments().iter().all(|s| s.segment.curvature() == 1.0));
        }
    }
}
