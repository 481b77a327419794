//! Lattice words, their traced paths, and the simplicity gate.
//!
//! All arithmetic here is on integers; geometry only enters once a word has
//! passed [`simplicity_gate`].

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::blocks::{is_allowable_pair, StickKind};
use crate::error::{Error, Result};

/// Lattice vertex in lattice units.
pub type LatticePoint = [i64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LatticeLetter {
    IPlus,
    IMinus,
    JPlus,
    JMinus,
    KPlus,
    KMinus,
}

impl LatticeLetter {
    pub const ALL: [LatticeLetter; 6] = [
        Self::IPlus,
        Self::IMinus,
        Self::JPlus,
        Self::JMinus,
        Self::KPlus,
        Self::KMinus,
    ];

    pub fn ascii(self) -> &'static str {
        match self {
            Self::IPlus => "I+",
            Self::IMinus => "I-",
            Self::JPlus => "J+",
            Self::JMinus => "J-",
            Self::KPlus => "K+",
            Self::KMinus => "K-",
        }
    }

    pub fn step(self) -> LatticePoint {
        stick_of_letter(self).step()
    }
}

pub fn letter_of_stick(kind: StickKind) -> LatticeLetter {
    match kind {
        StickKind::IPlus => LatticeLetter::IPlus,
        StickKind::IMinus => LatticeLetter::IMinus,
        StickKind::JPlus => LatticeLetter::JPlus,
        StickKind::JMinus => LatticeLetter::JMinus,
        StickKind::KPlus => LatticeLetter::KPlus,
        StickKind::KMinus => LatticeLetter::KMinus,
    }
}

pub fn stick_of_letter(letter: LatticeLetter) -> StickKind {
    match letter {
        LatticeLetter::IPlus => StickKind::IPlus,
        LatticeLetter::IMinus => StickKind::IMinus,
        LatticeLetter::JPlus => StickKind::JPlus,
        LatticeLetter::JMinus => StickKind::JMinus,
        LatticeLetter::KPlus => StickKind::KPlus,
        LatticeLetter::KMinus => StickKind::KMinus,
    }
}

impl fmt::Display for LatticeLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.ascii())
    }
}

impl FromStr for LatticeLetter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|l| l.ascii() == s)
            .ok_or_else(|| Error::UnknownLetter(s.to_string()))
    }
}

impl Serialize for LatticeLetter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.ascii())
    }
}

fn add(a: LatticePoint, b: LatticePoint) -> LatticePoint {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeWord {
    letters: Vec<LatticeLetter>,
    closed: bool,
}

impl LatticeWord {
    pub fn open(letters: Vec<LatticeLetter>) -> Self {
        Self {
            letters,
            closed: false,
        }
    }

    /// A closed word; its steps must sum to zero.
    pub fn closed(letters: Vec<LatticeLetter>) -> Result<Self> {
        let word = Self {
            letters,
            closed: true,
        };
        let d = word.displacement();
        if d != [0, 0, 0] || word.letters.is_empty() {
            return Err(Error::WordDoesNotClose(d));
        }
        Ok(word)
    }

    /// Parses whitespace-separated letters such as `"I+ J+ I- J-"`.
    pub fn parse(text: &str, closed: bool) -> Result<Self> {
        let letters = text
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<_>>>()?;
        if closed {
            Self::closed(letters)
        } else {
            Ok(Self::open(letters))
        }
    }

    pub fn from_sticks(sticks: &[StickKind], closed: bool) -> Result<Self> {
        let letters = sticks.iter().map(|&k| letter_of_stick(k)).collect();
        if closed {
            Self::closed(letters)
        } else {
            Ok(Self::open(letters))
        }
    }

    pub fn letters(&self) -> &[LatticeLetter] {
        &self.letters
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn displacement(&self) -> LatticePoint {
        self.letters.iter().fold([0, 0, 0], |acc, l| add(acc, l.step()))
    }

    pub fn sticks(&self) -> Vec<StickKind> {
        self.letters.iter().map(|&l| stick_of_letter(l)).collect()
    }

    /// Adjacent letter pairs as `(index, first, second)`, including the
    /// wraparound pair of a closed word.
    pub fn adjacent_pairs(&self) -> impl Iterator<Item = (usize, LatticeLetter, LatticeLetter)> + '_ {
        let n = self.letters.len();
        let count = match (self.closed, n) {
            (_, 0) => 0,
            (true, 1) => 0,
            (true, _) => n,
            (false, _) => n - 1,
        };
        (0..count).map(move |i| (i, self.letters[i], self.letters[(i + 1) % n]))
    }
}

impl fmt::Display for LatticeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(l.ascii())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticePath {
    vertices: Vec<LatticePoint>,
}

impl LatticePath {
    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn start(&self) -> LatticePoint {
        self.vertices[0]
    }

    pub fn end(&self) -> LatticePoint {
        *self.vertices.last().expect("a path has at least its start")
    }

    pub fn is_closed(&self) -> bool {
        self.vertices.len() > 1 && self.start() == self.end()
    }

    pub fn edges(&self) -> impl Iterator<Item = (LatticePoint, LatticePoint)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    /// Distinct vertices (the closing repeat of a closed path counted once).
    pub fn vertex_set(&self) -> HashSet<LatticePoint> {
        self.vertices.iter().copied().collect()
    }
}

pub fn trace_path(letters: &[LatticeLetter], start: LatticePoint) -> LatticePath {
    let mut vertices = Vec::with_capacity(letters.len() + 1);
    vertices.push(start);
    let mut at = start;
    for l in letters {
        at = add(at, l.step());
        vertices.push(at);
    }
    LatticePath { vertices }
}

/// Indices of vertices that revisit an earlier vertex. A closed word may end
/// where it started.
fn vertex_repeats(word: &LatticeWord, start: LatticePoint) -> Vec<usize> {
    let path = trace_path(&word.letters, start);
    let mut seen = HashSet::new();
    let last = path.vertices.len() - 1;
    path.vertices
        .iter()
        .enumerate()
        .filter(|&(i, v)| {
            let closing = word.closed && i == last && *v == start;
            !closing && !seen.insert(*v)
        })
        .map(|(i, _)| i)
        .collect()
}

pub fn is_self_avoiding(word: &LatticeWord, start: LatticePoint) -> bool {
    vertex_repeats(word, start).is_empty()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairViolation {
    /// Index of the first letter of the pair.
    pub index: usize,
    pub first: LatticeLetter,
    pub second: LatticeLetter,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GateReport {
    pub pair_violations: Vec<PairViolation>,
    /// Vertex indices (into the traced path) that repeat an earlier vertex.
    pub vertex_repeats: Vec<usize>,
    pub passed: bool,
}

impl fmt::Display for GateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed {
            return f.write_str("pass");
        }
        let mut reasons: Vec<String> = self
            .pair_violations
            .iter()
            .map(|v| format!("unallowable pair {}{} at {}", v.first, v.second, v.index))
            .collect();
        if !self.vertex_repeats.is_empty() {
            reasons.push(format!("repeated vertices at {:?}", self.vertex_repeats));
        }
        write!(f, "fail: {}", reasons.join("; "))
    }
}

/// Passes iff the word's path never revisits a vertex and no adjacent letter
/// pair (wraparound included for closed words) is unallowable. A passing
/// word instantiates to a simple curve.
pub fn simplicity_gate(word: &LatticeWord) -> GateReport {
    let pair_violations: Vec<PairViolation> = word
        .adjacent_pairs()
        .filter(|&(_, x, y)| !is_allowable_pair(stick_of_letter(x), stick_of_letter(y)))
        .map(|(index, first, second)| PairViolation {
            index,
            first,
            second,
        })
        .collect();
    let vertex_repeats = vertex_repeats(word, [0, 0, 0]);
    let passed = pair_violations.is_empty() && vertex_repeats.is_empty();
    GateReport {
        pair_violations,
        vertex_repeats,
        passed,
    }
}

/// True iff no vertex is shared between two different paths.
pub fn multi_path_disjoint(paths: &[LatticePath]) -> bool {
    let mut owner = std::collections::HashMap::new();
    for (i, path) in paths.iter().enumerate() {
        for v in path.vertex_set() {
            if let Some(&j) = owner.get(&v) {
                if j != i {
                    return false;
                }
            }
            owner.insert(v, i);
        }
    }
    true
}

/// Projection offsets per unit of y. Irrational ratios keep distinct lattice
/// edges from projecting onto one another.
const TILT_X: f64 = 0.1 * std::f64::consts::SQRT_2;
const TILT_Z: f64 = 0.1 * 1.732_050_807_568_877_2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    /// Projected (x, z) location.
    pub position: [f64; 2],
    /// +1 or −1 by the right-hand rule, viewed from +y.
    pub sign: i8,
    /// (path, edge) of the strand in front.
    pub over: (usize, usize),
    pub under: (usize, usize),
}

fn project(p: LatticePoint) -> [f64; 2] {
    let y = p[1] as f64;
    [p[0] as f64 + TILT_X * y, p[2] as f64 + TILT_Z * y]
}

fn view_direction() -> [f64; 3] {
    [-TILT_X, 1.0, -TILT_Z]
}

fn cross2(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn sub2(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

/// Crossing diagram of the paths projected onto the (x, z) plane, viewed
/// from +y so that larger y is in front.
///
/// Lattice paths often have edges stacked in y that would project onto the
/// same segment, so the view direction is tilted slightly off the y axis.
/// The diagram is a genuine diagram of the same link.
pub fn crossing_diagram(paths: &[LatticePath]) -> Result<Vec<Crossing>> {
    struct Edge {
        path: usize,
        index: usize,
        from: LatticePoint,
        to: LatticePoint,
        p: [f64; 2],
        q: [f64; 2],
    }
    let edges: Vec<Edge> = paths
        .iter()
        .enumerate()
        .flat_map(|(pi, path)| {
            path.edges().enumerate().map(move |(ei, (a, b))| Edge {
                path: pi,
                index: ei,
                from: a,
                to: b,
                p: project(a),
                q: project(b),
            })
        })
        .collect();
    let adjacent = |a: &Edge, b: &Edge| {
        if a.path != b.path {
            return false;
        }
        let n = paths[a.path].vertices.len() - 1;
        let (i, j) = (a.index.min(b.index), a.index.max(b.index));
        j == i + 1 || (paths[a.path].is_closed() && i == 0 && j == n - 1)
    };
    let view = view_direction();
    let depth = |p: [f64; 3]| p[0] * view[0] + p[1] * view[1] + p[2] * view[2];
    let lerp = |a: LatticePoint, b: LatticePoint, t: f64| {
        [0, 1, 2].map(|k| a[k] as f64 + t * (b[k] - a[k]) as f64)
    };
    const EPS: f64 = 1e-9;

    let mut out = Vec::new();
    for (i, e1) in edges.iter().enumerate() {
        for e2 in &edges[i + 1..] {
            if adjacent(e1, e2) {
                continue;
            }
            let r = sub2(e1.q, e1.p);
            let s = sub2(e2.q, e2.p);
            let denom = cross2(r, s);
            let qp = sub2(e2.p, e1.p);
            if denom.abs() < EPS {
                if cross2(qp, r).abs() < EPS {
                    // Collinear: overlap beyond a point is degenerate.
                    let rr = r[0] * r[0] + r[1] * r[1];
                    let t0 = (qp[0] * r[0] + qp[1] * r[1]) / rr;
                    let t1 = t0 + (s[0] * r[0] + s[1] * r[1]) / rr;
                    let (lo, hi) = (t0.min(t1), t0.max(t1));
                    if hi >= -EPS && lo <= 1.0 + EPS {
                        return Err(Error::DegenerateProjection {
                            first: (e1.path, e1.index),
                            second: (e2.path, e2.index),
                        });
                    }
                }
                continue;
            }
            let t = cross2(qp, s) / denom;
            let u = cross2(qp, r) / denom;
            let span = -EPS..=1.0 + EPS;
            if !span.contains(&t) || !span.contains(&u) {
                continue;
            }
            let interior = t > EPS && t < 1.0 - EPS && u > EPS && u < 1.0 - EPS;
            if !interior {
                return Err(Error::DegenerateProjection {
                    first: (e1.path, e1.index),
                    second: (e2.path, e2.index),
                });
            }
            let p1 = lerp(e1.from, e1.to, t);
            let p2 = lerp(e2.from, e2.to, u);
            let (over, under) = if depth(p1) > depth(p2) { (e1, e2) } else { (e2, e1) };
            let dir = |e: &Edge| [0, 1, 2].map(|k| (e.to[k] - e.from[k]) as f64);
            let (o, w) = (dir(over), dir(under));
            let c = [
                o[1] * w[2] - o[2] * w[1],
                o[2] * w[0] - o[0] * w[2],
                o[0] * w[1] - o[1] * w[0],
            ];
            let sign = if depth(c) > 0.0 { 1 } else { -1 };
            out.push(Crossing {
                position: [e1.p[0] + t * r[0], e1.p[1] + t * r[1]],
                sign,
                over: (over.path, over.index),
                under: (under.path, under.index),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use LatticeLetter::*;

    fn word(text: &str, closed: bool) -> LatticeWord {
        LatticeWord::parse(text, closed).unwrap()
    }

    #[test]
    fn letter_stick_bijection() {
        assert_eq!(letter_of_stick(StickKind::IPlus), IPlus);
        assert_eq!(stick_of_letter(KMinus), StickKind::KMinus);
        for l in LatticeLetter::ALL {
            assert_eq!(letter_of_stick(stick_of_letter(l)), l);
        }
    }

    #[test]
    fn traces() {
        assert_eq!(trace_path(&[KPlus], [0, 0, 0]).vertices(), &[[0, 0, 0], [0, 0, 1]]);
        let sq = trace_path(&[IPlus, JPlus, IMinus, JMinus], [0, 0, 0]);
        assert_eq!(sq.end(), [0, 0, 0]);
        assert!(sq.is_closed());
        assert_eq!(trace_path(&[KMinus], [0, 0, 3]).vertices(), &[[0, 0, 3], [0, 0, 2]]);
    }

    #[test]
    fn self_avoidance() {
        assert!(is_self_avoiding(&word("I+ J+ I- J-", true), [0, 0, 0]));
        assert!(!is_self_avoiding(&word("I+ I-", false), [0, 0, 0]));
        let w = word("K+ K+ I+ K- K- I-", true);
        assert_eq!(trace_path(w.letters(), [0, 0, 0]).vertices().len(), 7);
        assert!(is_self_avoiding(&w, [0, 0, 0]));
        // Open words may not return to the start.
        assert!(!is_self_avoiding(&word("I+ J+ I- J-", false), [0, 0, 0]));
    }

    #[test]
    fn closed_words_must_close() {
        assert!(LatticeWord::parse("I+ J+", true).is_err());
        assert!(LatticeWord::parse("I+ Q-", false).is_err());
        assert_eq!(word("I+ J+ I- J-", true).to_string(), "I+ J+ I- J-");
    }

    #[test]
    fn gate() {
        assert!(simplicity_gate(&word("I+ J+ I- J-", true)).passed);

        let r = simplicity_gate(&word("K- J+ K+ J-", true));
        assert!(!r.passed);
        assert_eq!(r.pair_violations[0].index, 0);
        assert_eq!((r.pair_violations[0].first, r.pair_violations[0].second), (KMinus, JPlus));

        let r = simplicity_gate(&word("I+ I-", false));
        assert!(!r.passed);
        assert_eq!(r.pair_violations.len(), 1);
        assert_eq!(r.vertex_repeats, vec![2]);
    }

    #[test]
    fn gate_checks_wraparound() {
        // Open, the pairs are fine; closing adds K- J+ at the seam.
        let letters = vec![JPlus, KPlus, JMinus, KMinus];
        let open = LatticeWord::open(letters.clone());
        assert!(simplicity_gate(&open).pair_violations.is_empty());
        let closed = LatticeWord::closed(letters).unwrap();
        let r = simplicity_gate(&closed);
        assert_eq!(r.pair_violations.len(), 1);
        assert_eq!(r.pair_violations[0].index, 3);
    }

    #[test]
    fn closure_matches_zero_sum() {
        for text in ["I+ J+ I- J-", "K+ K+ I+ K- K- I-", "I+ J+", "K+ K+ K-"] {
            let w = word(text, false);
            let path = trace_path(w.letters(), [3, -2, 5]);
            assert_eq!(path.end() == path.start(), w.displacement() == [0, 0, 0]);
        }
    }

    #[test]
    fn disjointness() {
        let a = trace_path(&[IPlus, JPlus, IMinus, JMinus], [0, 0, 0]);
        let b = trace_path(&[IPlus, JPlus, IMinus, JMinus], [0, 0, 2]);
        assert!(multi_path_disjoint(&[a.clone(), b]));
        let c = trace_path(&[KMinus, KMinus], [0, 0, 1]);
        assert!(!multi_path_disjoint(&[a, c]));
    }

    #[test]
    fn straight_paths_do_not_cross() {
        let a = trace_path(&[KPlus, KPlus], [0, 0, 0]);
        let b = trace_path(&[KPlus, KPlus], [1, 0, 0]);
        assert!(crossing_diagram(&[a, b]).unwrap().is_empty());
    }

    #[test]
    fn collinear_overlap_is_degenerate() {
        let a = trace_path(&[KPlus, KPlus], [0, 0, 0]);
        let b = trace_path(&[KPlus], [0, 3, 0]);
        // Stacked in y: the tilt separates them.
        assert!(crossing_diagram(&[a.clone(), b]).unwrap().is_empty());
        let c = trace_path(&[KPlus], [0, 0, 1]);
        assert!(matches!(
            crossing_diagram(&[a, c]),
            Err(Error::DegenerateProjection { .. })
        ));
    }

    #[test]
    fn crossing_sign_follows_right_hand_rule() {
        // Strand moving +x in front (y = 1) of a strand moving +z.
        let front = trace_path(&[JPlus, IPlus, IPlus, JMinus], [-1, 0, 1]);
        let back = trace_path(&[KPlus, KPlus], [0, -1, 0]);
        let c = crossing_diagram(&[front.clone(), back.clone()]).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].over.0, 0);
        // (+x) × (+z) = −y, away from the viewer.
        assert_eq!(c[0].sign, -1);
        // Reversing one strand flips the sign.
        let back_rev = trace_path(&[KMinus, KMinus], [0, -1, 2]);
        assert_eq!(crossing_diagram(&[front, back_rev]).unwrap()[0].sign, 1);
    }
}
