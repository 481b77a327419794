//! Braid words, their crossing components and closing arcs, and assembly
//! into closed stick words per link component.
//!
//! Strand j enters the braid at lattice vertex (j, 0, 0). Each braid letter
//! is a block of height H in which columns g−1 and g trade places and all
//! other columns rise straight up. After the last block every column is
//! carried back down to z = 0 by a closing arc routed to the right of the
//! braid.

use std::fmt;

use serde::Serialize;

use crate::blocks::{parse_stick_word, stick_word_curve, StickKind, LATTICE_UNIT};
use crate::error::{Error, Result};
use crate::geometry::{PiecewiseCurve, Vec3, JOINT_TOL};
use crate::lattice::{
    crossing_diagram, multi_path_disjoint, simplicity_gate, trace_path, Crossing, LatticePath,
    LatticePoint, LatticeWord,
};

/// Positive crossing, strand moving right (column g−1 to g).
pub const POSITIVE_RIGHT_WORD: &str = "k+k+i+k+k+k+";
/// Positive crossing, strand moving left. It passes in front (y = 1).
pub const POSITIVE_LEFT_WORD: &str = "k+j+k+k+i-k+j-k+";
/// The left-moving word as originally printed. Both of its `j-` steps go the
/// same way, so it ends one unit off the y = 0 plane.
pub const PRINTED_POSITIVE_LEFT_WORD: &str = "k+j-k+k+i-k+j-k+";
/// Negative crossing, strand moving right. It passes in front (y = 1).
pub const NEGATIVE_RIGHT_WORD: &str = "k+j+k+i+k+j-k+";
/// Negative crossing, strand moving left.
pub const NEGATIVE_LEFT_WORD: &str = "k+k+i-k+k+";
/// Passive strand length as originally printed, for both crossing signs.
pub const PRINTED_PASSIVE_HEIGHT: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct BraidLetter {
    /// Artin generator index, 1-based.
    pub generator: usize,
    pub positive: bool,
}

impl BraidLetter {
    pub fn sign(self) -> i8 {
        if self.positive {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for BraidLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.generator)
        } else {
            write!(f, "-{}", self.generator)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<BraidLetter>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<BraidLetter>) -> Result<Self> {
        if strands < 2 {
            return Err(Error::BraidParse(format!("need at least 2 strands, got {strands}")));
        }
        if letters.is_empty() {
            return Err(Error::BraidParse("empty braid word".into()));
        }
        if let Some(l) = letters.iter().find(|l| l.generator == 0 || l.generator >= strands) {
            return Err(Error::GeneratorOutOfRange {
                generator: l.generator,
                strands,
            });
        }
        Ok(Self { strands, letters })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[BraidLetter] {
        &self.letters
    }

    /// `permutation()[j]` is the column where the strand entering at column
    /// j leaves the braid.
    pub fn permutation(&self) -> Vec<usize> {
        let mut at: Vec<usize> = (0..self.strands).collect();
        for l in &self.letters {
            let (a, b) = (l.generator - 1, l.generator);
            for c in at.iter_mut() {
                if *c == a {
                    *c = b;
                } else if *c == b {
                    *c = a;
                }
            }
        }
        at
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={};", self.strands)?;
        for l in &self.letters {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

/// Parses `"n=<int>; g g ..."` where `g` is a signed generator index. Without
/// the header the strand count is one more than the largest index.
pub fn parse_braid(text: &str) -> Result<BraidWord> {
    let text = text.trim();
    let (header, body) = match text.split_once(';') {
        Some((h, b)) => (Some(h.trim()), b),
        None => (None, text),
    };
    let strands = header
        .map(|h| {
            let value = h
                .strip_prefix("n=")
                .or_else(|| h.strip_prefix("n ="))
                .ok_or_else(|| Error::BraidParse(format!("malformed header {h:?}")))?;
            value
                .trim()
                .parse::<usize>()
                .map_err(|_| Error::BraidParse(format!("malformed strand count {value:?}")))
        })
        .transpose()?;

    let letters = body
        .split_whitespace()
        .map(|token| {
            let g: i64 = token
                .parse()
                .map_err(|_| Error::BraidParse(format!("malformed generator {token:?}")))?;
            if g == 0 {
                return Err(Error::BraidParse("generator indices start at 1".into()));
            }
            Ok(BraidLetter {
                generator: g.unsigned_abs() as usize,
                positive: g > 0,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if letters.is_empty() {
        return Err(Error::BraidParse("empty braid word".into()));
    }
    let strands = strands.unwrap_or_else(|| 1 + letters.iter().map(|l| l.generator).max().unwrap_or(0));
    BraidWord::new(strands, letters)
}

fn word_displacement(word: &[StickKind]) -> [i64; 3] {
    word.iter().fold([0, 0, 0], |acc, k| {
        let s = k.step();
        [acc[0] + s[0], acc[1] + s[1], acc[2] + s[2]]
    })
}

/// Net lattice displacement of a stick word given as text.
pub fn stick_word_displacement(text: &str) -> Result<[i64; 3]> {
    Ok(word_displacement(&parse_stick_word(text)?))
}

/// One braid letter laid out over all columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BraidComponent {
    pub columns: Vec<Vec<StickKind>>,
    /// Common rise of every column, in lattice units.
    pub height: i64,
    /// The two columns whose strands trade places.
    pub swap: (usize, usize),
    pub positive: bool,
}

impl BraidComponent {
    /// Column paths with the block's base at height `base`.
    pub fn paths(&self, base: i64) -> Vec<LatticePath> {
        self.columns
            .iter()
            .enumerate()
            .map(|(c, w)| {
                let word = LatticeWord::from_sticks(w, false).expect("open words always build");
                trace_path(word.letters(), [c as i64, 0, base])
            })
            .collect()
    }
}

/// The block for σ_g (or its inverse) on `strands` strands.
pub fn crossing_component(generator: usize, positive: bool, strands: usize) -> Result<BraidComponent> {
    if generator == 0 || generator >= strands {
        return Err(Error::GeneratorOutOfRange { generator, strands });
    }
    let (right, left) = if positive {
        (POSITIVE_RIGHT_WORD, POSITIVE_LEFT_WORD)
    } else {
        (NEGATIVE_RIGHT_WORD, NEGATIVE_LEFT_WORD)
    };
    let right = parse_stick_word(right)?;
    let left = parse_stick_word(left)?;
    let height = word_displacement(&right)[2];
    debug_assert_eq!(height, word_displacement(&left)[2]);
    let passive = vec![StickKind::KPlus; height as usize];
    let columns = (0..strands)
        .map(|c| {
            if c == generator - 1 {
                right.clone()
            } else if c == generator {
                left.clone()
            } else {
                passive.clone()
            }
        })
        .collect();
    Ok(BraidComponent {
        columns,
        height,
        swap: (generator - 1, generator),
        positive,
    })
}

/// The braid with every strand followed from bottom to top.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BraidStack {
    /// Stick word of the strand entering at each column.
    pub strand_words: Vec<Vec<StickKind>>,
    /// Exit column of the strand entering at each column.
    pub permutation: Vec<usize>,
    pub height: i64,
    pub components: Vec<BraidComponent>,
}

impl BraidStack {
    /// Paths of every strand, each starting at (j, 0, 0).
    pub fn paths(&self) -> Vec<LatticePath> {
        self.strand_words
            .iter()
            .enumerate()
            .map(|(j, w)| {
                let word = LatticeWord::from_sticks(w, false).expect("open words always build");
                trace_path(word.letters(), [j as i64, 0, 0])
            })
            .collect()
    }
}

pub fn stack_components(word: &BraidWord) -> Result<BraidStack> {
    let n = word.strands();
    let components = word
        .letters()
        .iter()
        .map(|l| crossing_component(l.generator, l.positive, n))
        .collect::<Result<Vec<_>>>()?;
    let mut column_of: Vec<usize> = (0..n).collect();
    let mut strand_words = vec![Vec::new(); n];
    let mut height = 0;
    for comp in &components {
        for (strand, col) in column_of.iter_mut().enumerate() {
            strand_words[strand].extend_from_slice(&comp.columns[*col]);
            if *col == comp.swap.0 {
                *col = comp.swap.1;
            } else if *col == comp.swap.1 {
                *col = comp.swap.0;
            }
        }
        height += comp.height;
    }
    Ok(BraidStack {
        strand_words,
        permutation: column_of,
        height,
        components,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosurePlan {
    /// Arc from the top of column m back to its bottom.
    pub arcs: Vec<Vec<StickKind>>,
    /// How far arc m rises above the braid and sinks below it.
    pub clearances: Vec<i64>,
}

impl ClosurePlan {
    pub fn paths(&self, height: i64) -> Vec<LatticePath> {
        self.arcs
            .iter()
            .enumerate()
            .map(|(m, w)| {
                let word = LatticeWord::from_sticks(w, false).expect("open words always build");
                trace_path(word.letters(), [m as i64, 0, height])
            })
            .collect()
    }
}

/// Closing arcs for an n-strand braid of the given height. Arc m rises
/// n − m units, runs right to x = 2n − 1 − m, drops below the braid by the
/// same clearance and returns. Arcs for lower columns enclose those for
/// higher ones, so no two arcs meet and none enters the braid.
pub fn closure_arcs(strands: usize, height: i64) -> ClosurePlan {
    use StickKind::*;
    let n = strands as i64;
    let mut arcs = Vec::with_capacity(strands);
    let mut clearances = Vec::with_capacity(strands);
    for m in 0..n {
        let c = n - m;
        let w = 2 * n - 1 - 2 * m;
        let mut arc = Vec::new();
        arc.extend(std::iter::repeat_n(KPlus, c as usize));
        arc.extend(std::iter::repeat_n(IPlus, w as usize));
        arc.extend(std::iter::repeat_n(KMinus, (height + 2 * c) as usize));
        arc.extend(std::iter::repeat_n(IMinus, w as usize));
        arc.extend(std::iter::repeat_n(KPlus, c as usize));
        arcs.push(arc);
        clearances.push(c);
    }
    ClosurePlan { arcs, clearances }
}

/// Cycles of a permutation, each listed from its smallest element.
pub fn permutation_cycles(permutation: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; permutation.len()];
    let mut cycles = Vec::new();
    for start in 0..permutation.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            cycle.push(j);
            j = permutation[j];
        }
        cycles.push(cycle);
    }
    cycles
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkComponent {
    /// Entry columns of the strands this component runs through, in order.
    pub strands: Vec<usize>,
    pub word: LatticeWord,
    pub start: LatticePoint,
}

/// The lattice layout of a closed braid, one closed word per link component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkPlan {
    pub braid: BraidWord,
    pub height: i64,
    pub components: Vec<LinkComponent>,
    pub paths: Vec<LatticePath>,
}

impl LinkPlan {
    pub fn crossings(&self) -> Result<Vec<Crossing>> {
        crossing_diagram(&self.paths)
    }
}

/// Lays out the closed braid on the lattice and runs the simplicity gate on
/// every component and the disjointness check across them.
pub fn plan_link(braid: &BraidWord) -> Result<LinkPlan> {
    let stack = stack_components(braid)?;
    let closure = closure_arcs(braid.strands(), stack.height);
    let mut components = Vec::new();
    for cycle in permutation_cycles(&stack.permutation) {
        let mut sticks = Vec::new();
        for &j in &cycle {
            sticks.extend_from_slice(&stack.strand_words[j]);
            sticks.extend_from_slice(&closure.arcs[stack.permutation[j]]);
        }
        let word = LatticeWord::from_sticks(&sticks, true)?;
        components.push(LinkComponent {
            start: [cycle[0] as i64, 0, 0],
            strands: cycle,
            word,
        });
    }
    for (i, c) in components.iter().enumerate() {
        let report = simplicity_gate(&c.word);
        if !report.passed {
            return Err(Error::GateFailure {
                component: i,
                detail: report.to_string(),
            });
        }
    }
    let paths: Vec<LatticePath> = components
        .iter()
        .map(|c| trace_path(c.word.letters(), c.start))
        .collect();
    if !multi_path_disjoint(&paths) {
        return Err(Error::ComponentsNotDisjoint);
    }
    Ok(LinkPlan {
        braid: braid.clone(),
        height: stack.height,
        components,
        paths,
    })
}

/// A closed braid realized as closed curves of curvature one.
#[derive(Debug, Clone)]
pub struct LinkAssembly {
    pub plan: LinkPlan,
    pub curves: Vec<PiecewiseCurve>,
}

/// Places the sticks of one closed lattice word starting at a lattice vertex.
pub fn instantiate_word(word: &LatticeWord, start: LatticePoint) -> Result<PiecewiseCurve> {
    let origin = Vec3::new(start[0] as f64, start[1] as f64, start[2] as f64) * LATTICE_UNIT;
    let curve = stick_word_curve(&word.sticks(), origin)?;
    if word.is_closed() {
        curve.close(JOINT_TOL)
    } else {
        Ok(curve)
    }
}

pub fn assemble_link(braid: &BraidWord) -> Result<LinkAssembly> {
    let plan = plan_link(braid)?;
    let curves = plan
        .components
        .iter()
        .map(|c| instantiate_word(&c.word, c.start))
        .collect::<Result<Vec<_>>>()?;
    Ok(LinkAssembly { plan, curves })
}

#[cfg(test)]
mod tests {
    use super::*;
    use StickKind::*;

    #[test]
    fn parses_braids() {
        let b = parse_braid("1 1 1").unwrap();
        assert_eq!(b.strands(), 2);
        assert_eq!(b.letters().len(), 3);
        assert!(b.letters().iter().all(|l| l.generator == 1 && l.positive));

        let b = parse_braid("n=3; 1 -2").unwrap();
        assert_eq!(b.strands(), 3);
        assert_eq!(
            b.letters(),
            &[
                BraidLetter { generator: 1, positive: true },
                BraidLetter { generator: 2, positive: false }
            ]
        );
        assert_eq!(b.to_string(), "n=3; 1 -2");
        assert_eq!(parse_braid(&b.to_string()).unwrap(), b);
    }

    #[test]
    fn rejects_bad_braids() {
        for text in ["0", "", "n=2;", "1 x", "n=1; 1", "n=2; 2", "m=3; 1", "1.5"] {
            assert!(parse_braid(text).is_err(), "{text:?}");
        }
        assert!(matches!(
            parse_braid("n=2; 3"),
            Err(Error::GeneratorOutOfRange { generator: 3, strands: 2 })
        ));
    }

    #[test]
    fn permutations() {
        assert_eq!(parse_braid("1 1 1").unwrap().permutation(), vec![1, 0]);
        assert_eq!(parse_braid("n=2; 1 -1").unwrap().permutation(), vec![0, 1]);
        // σ1 then σ2: strand 0 goes 0→1→2, strand 2 goes 2→1, strand 1 goes 1→0.
        assert_eq!(parse_braid("n=3; 1 -2").unwrap().permutation(), vec![2, 0, 1]);
        assert_eq!(permutation_cycles(&[2, 0, 1]), vec![vec![0, 2, 1]]);
        assert_eq!(permutation_cycles(&[0, 1]), vec![vec![0], vec![1]]);
    }

    #[test]
    fn stick_words_parse() {
        assert_eq!(parse_stick_word("k+ j-k+").unwrap(), vec![KPlus, JMinus, KPlus]);
        assert!(parse_stick_word("k+j").is_err());
    }

    #[test]
    fn component_columns() {
        let c = crossing_component(1, true, 2).unwrap();
        assert_eq!(c.height, 5);
        assert_eq!(word_displacement(&c.columns[0]), [1, 0, 5]);
        assert_eq!(word_displacement(&c.columns[1]), [-1, 0, 5]);

        let c = crossing_component(1, false, 2).unwrap();
        assert_eq!(c.height, 4);
        assert_eq!(word_displacement(&c.columns[0]), [1, 0, 4]);
        assert_eq!(word_displacement(&c.columns[1]), [-1, 0, 4]);

        let c = crossing_component(1, true, 4).unwrap();
        assert_eq!(c.columns[2], vec![KPlus; 5]);
        assert_eq!(c.columns[3], vec![KPlus; 5]);
        let c = crossing_component(2, false, 4).unwrap();
        assert_eq!(c.columns[0], vec![KPlus; 4]);

        assert!(crossing_component(0, true, 2).is_err());
        assert!(crossing_component(2, true, 2).is_err());
    }

    #[test]
    fn single_crossing_sign() {
        for positive in [true, false] {
            let c = crossing_component(1, positive, 2).unwrap();
            let paths = c.paths(0);
            assert!(multi_path_disjoint(&paths));
            let x = crossing_diagram(&paths).unwrap();
            assert_eq!(x.len(), 1);
            assert_eq!(x[0].sign, if positive { 1 } else { -1 });
        }
    }

    #[test]
    fn trefoil_stack() {
        let s = stack_components(&parse_braid("1 1 1").unwrap()).unwrap();
        assert_eq!(s.height, 15);
        assert_eq!(s.permutation, vec![1, 0]);
        assert_eq!(s.strand_words[0].len(), 6 + 8 + 6);
    }

    #[test]
    fn arcs() {
        let plan = closure_arcs(2, 15);
        let mut expected = vec![KPlus, KPlus, IPlus, IPlus, IPlus];
        expected.extend([KMinus; 19]);
        expected.extend([IMinus, IMinus, IMinus, KPlus, KPlus]);
        assert_eq!(plan.arcs[0], expected);
        for arc in &plan.arcs {
            assert_eq!(word_displacement(arc), [0, 0, -15]);
        }
        let stack = stack_components(&parse_braid("1 1 1").unwrap()).unwrap();
        let mut paths = plan.paths(15);
        paths.extend(stack.paths());
        // Arcs and strands may meet only at their shared endpoints.
        let interiors: Vec<std::collections::HashSet<LatticePoint>> = paths
            .iter()
            .map(|p| p.vertices()[1..p.vertices().len() - 1].iter().copied().collect())
            .collect();
        for (i, a) in interiors.iter().enumerate() {
            for (j, p) in paths.iter().enumerate() {
                if i != j {
                    assert!(p.vertices().iter().all(|v| !a.contains(v)), "{i} meets {j}");
                }
            }
        }
    }

    #[test]
    fn trefoil_plan() {
        let plan = plan_link(&parse_braid("1 1 1").unwrap()).unwrap();
        assert_eq!(plan.components.len(), 1);
        let x = plan.crossings().unwrap();
        assert_eq!(x.len(), 3);
        assert!(x.iter().all(|c| c.sign == 1));
    }

    #[test]
    fn hopf_like_plan() {
        let plan = plan_link(&parse_braid("n=2; 1 -1").unwrap()).unwrap();
        assert_eq!(plan.components.len(), 2);
        let x = plan.crossings().unwrap();
        assert_eq!(x.len(), 2);
        assert_eq!(x.iter().map(|c| c.sign as i32).sum::<i32>(), 0);
    }
}
