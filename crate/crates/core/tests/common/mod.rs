#![allow(dead_code)]

use knotcurve::braid::{BraidLetter, BraidWord};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Seeded random braid words with at most `max_strands` strands and at most
/// `max_len` letters.
pub fn random_braids(seed: u64, count: usize, max_strands: usize, max_len: usize) -> Vec<BraidWord> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(2..=max_strands);
            let len = rng.random_range(1..=max_len);
            let letters = (0..len)
                .map(|_| BraidLetter {
                    generator: rng.random_range(1..n),
                    positive: rng.random_bool(0.5),
                })
                .collect();
            BraidWord::new(n, letters).unwrap()
        })
        .collect()
}

/// Cycle count of a permutation, computed by marking visited points.
pub fn cycle_count(perm: &[usize]) -> usize {
    let mut seen = vec![false; perm.len()];
    let mut count = 0;
    for i in 0..perm.len() {
        if !seen[i] {
            count += 1;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = perm[j];
            }
        }
    }
    count
}

/// Exit columns by composing transpositions letter by letter.
pub fn permutation_oracle(word: &BraidWord) -> Vec<usize> {
    let n = word.strands();
    // position[s] = column of strand s.
    let mut position: Vec<usize> = (0..n).collect();
    for l in word.letters() {
        let g = l.generator;
        for p in position.iter_mut() {
            *p = match *p {
                c if c == g - 1 => g,
                c if c == g => g - 1,
                c => c,
            };
        }
    }
    position
}
