//! Brute-force oracle over single-commodity integer allocations.
//!
//! Written against plain `Ratio<i64>` arithmetic so it shares no code path
//! with the engine it checks.

#![allow(dead_code)]

use num_rational::Ratio;
use paretoscope_core::{Allocation, TransformSpec};

pub type Q = Ratio<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Own,
    /// Own holding scaled by a constant.
    Scaled(i64),
    RelativeMean,
    /// Each agent compares against the next agent (cyclically).
    NextNeighbour,
}

pub const FAMILIES: [Family; 4] = [
    Family::Own,
    Family::Scaled(2),
    Family::RelativeMean,
    Family::NextNeighbour,
];

impl Family {
    pub fn transforms(self, n: usize) -> Vec<TransformSpec> {
        (0..n)
            .map(|k| {
                let text = match self {
                    Family::Own => "own".to_string(),
                    Family::Scaled(w) => format!("weighted_own({w})"),
                    Family::RelativeMean => "relative_mean".to_string(),
                    Family::NextNeighbour => format!("relative_nbhd({})", (k + 1) % n + 1),
                };
                text.parse().unwrap()
            })
            .collect()
    }

    /// `f_k(x)`, or `None` where the reference point is zero.
    pub fn info(self, x: &[i64], k: usize) -> Option<Q> {
        let n = x.len() as i64;
        match self {
            Family::Own => Some(Q::from_integer(x[k])),
            Family::Scaled(w) => Some(Q::from_integer(w * x[k])),
            Family::RelativeMean => {
                let total: i64 = x.iter().sum();
                (total != 0).then(|| Q::new(x[k] * n, total))
            }
            Family::NextNeighbour => {
                let reference = x[(k + 1) % x.len()];
                (reference != 0).then(|| Q::new(x[k], reference))
            }
        }
    }

    pub fn profile(self, x: &[i64]) -> Option<Vec<Q>> {
        (0..x.len()).map(|k| self.info(x, k)).collect()
    }
}

pub fn improves(from: &[Q], to: &[Q]) -> bool {
    from.iter().zip(to).all(|(a, b)| b >= a) && from.iter().zip(to).any(|(a, b)| b > a)
}

/// Every vector in `levels^n`, first agent slowest.
pub fn grid(levels: &[i64], n: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                levels.iter().map(move |&l| {
                    let mut v = prefix.clone();
                    v.push(l);
                    v
                })
            })
            .collect();
    }
    out
}

pub fn alloc(x: &[i64]) -> Allocation {
    let values: Vec<u64> = x.iter().map(|&v| v as u64).collect();
    Allocation::from_scalars(&values)
}

/// Ordered improving pairs among the states where `family` is defined.
pub fn improving_pairs(family: Family, states: &[Vec<i64>]) -> Vec<(usize, usize)> {
    let profiles: Vec<Option<Vec<Q>>> = states.iter().map(|s| family.profile(s)).collect();
    let mut pairs = Vec::new();
    for (i, p) in profiles.iter().enumerate() {
        for (j, q) in profiles.iter().enumerate() {
            if let (Some(p), Some(q)) = (p, q) {
                if i != j && improves(p, q) {
                    pairs.push((i, j));
                }
            }
        }
    }
    pairs
}
