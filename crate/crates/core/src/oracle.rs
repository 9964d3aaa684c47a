//! Brute-force routes over the full enumeration of `M(n)`.
//!
//! Nothing here uses the closed forms in [`crate::combinatorics`]; every
//! quantity is counted or summed matrix by matrix. The work is split by TP
//! value so it can run in parallel.

use std::collections::BTreeMap;

use crate::combinatorics::{enumerate_cms, CmEnumerator, ScoreDistribution};
use crate::error::Result;
use crate::exec::Execution;
use crate::metrics::{marginal_benefit, BinaryConfusion};
use crate::rational::Rational;

/// Per-cell value counts gathered in one pass over `M(n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellCounts {
    pub n: u64,
    /// Number of matrices visited.
    pub cardinality: u64,
    /// `by_cell[c][x]`: matrices whose cell `c` equals `x`.
    pub by_cell: [Vec<u64>; 4],
}

impl CellCounts {
    fn empty(n: u64) -> Self {
        let row = vec![0; n as usize + 1];
        CellCounts {
            n,
            cardinality: 0,
            by_cell: [row.clone(), row.clone(), row.clone(), row],
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.cardinality += other.cardinality;
        for (mine, theirs) in self.by_cell.iter_mut().zip(other.by_cell) {
            for (a, b) in mine.iter_mut().zip(theirs) {
                *a += b;
            }
        }
        self
    }
}

pub fn cell_counts(n: u64, exec: Execution) -> Result<CellCounts> {
    enumerate_cms(n)?;
    Ok(exec.map_reduce(
        0..=n,
        |tp| {
            let mut acc = CellCounts::empty(n);
            for cm in CmEnumerator::with_tp(n, tp) {
                acc.cardinality += 1;
                for (cell, &value) in cm.0.iter().enumerate() {
                    acc.by_cell[cell][value as usize] += 1;
                }
            }
            acc
        },
        || CellCounts::empty(n),
        CellCounts::merge,
    ))
}

/// Histogram of `marginal_benefit` evaluated on every matrix of `M(n)`.
pub fn marginal_benefit_histogram(n: u64, exec: Execution) -> Result<ScoreDistribution> {
    enumerate_cms(n)?;
    let counts = exec.map_reduce(
        0..=n,
        |tp| {
            let mut acc: BTreeMap<Rational, u64> = BTreeMap::new();
            for cm in CmEnumerator::with_tp(n, tp) {
                let score = marginal_benefit(&BinaryConfusion::from(cm)).expect("n >= 1");
                *acc.entry(score).or_default() += 1;
            }
            acc
        },
        BTreeMap::new,
        |mut a, b| {
            for (score, m) in b {
                *a.entry(score).or_default() += m;
            }
            a
        },
    );
    Ok(ScoreDistribution { n, counts })
}

/// Population mean and variance of `B` summed matrix by matrix.
///
/// Both are exact: `B = (FP - FN)/n`, so the sums are taken over the
/// integer differences and divided once at the end.
pub fn marginal_benefit_moments(n: u64, exec: Execution) -> Result<(Rational, Rational)> {
    enumerate_cms(n)?;
    let (count, sum, sum_sq) = exec.map_reduce(
        0..=n,
        |tp| {
            CmEnumerator::with_tp(n, tp).fold((0i128, 0i128, 0i128), |(c, s, q), cm| {
                let d = cm.fp() as i128 - cm.fn_() as i128;
                (c + 1, s + d, q + d * d)
            })
        },
        || (0, 0, 0),
        |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2),
    );
    let n = n as i128;
    let mean = Rational::new(sum, count * n);
    let second_moment = Rational::new(sum_sq, count * n * n);
    Ok((mean, second_moment - mean * mean))
}
