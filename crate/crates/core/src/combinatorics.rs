//! The space `M(n)` of confusion matrices with `n` samples, its counting
//! identities, and the distribution of marginal benefit over it.
//!
//! Everything here is closed form or counting based. The brute-force
//! routes that check these formulas live in [`crate::oracle`].

use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::rational::Rational;

/// The `w`-th triangular number, `w(w+1)/2`.
pub fn termial(w: u64) -> u64 {
    w * (w + 1) / 2
}

/// A confusion matrix as a point of `M(n)`, cells ordered (TP, FN, FP, TN).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CmVector(pub [u64; 4]);

impl CmVector {
    pub fn tp(&self) -> u64 {
        self.0[0]
    }
    pub fn fn_(&self) -> u64 {
        self.0[1]
    }
    pub fn fp(&self) -> u64 {
        self.0[2]
    }
    pub fn tn(&self) -> u64 {
        self.0[3]
    }
    pub fn n(&self) -> u64 {
        self.0.iter().sum()
    }
}

impl From<CmVector> for crate::metrics::BinaryConfusion {
    fn from(v: CmVector) -> Self {
        crate::metrics::BinaryConfusion::new(v.tp(), v.fn_(), v.fp(), v.tn())
    }
}

/// Stream over `M(n)` in lexicographic (TP, FN, FP) order; TN is whatever
/// remains.
///
/// Restricting TP with [`CmEnumerator::with_tp`] yields disjoint slices that
/// together cover `M(n)`, which is how the parallel oracles split the work.
#[derive(Debug, Clone)]
pub struct CmEnumerator {
    n: u64,
    tp_end: u64,
    next: Option<[u64; 3]>,
}

impl CmEnumerator {
    fn new(n: u64, tp_start: u64, tp_end: u64) -> Self {
        CmEnumerator {
            n,
            tp_end,
            next: (tp_start <= tp_end).then_some([tp_start, 0, 0]),
        }
    }

    /// Only the matrices with the given TP.
    pub fn with_tp(n: u64, tp: u64) -> Self {
        CmEnumerator::new(n, tp, tp.min(n))
    }
}

impl Iterator for CmEnumerator {
    type Item = CmVector;

    fn next(&mut self) -> Option<CmVector> {
        let [tp, fn_, fp] = self.next?;
        if tp > self.n {
            self.next = None;
            return None;
        }
        let item = CmVector([tp, fn_, fp, self.n - tp - fn_ - fp]);
        self.next = if tp + fn_ + fp < self.n {
            Some([tp, fn_, fp + 1])
        } else if tp + fn_ < self.n {
            Some([tp, fn_ + 1, 0])
        } else if tp < self.tp_end {
            Some([tp + 1, 0, 0])
        } else {
            None
        };
        Some(item)
    }
}

/// Every quadruple of non-negative integers summing to `n`, once each.
pub fn enumerate_cms(n: u64) -> Result<CmEnumerator> {
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    Ok(CmEnumerator::new(n, 0, n))
}

/// Number of matrices in `M(n)` whose designated cell equals `x`:
/// `(n - x + 1)?`. The count is the same for every cell position.
pub fn count_value(x: i64, n: u64) -> Result<u64> {
    let x = check_domain(x, n)?;
    Ok(termial(n - x + 1))
}

/// `|M(n)| = (n+1)(n+2)(n+3)/6`.
pub fn total_combinations(n: u64) -> u64 {
    (n + 1) * (n + 2) * (n + 3) / 6
}

/// Checks that the per-value counts of one cell partition `M(n)`.
pub fn count_sum_identity(n: u64) -> bool {
    let sum: u64 = (0..=n)
        .map(|x| count_value(x as i64, n).expect("x is in range"))
        .sum();
    sum == total_combinations(n)
}

/// Growth of `C(x; n)` when one sample is added: `n - x + 2`.
pub fn count_increment(x: i64, n: u64) -> Result<u64> {
    let x = check_domain(x, n)?;
    Ok(n - x + 2)
}

fn check_domain(x: i64, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    if x < 0 || x as u64 > n {
        return Err(Error::Domain { x, n });
    }
    Ok(x as u64)
}

/// Exact multiplicity of each marginal-benefit score over `M(n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreDistribution {
    pub n: u64,
    pub counts: BTreeMap<Rational, u64>,
}

impl ScoreDistribution {
    /// Builds the distribution from multiplicities indexed by `FP - FN + n`.
    pub fn from_differences(n: u64, by_difference: &[u64]) -> Self {
        let counts = by_difference
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(k, &m)| (Rational::new(k as i128 - n as i128, n as i128), m))
            .collect();
        ScoreDistribution { n, counts }
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.counts
            .iter()
            .all(|(s, m)| self.counts.get(&-*s) == Some(m))
    }

    /// The score with the largest multiplicity, if it is unique.
    pub fn unique_mode(&self) -> Option<Rational> {
        let max = *self.counts.values().max()?;
        let mut at_max = self.counts.iter().filter(|(_, &m)| m == max);
        let (score, _) = at_max.next()?;
        at_max.next().is_none().then_some(*score)
    }

    /// Population mean from the multiplicities.
    pub fn mean(&self) -> Rational {
        let total = self.total() as i128;
        let sum: Rational = self
            .counts
            .iter()
            .map(|(s, &m)| *s * Rational::from_integer(m as i128))
            .sum();
        sum / Rational::from_integer(total)
    }

    /// Population variance from the multiplicities.
    pub fn variance(&self) -> Rational {
        let mean = self.mean();
        let total = self.total() as i128;
        let sum: Rational = self
            .counts
            .iter()
            .map(|(s, &m)| (*s - mean) * (*s - mean) * Rational::from_integer(m as i128))
            .sum();
        sum / Rational::from_integer(total)
    }
}

/// Distribution of `B = (FP - FN)/n` over `M(n)` without enumerating it.
///
/// For a fixed (FP, FN) the remaining `n - FP - FN` samples split between TP
/// and TN in `n - FP - FN + 1` ways, so each difference accumulates those
/// weights. O(n²) work, split across differences.
pub fn marginal_benefit_distribution(n: u64, exec: Execution) -> Result<ScoreDistribution> {
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    let differences: Vec<i64> = (-(n as i64)..=n as i64).collect();
    let by_difference = exec.map_collect(&differences, |&d| multiplicity_of_difference(n, d));
    Ok(ScoreDistribution::from_differences(n, &by_difference))
}

/// Number of matrices in `M(n)` with `FP - FN = d`.
fn multiplicity_of_difference(n: u64, d: i64) -> u64 {
    let offset = d.unsigned_abs();
    let mut total = 0;
    // the smaller of (FP, FN) is `low`, the larger `low + offset`
    let mut low = 0;
    while 2 * low + offset <= n {
        total += n - 2 * low - offset + 1;
        low += 1;
    }
    total
}

/// Moments of `B` over `M(n)`. The variance is exact; `std` is its square
/// root in floating point.
#[derive(Debug, Clone, PartialEq)]
pub struct BStats {
    pub n: u64,
    pub mean: Rational,
    pub variance: Rational,
    pub std: f64,
}

/// Closed-form moments: mean 0, variance `(n+4)/(10n)`.
pub fn b_stats(n: u64) -> Result<BStats> {
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    let variance = Rational::new(n as i128 + 4, 10 * n as i128);
    Ok(BStats {
        n,
        mean: Rational::zero(),
        variance,
        std: variance.to_f64().expect("finite").sqrt(),
    })
}

/// Limit of the standard deviation as `n` grows, `1/√10`.
pub fn limiting_std() -> f64 {
    0.1f64.sqrt()
}

/// Standard deviation of the symmetric triangular distribution on `[-1, 1]`.
pub fn triangular_reference_std() -> f64 {
    1.0 / 6f64.sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonTriangularWitness {
    pub n: u64,
    pub actual_std: f64,
    pub triangular_std: f64,
    /// `actual_std - triangular_std`.
    pub difference: f64,
}

impl NonTriangularWitness {
    /// Whether the two standard deviations differ by more than `margin`.
    pub fn distinct_by(&self, margin: f64) -> bool {
        self.difference.abs() > margin
    }
}

/// Compares the standard deviation of `B` with the one a symmetric
/// triangular distribution on `[-1, 1]` would have.
pub fn non_triangular_witness(n: u64) -> Result<NonTriangularWitness> {
    let stats = b_stats(n)?;
    let triangular_std = triangular_reference_std();
    Ok(NonTriangularWitness {
        n,
        actual_std: stats.std,
        triangular_std,
        difference: stats.std - triangular_std,
    })
}
