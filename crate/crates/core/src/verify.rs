//! Checks every closed form in [`crate::combinatorics`] against the
//! brute-force routes in [`crate::oracle`] over a range of `n`.

use num_traits::Zero;

use crate::combinatorics::{
    b_stats, count_increment, count_sum_identity, count_value, marginal_benefit_distribution,
    total_combinations,
};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::oracle::{cell_counts, marginal_benefit_histogram, marginal_benefit_moments, CellCounts};
use crate::rational::Rational;

/// Largest `n` for which full enumeration is attempted.
pub const MAX_ENUMERATION_N: u64 = 200;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub checked: u64,
    /// First `n` (and what differed) where the identity failed.
    pub failure: Option<String>,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub n_min: u64,
    pub n_max: u64,
    pub checks: Vec<IdentityCheck>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(IdentityCheck::passed)
    }
}

pub fn check_range(n_min: u64, n_max: u64) -> Result<()> {
    if n_min == 0 {
        return Err(Error::ZeroSize);
    }
    if n_min > n_max {
        return Err(Error::Config(format!("n-min {n_min} exceeds n-max {n_max}")));
    }
    if n_max > MAX_ENUMERATION_N {
        return Err(Error::Config(format!(
            "n-max {n_max} is above the enumeration limit {MAX_ENUMERATION_N}"
        )));
    }
    Ok(())
}

struct Tally {
    name: &'static str,
    checked: u64,
    failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            checked: 0,
            failure: None,
        }
    }

    fn record(&mut self, n: u64, outcome: std::result::Result<(), String>) {
        self.checked += 1;
        if let (None, Err(why)) = (&self.failure, outcome) {
            self.failure = Some(format!("n = {n}: {why}"));
        }
    }

    fn finish(self) -> IdentityCheck {
        IdentityCheck {
            name: self.name,
            checked: self.checked,
            failure: self.failure,
        }
    }
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> std::result::Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, expected {want:?}"))
    }
}

fn per_cell_counts(counts: &CellCounts) -> std::result::Result<(), String> {
    for (cell, row) in counts.by_cell.iter().enumerate() {
        for (x, &seen) in row.iter().enumerate() {
            let closed = count_value(x as i64, counts.n).map_err(|e| e.to_string())?;
            expect_eq(&format!("cell {cell}, value {x}"), seen, closed)?;
        }
    }
    Ok(())
}

/// Runs every identity for each `n` in `n_min..=n_max`.
pub fn verify_range(n_min: u64, n_max: u64, exec: Execution) -> Result<VerifyReport> {
    check_range(n_min, n_max)?;

    let mut cardinality = Tally::new("cardinality |M(n)| = (n+1)(n+2)(n+3)/6");
    let mut counting = Tally::new("per-cell count C(x;n) = (n-x+1)?");
    let mut count_sum = Tally::new("sum of C(x;n) over x = N(n)");
    let mut increment = Tally::new("count increment C(x;n+1) - C(x;n) = n-x+2");
    let mut distribution = Tally::new("distribution (counting) = enumeration histogram");
    let mut total = Tally::new("distribution total = N(n)");
    let mut symmetry = Tally::new("distribution symmetry counts[s] = counts[-s]");
    let mut mode = Tally::new("unique mode at 0");
    let mut mean = Tally::new("mean of B = 0 (enumeration)");
    let mut variance = Tally::new("variance of B = (n+4)/(10n) (enumeration)");
    let mut dist_variance = Tally::new("variance of B = (n+4)/(10n) (distribution)");

    let mut next_counts = cell_counts(n_min, exec)?;
    for n in n_min..=n_max {
        let counts = next_counts;
        next_counts = cell_counts(n + 1, exec)?;

        cardinality.record(n, expect_eq("|M(n)|", counts.cardinality, total_combinations(n)));
        counting.record(n, per_cell_counts(&counts));
        count_sum.record(
            n,
            count_sum_identity(n)
                .then_some(())
                .ok_or_else(|| "sum differs from N(n)".to_string()),
        );
        increment.record(n, {
            (0..=n).try_for_each(|x| {
                let closed = count_increment(x as i64, n).map_err(|e| e.to_string())?;
                (0..4).try_for_each(|cell| {
                    let grown = next_counts.by_cell[cell][x as usize] - counts.by_cell[cell][x as usize];
                    expect_eq(&format!("cell {cell}, value {x}"), grown, closed)
                })
            })
        });

        let counted = marginal_benefit_distribution(n, exec)?;
        let enumerated = marginal_benefit_histogram(n, exec)?;
        distribution.record(n, expect_eq("histogram", &counted.counts, &enumerated.counts));
        total.record(n, expect_eq("total", counted.total(), total_combinations(n)));
        symmetry.record(
            n,
            counted
                .is_symmetric()
                .then_some(())
                .ok_or_else(|| "asymmetric".to_string()),
        );
        mode.record(n, expect_eq("mode", counted.unique_mode(), Some(Rational::zero())));

        let stats = b_stats(n)?;
        let (brute_mean, brute_variance) = marginal_benefit_moments(n, exec)?;
        mean.record(n, expect_eq("mean", brute_mean, Rational::zero()));
        variance.record(n, expect_eq("variance", brute_variance, stats.variance));
        dist_variance.record(n, expect_eq("variance", counted.variance(), stats.variance));
    }

    Ok(VerifyReport {
        n_min,
        n_max,
        checks: [
            cardinality,
            counting,
            count_sum,
            increment,
            distribution,
            total,
            symmetry,
            mode,
            mean,
            variance,
            dist_variance,
        ]
        .into_iter()
        .map(Tally::finish)
        .collect(),
    })
}
