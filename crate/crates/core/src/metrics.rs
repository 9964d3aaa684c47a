//! Group-level benefit metrics, OFI, disparate impact and their verdicts.
//!
//! The positive prediction is taken to be the beneficial one. Every value is
//! an exact [`Rational`]; nothing here touches floating point.

use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{exact_serde, Rational};

/// Counts of a binary classifier's outcomes for one group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct BinaryConfusion {
    pub tp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub fp: u64,
    pub tn: u64,
}

impl BinaryConfusion {
    pub const fn new(tp: u64, fn_: u64, fp: u64, tn: u64) -> Self {
        BinaryConfusion { tp, fn_, fp, tn }
    }

    pub fn n(&self) -> u64 {
        self.tp + self.fn_ + self.fp + self.tn
    }

    /// Positive labels, TP + FN.
    pub fn positives(&self) -> u64 {
        self.tp + self.fn_
    }

    /// Negative labels, FP + TN.
    pub fn negatives(&self) -> u64 {
        self.fp + self.tn
    }

    /// Positive predictions, TP + FP.
    pub fn predicted_positives(&self) -> u64 {
        self.tp + self.fp
    }

    /// Negative predictions, FN + TN.
    pub fn predicted_negatives(&self) -> u64 {
        self.fn_ + self.tn
    }

    /// Every cell multiplied by `k`.
    pub fn scaled(&self, k: u64) -> Self {
        BinaryConfusion::new(self.tp * k, self.fn_ * k, self.fp * k, self.tn * k)
    }

    /// Swaps TP with TN and FP with FN: the matrix seen with both classes
    /// relabelled.
    pub fn flipped(&self) -> Self {
        BinaryConfusion::new(self.tn, self.fp, self.fn_, self.tp)
    }

    fn checked_n(&self, name: &str) -> Result<i128> {
        match self.n() {
            0 => Err(Error::EmptyGroup(name.to_string())),
            n => Ok(n as i128),
        }
    }
}

impl std::ops::Add for BinaryConfusion {
    type Output = BinaryConfusion;

    fn add(self, rhs: Self) -> Self {
        BinaryConfusion::new(
            self.tp + rhs.tp,
            self.fn_ + rhs.fn_,
            self.fp + rhs.fp,
            self.tn + rhs.tn,
        )
    }
}

impl std::ops::AddAssign for BinaryConfusion {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl fmt::Display for BinaryConfusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "TP={} FN={} FP={} TN={}",
            self.tp, self.fn_, self.fp, self.tn
        )
    }
}

/// Benefit `b`: the positive-prediction rate (TP + FP) / n.
pub fn benefit(cm: &BinaryConfusion) -> Result<Rational> {
    let n = cm.checked_n("group")?;
    Ok(Rational::new(cm.predicted_positives() as i128, n))
}

/// Expected benefit `E[b]`: the positive-label rate (TP + FN) / n.
pub fn expected_benefit(cm: &BinaryConfusion) -> Result<Rational> {
    let n = cm.checked_n("group")?;
    Ok(Rational::new(cm.positives() as i128, n))
}

/// Marginal benefit `B = b - E[b] = (FP - FN) / n`.
///
/// Negative values mean the group receives less benefit than its labels
/// warrant, positive values mean it receives more.
pub fn marginal_benefit(cm: &BinaryConfusion) -> Result<Rational> {
    let n = cm.checked_n("group")?;
    Ok(Rational::new(cm.fp as i128 - cm.fn_ as i128, n))
}

/// Objective Fairness Index of group `i` against group `j`:
/// `B_i - B_j`, in `[-2, 2]`.
pub fn ofi(cm_i: &BinaryConfusion, cm_j: &BinaryConfusion) -> Result<Rational> {
    let n_i = cm_i.checked_n("i")?;
    let n_j = cm_j.checked_n("j")?;
    let b_i = Rational::new(cm_i.fp as i128 - cm_i.fn_ as i128, n_i);
    let b_j = Rational::new(cm_j.fp as i128 - cm_j.fn_ as i128, n_j);
    Ok(b_i - b_j)
}

/// Disparate impact with its undefined cases kept explicit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DiScore {
    Finite {
        #[serde(with = "exact_serde")]
        value: Rational,
    },
    /// The comparison group has no positive predictions while the first
    /// group does.
    UndefinedZeroDenominator,
    /// Neither group has positive predictions; reported as 1 by convention
    /// since equal (zero) rates mean no disparity.
    UndefinedContextualOne,
}

impl DiScore {
    /// Numeric value used for display and colouring, if any.
    pub fn value(&self) -> Option<Rational> {
        match self {
            DiScore::Finite { value } => Some(*value),
            DiScore::UndefinedContextualOne => Some(Rational::from_integer(1)),
            DiScore::UndefinedZeroDenominator => None,
        }
    }
}

impl fmt::Display for DiScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiScore::Finite { value } => write!(f, "{value}"),
            DiScore::UndefinedZeroDenominator => f.write_str("undefined (zero denominator)"),
            DiScore::UndefinedContextualOne => f.write_str("undefined (1 by context)"),
        }
    }
}

/// Disparate impact of `i` against `j`: `(P̂_i / n_i) / (P̂_j / n_j)`.
pub fn disparate_impact(cm_i: &BinaryConfusion, cm_j: &BinaryConfusion) -> Result<DiScore> {
    let n_i = cm_i.checked_n("i")?;
    let n_j = cm_j.checked_n("j")?;
    let pos_i = cm_i.predicted_positives() as i128;
    let pos_j = cm_j.predicted_positives() as i128;
    Ok(match (pos_i, pos_j) {
        (0, 0) => DiScore::UndefinedContextualOne,
        (_, 0) => DiScore::UndefinedZeroDenominator,
        _ => DiScore::Finite {
            value: Rational::new(pos_i, n_i) / Rational::new(pos_j, n_j),
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BiasVerdict {
    BiasTowardFirst,
    BiasTowardSecond,
    NoBiasIndicated,
    Undefined,
}

impl BiasVerdict {
    pub fn indicates_bias(self) -> bool {
        matches!(self, BiasVerdict::BiasTowardFirst | BiasVerdict::BiasTowardSecond)
    }
}

impl fmt::Display for BiasVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BiasVerdict::BiasTowardFirst => "bias toward first group",
            BiasVerdict::BiasTowardSecond => "bias toward second group",
            BiasVerdict::NoBiasIndicated => "no bias indicated",
            BiasVerdict::Undefined => "undefined",
        })
    }
}

/// Closed acceptance band for DI; values inside it are not flagged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiBand {
    #[serde(with = "exact_serde")]
    pub low: Rational,
    #[serde(with = "exact_serde")]
    pub high: Rational,
}

impl DiBand {
    /// The Four-Fifths Rule band `[4/5, 5/4]`.
    pub fn four_fifths() -> Self {
        DiBand {
            low: Rational::new(4, 5),
            high: Rational::new(5, 4),
        }
    }

    pub fn new(low: Rational, high: Rational) -> Result<Self> {
        if !low.is_positive() {
            return Err(Error::NonPositiveThreshold("DI band lower bound"));
        }
        if high < low {
            return Err(Error::Config(format!(
                "DI band upper bound {high} is below lower bound {low}"
            )));
        }
        Ok(DiBand { low, high })
    }

    pub fn verdict(&self, di: &DiScore) -> BiasVerdict {
        match di {
            DiScore::Finite { value } if *value > self.high => BiasVerdict::BiasTowardFirst,
            DiScore::Finite { value } if *value < self.low => BiasVerdict::BiasTowardSecond,
            DiScore::Finite { .. } | DiScore::UndefinedContextualOne => {
                BiasVerdict::NoBiasIndicated
            }
            DiScore::UndefinedZeroDenominator => BiasVerdict::Undefined,
        }
    }
}

impl Default for DiBand {
    fn default() -> Self {
        DiBand::four_fifths()
    }
}

/// Four-Fifths Rule: DI above 5/4 favours the first group, below 4/5 the
/// second. The band endpoints themselves are not flagged.
pub fn four_fifths_verdict(di: &DiScore) -> BiasVerdict {
    DiBand::four_fifths().verdict(di)
}

/// Default OFI threshold, 3/10.
pub fn default_ofi_threshold() -> Rational {
    Rational::new(3, 10)
}

/// OFI outside `[-threshold, threshold]` is flagged; the boundary is not.
pub fn ofi_verdict(value: &Rational, threshold: &Rational) -> Result<BiasVerdict> {
    if !threshold.is_positive() {
        return Err(Error::NonPositiveThreshold("OFI threshold"));
    }
    Ok(if *value > *threshold {
        BiasVerdict::BiasTowardFirst
    } else if *value < -*threshold {
        BiasVerdict::BiasTowardSecond
    } else {
        BiasVerdict::NoBiasIndicated
    })
}
