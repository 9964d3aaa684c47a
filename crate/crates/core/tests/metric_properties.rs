use num_traits::{One, Zero};
use proptest::prelude::*;

use ofi_core::metrics::{
    benefit, disparate_impact, expected_benefit, marginal_benefit, ofi, BinaryConfusion, DiScore,
};
use ofi_core::Rational;

fn confusion() -> impl Strategy<Value = BinaryConfusion> {
    (0u64..500, 0u64..500, 0u64..500, 0u64..500)
        .prop_filter("non-empty", |(a, b, c, d)| a + b + c + d > 0)
        .prop_map(|(tp, fn_, fp, tn)| BinaryConfusion::new(tp, fn_, fp, tn))
}

fn in_range(v: &Rational, lo: i128, hi: i128) -> bool {
    *v >= Rational::from_integer(lo) && *v <= Rational::from_integer(hi)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn group_metrics_in_range(cm in confusion()) {
        let b = benefit(&cm).unwrap();
        let e = expected_benefit(&cm).unwrap();
        let m = marginal_benefit(&cm).unwrap();
        prop_assert!(in_range(&b, 0, 1));
        prop_assert!(in_range(&e, 0, 1));
        prop_assert!(in_range(&m, -1, 1));
        prop_assert_eq!(m, b - e);
    }

    #[test]
    fn marginal_benefit_zero_iff_symmetric_errors(cm in confusion()) {
        prop_assert_eq!(marginal_benefit(&cm).unwrap().is_zero(), cm.fp == cm.fn_);
    }

    #[test]
    fn ofi_range_and_antisymmetry(a in confusion(), b in confusion()) {
        let ab = ofi(&a, &b).unwrap();
        prop_assert!(in_range(&ab, -2, 2));
        prop_assert_eq!(ab, -ofi(&b, &a).unwrap());
        prop_assert!(ofi(&a, &a).unwrap().is_zero());
    }

    #[test]
    fn ofi_scale_invariant(a in confusion(), b in confusion(), k in 1u64..1000) {
        prop_assert_eq!(ofi(&a.scaled(k), &b.scaled(k)).unwrap(), ofi(&a, &b).unwrap());
    }

    #[test]
    fn di_reciprocity(a in confusion(), b in confusion()) {
        let ab = disparate_impact(&a, &b).unwrap();
        let ba = disparate_impact(&b, &a).unwrap();
        if let (DiScore::Finite { value: x }, DiScore::Finite { value: y }) = (ab, ba) {
            prop_assert!((x * y).is_one());
        }
        match (a.predicted_positives(), b.predicted_positives()) {
            (0, 0) => prop_assert_eq!(ab, DiScore::UndefinedContextualOne),
            (_, 0) => prop_assert_eq!(ab, DiScore::UndefinedZeroDenominator),
            _ => {
                let finite = matches!(ab, DiScore::Finite { .. });
                prop_assert!(finite);
            }
        }
    }

    #[test]
    fn di_self_is_one(a in confusion()) {
        let di = disparate_impact(&a, &a).unwrap();
        if a.predicted_positives() > 0 {
            prop_assert_eq!(di, DiScore::Finite { value: Rational::one() });
        } else {
            prop_assert_eq!(di, DiScore::UndefinedContextualOne);
        }
    }

    #[test]
    fn flipped_matrix_negates_marginal_benefit(a in confusion()) {
        prop_assert_eq!(
            marginal_benefit(&a.flipped()).unwrap(),
            -marginal_benefit(&a).unwrap()
        );
    }
}
