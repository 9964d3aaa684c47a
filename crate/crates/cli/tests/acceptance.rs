//! Acceptance criteria. Each test prints one `[PASS]` / `[FAIL]` line.
//!
//! Run with `cargo test -p ofi-cli --test acceptance -- --nocapture
//! --test-threads=1` to see the lines in order.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use ofi_core::audit::{pairwise, parse_report, Metric};
use ofi_core::combinatorics::{
    b_stats, count_value, limiting_std, marginal_benefit_distribution, non_triangular_witness,
    termial, total_combinations,
};
use ofi_core::ingestion::GroupTable;
use ofi_core::metrics::{
    benefit, disparate_impact, expected_benefit, marginal_benefit, ofi, BinaryConfusion, DiScore,
};
use ofi_core::oracle::{cell_counts, marginal_benefit_histogram, marginal_benefit_moments};
use ofi_core::rational::to_fixed;
use ofi_core::{Execution, Rational};

fn verdict(name: &str, failures: &[String], elapsed: Duration) {
    if failures.is_empty() {
        println!("[PASS] {name} ({elapsed:.2?})");
    } else {
        println!("[FAIL] {name} ({elapsed:.2?})");
        for f in failures.iter().take(20) {
            println!("       - {f}");
        }
        if failures.len() > 20 {
            println!("       ... {} more", failures.len() - 20);
        }
    }
    assert!(failures.is_empty(), "{name}: {} failure(s), first: {}", failures.len(), failures[0]);
}

fn check(failures: &mut Vec<String>, ok: bool, what: impl FnOnce() -> String) {
    if !ok {
        failures.push(what());
    }
}

fn r(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

struct Scenario {
    name: &'static str,
    i: BinaryConfusion,
    j: BinaryConfusion,
    /// (b, E[b], B) for i then j
    group_values: [(Rational, Rational, Rational); 2],
    ofi_2dp: &'static str,
    di: Result<&'static str, DiScore>,
}

fn reference_scenarios() -> Vec<Scenario> {
    vec![
        Scenario {
            name: "A",
            i: BinaryConfusion::new(1, 0, 0, 5),
            j: BinaryConfusion::new(7, 0, 1, 10),
            group_values: [(r(1, 6), r(1, 6), r(0, 1)), (r(8, 18), r(7, 18), r(1, 18))],
            ofi_2dp: "-0.06",
            di: Ok("0.38"),
        },
        Scenario {
            name: "B",
            i: BinaryConfusion::new(0, 1, 0, 5),
            j: BinaryConfusion::new(0, 7, 0, 11),
            group_values: [(r(0, 6), r(1, 6), r(-1, 6)), (r(0, 18), r(7, 18), r(-7, 18))],
            ofi_2dp: "0.22",
            di: Err(DiScore::UndefinedContextualOne),
        },
        Scenario {
            name: "alpha",
            i: BinaryConfusion::new(1, 1, 0, 5),
            j: BinaryConfusion::new(1, 7, 0, 11),
            group_values: [(r(1, 7), r(2, 7), r(-1, 7)), (r(1, 19), r(8, 19), r(-7, 19))],
            ofi_2dp: "0.23",
            di: Ok("2.71"),
        },
    ]
}

#[test]
fn criterion_1_reference_scenarios() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for s in reference_scenarios() {
        for (cm, (b, e, m)) in [s.i, s.j].iter().zip(s.group_values) {
            check(&mut failures, benefit(cm).unwrap() == b, || format!("{}: b of {cm}", s.name));
            check(&mut failures, expected_benefit(cm).unwrap() == e, || {
                format!("{}: E[b] of {cm}", s.name)
            });
            check(&mut failures, marginal_benefit(cm).unwrap() == m, || {
                format!("{}: B of {cm}", s.name)
            });
        }
        let o = ofi(&s.i, &s.j).unwrap();
        check(&mut failures, to_fixed(&o, 2) == s.ofi_2dp, || {
            format!("{}: OFI renders {} not {}", s.name, to_fixed(&o, 2), s.ofi_2dp)
        });
        let di = disparate_impact(&s.i, &s.j).unwrap();
        match (s.di, di) {
            (Ok(text), DiScore::Finite { value }) => {
                check(&mut failures, to_fixed(&value, 2) == text, || {
                    format!("{}: DI renders {} not {text}", s.name, to_fixed(&value, 2))
                })
            }
            (Err(expected), got) => check(&mut failures, got == expected, || {
                format!("{}: DI {got:?} not {expected:?}", s.name)
            }),
            (_, got) => failures.push(format!("{}: DI {got:?} is not finite", s.name)),
        }
    }
    // exact fractions behind the rounded values
    let exact = [
        ofi(&reference_scenarios()[0].i, &reference_scenarios()[0].j).unwrap() == r(-1, 18),
        ofi(&reference_scenarios()[1].i, &reference_scenarios()[1].j).unwrap() == r(4, 18),
        ofi(&reference_scenarios()[2].i, &reference_scenarios()[2].j).unwrap() == r(30, 133),
    ];
    check(&mut failures, exact.iter().all(|&x| x), || "exact OFI fractions".into());
    verdict("Reference scenarios A, B, alpha (exact fractions, 2-decimal OFI/DI)", &failures, start.elapsed());
}

#[test]
fn criterion_2_counting_identities() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for n in 1..=60u64 {
        let counts = cell_counts(n, Execution::default()).unwrap();
        let closed = (n + 1) * (n + 2) * (n + 3) / 6;
        check(&mut failures, counts.cardinality == closed, || {
            format!("n={n}: |M(n)| = {} vs {closed}", counts.cardinality)
        });
        check(&mut failures, total_combinations(n) == closed, || format!("n={n}: N(n)"));
        for (cell, row) in counts.by_cell.iter().enumerate() {
            for (x, &seen) in row.iter().enumerate() {
                let want = termial(n - x as u64 + 1);
                check(&mut failures, seen == want && count_value(x as i64, n).unwrap() == want, || {
                    format!("n={n} cell={cell} x={x}: counted {seen}, (n-x+1)? = {want}")
                });
            }
        }
    }
    let elapsed = start.elapsed();
    check(&mut failures, elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"));
    verdict("Counting identities, n = 1..60 (< 30 s)", &failures, elapsed);
}

#[test]
#[allow(clippy::approx_constant)]
fn criterion_3_moment_identities() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for n in 1..=40u64 {
        let (mean, variance) = marginal_benefit_moments(n, Execution::default()).unwrap();
        let want = r(n as i128 + 4, 10 * n as i128);
        check(&mut failures, mean.is_zero(), || format!("n={n}: mean {mean}"));
        check(&mut failures, variance == want, || format!("n={n}: variance {variance} vs {want}"));
        check(&mut failures, b_stats(n).unwrap().variance == want, || {
            format!("n={n}: closed-form variance")
        });
    }
    let one = b_stats(1).unwrap();
    check(&mut failures, one.variance == r(1, 2), || format!("n=1 variance {}", one.variance));
    check(&mut failures, (one.std - 0.70711).abs() < 1e-5, || format!("n=1 std {}", one.std));
    verdict("Moment identities, n = 1..40 (mean 0, variance (n+4)/(10n))", &failures, start.elapsed());
}

#[test]
fn criterion_4_convergence() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let std = b_stats(1_000_000).unwrap().std;
    let limit = 1.0 / 10f64.sqrt();
    check(&mut failures, (limiting_std() - limit).abs() < 1e-15, || "limit constant".into());
    check(&mut failures, (std - limit).abs() < 1e-5, || {
        format!("std(10^6) = {std}, 1/sqrt(10) = {limit}")
    });
    check(&mut failures, (limit - 0.316228).abs() < 1e-6, || format!("1/sqrt(10) = {limit}"));
    verdict("Convergence of std to 1/sqrt(10) within 1e-5 at n = 10^6", &failures, start.elapsed());
}

#[test]
fn criterion_5_distribution_properties() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for n in 1..=200u64 {
        let dist = marginal_benefit_distribution(n, Execution::default()).unwrap();
        check(&mut failures, dist.total() == total_combinations(n), || format!("n={n}: total"));
        check(&mut failures, dist.is_symmetric(), || format!("n={n}: asymmetric"));
        check(&mut failures, dist.unique_mode() == Some(Rational::zero()), || {
            format!("n={n}: mode {:?}", dist.unique_mode())
        });
        if n <= 40 {
            let brute = marginal_benefit_histogram(n, Execution::default()).unwrap();
            check(&mut failures, brute.counts == dist.counts, || format!("n={n}: histogram differs"));
        }
    }
    let elapsed = start.elapsed();
    check(&mut failures, elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"));
    verdict("Distribution properties, n <= 200 (< 60 s)", &failures, elapsed);
}

#[test]
fn criterion_6_non_triangularity_witness() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for n in 1..=200u64 {
        let w = non_triangular_witness(n).unwrap();
        check(&mut failures, (w.triangular_std - 1.0 / 6f64.sqrt()).abs() < 1e-15, || {
            format!("n={n}: reference {}", w.triangular_std)
        });
        check(&mut failures, w.distinct_by(0.08), || {
            format!(
                "n={n}: |{:.6} - {:.6}| = {:.6} <= 0.08",
                w.actual_std,
                w.triangular_std,
                w.difference.abs()
            )
        });
    }
    verdict("Non-triangularity: |std - 1/sqrt(6)| > 0.08 for every n <= 200", &failures, start.elapsed());
}

fn confusion() -> impl Strategy<Value = BinaryConfusion> {
    (0u64..1000, 0u64..1000, 0u64..1000, 0u64..1000)
        .prop_filter("non-empty", |(a, b, c, d)| a + b + c + d > 0)
        .prop_map(|(tp, fn_, fp, tn)| BinaryConfusion::new(tp, fn_, fp, tn))
}

#[test]
fn criterion_7_metric_property_suite() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut runner = TestRunner::new(Config {
        cases: 10_000,
        ..Config::default()
    });
    let strategy = (confusion(), confusion(), 1u64..10_000);
    let outcome = runner.run(&strategy, |(a, b, k)| {
        let ab = ofi(&a, &b).unwrap();
        prop_assert!(ab >= r(-2, 1) && ab <= r(2, 1), "OFI {} out of range", ab);
        prop_assert_eq!(ab, -ofi(&b, &a).unwrap(), "antisymmetry");
        prop_assert_eq!(ofi(&a.scaled(k), &b.scaled(k)).unwrap(), ab, "scale invariance");
        if let (DiScore::Finite { value: x }, DiScore::Finite { value: y }) =
            (disparate_impact(&a, &b).unwrap(), disparate_impact(&b, &a).unwrap())
        {
            prop_assert!((x * y).is_one(), "DI reciprocity");
        }
        prop_assert_eq!(marginal_benefit(&a).unwrap().is_zero(), a.fp == a.fn_, "B = 0 iff FP = FN");
        Ok(())
    });
    if let Err(e) = outcome {
        failures.push(e.to_string());
    }
    // the reciprocity branch must actually be exercised
    let finite_pairs = (0..10_000u64)
        .filter(|s| {
            let a = BinaryConfusion::new(s % 7, s % 5, s % 3, 1);
            let b = BinaryConfusion::new(s % 11, 2, s % 2, 3);
            matches!(disparate_impact(&a, &b).unwrap(), DiScore::Finite { .. })
        })
        .count();
    check(&mut failures, finite_pairs > 0, || "no finite DI pairs".into());
    verdict("Metric property suite (10^4 random cases, exact)", &failures, start.elapsed());
}

#[test]
fn criterion_8_pipeline_round_trip() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let dir = tempfile::tempdir().unwrap();
    let run = |flip: bool, tag: &str| {
        let report_path = dir.path().join(format!("{tag}.json"));
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_ofi"));
        cmd.arg("audit")
            .arg("--input")
            .arg(fixture("scenario_a.csv"))
            .arg("--out-report")
            .arg(&report_path)
            .arg("--out-heatmap-ofi")
            .arg(dir.path().join(format!("{tag}_ofi.svg")))
            .arg("--out-heatmap-di")
            .arg(dir.path().join(format!("{tag}_di.svg")))
            .arg("--out-grid-csv")
            .arg(dir.path().join(format!("{tag}.csv")));
        if flip {
            cmd.arg("--flip");
        }
        let status = cmd.status().unwrap();
        assert!(status.success(), "audit exited with {status}");
        parse_report(&std::fs::read_to_string(report_path).unwrap()).unwrap()
    };

    let plain = run(false, "plain");
    let flipped = run(true, "flipped");

    let table = GroupTable::from_groups([
        ("i", BinaryConfusion::new(1, 0, 0, 5)),
        ("j", BinaryConfusion::new(7, 0, 1, 10)),
    ])
    .unwrap();
    let ofi_grid = pairwise(&table, Metric::Ofi, None, Execution::Sequential).unwrap();
    let di_grid = pairwise(&table, Metric::Di, None, Execution::Sequential).unwrap();
    check(&mut failures, plain.summary.record_count == 24, || "record count".into());
    check(&mut failures, plain.ofi == ofi_grid, || "OFI grid differs from scenario-level grid".into());
    check(&mut failures, plain.di == di_grid, || "DI grid differs from scenario-level grid".into());
    let pair = plain.pair("i", "j").unwrap();
    check(&mut failures, to_fixed(&pair.ofi, 2) == "-0.06", || format!("OFI {}", pair.ofi));
    check(&mut failures, pair.di == DiScore::Finite { value: r(3, 8) }, || format!("DI {:?}", pair.di));
    if let Err(e) = plain.check_consistency() {
        failures.push(e);
    }

    for (g, f) in plain.summary.groups.iter().zip(&flipped.summary.groups) {
        check(&mut failures, g.group == f.group && f.marginal_benefit == -g.marginal_benefit, || {
            format!("group {}: flipped B {} vs {}", g.group, f.marginal_benefit, g.marginal_benefit)
        });
    }
    for name in ["plain_ofi.svg", "plain_di.svg", "plain_ofi.csv", "plain_di.csv"] {
        check(&mut failures, dir.path().join(name).exists(), || format!("{name} not written"));
    }
    verdict("Pipeline round trip on the 24-record Scenario A fixture", &failures, start.elapsed());
}
