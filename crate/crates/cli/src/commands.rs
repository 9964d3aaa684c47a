//! The four subcommands. Each writes its human-readable output to `out` and
//! returns `Ok(true)` when everything requested succeeded.

use std::fs::{self, File};
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use ofi_core::audit::{
    build_report, diagnose, render_heatmap, serialize_report, AuditConfig, AuditReport,
    HeatmapStyle, PairwiseMatrix,
};
use ofi_core::combinatorics::{
    b_stats, marginal_benefit_distribution, non_triangular_witness, triangular_reference_std,
};
use ofi_core::ingestion::{aggregate_with, flip_polarity, parse_records, sample_records, Schema};
use ofi_core::metrics::{
    benefit, disparate_impact, expected_benefit, marginal_benefit, ofi, ofi_verdict,
    BinaryConfusion, DiBand, DiScore,
};
use ofi_core::rational::{parse_rational, to_fixed, to_fraction};
use ofi_core::verify::{check_range, verify_range};
use ofi_core::{Execution, Rational};

use crate::args::{AuditArgs, DistArgs, ScenarioArgs, Thresholds, VerifyArgs};

fn exact(value: &Rational) -> String {
    format!("{} ({})", to_fraction(value), to_fixed(value, 2))
}

fn exact_di(di: &DiScore) -> String {
    match di {
        DiScore::Finite { value } => exact(value),
        DiScore::UndefinedZeroDenominator => "undefined (zero denominator)".into(),
        DiScore::UndefinedContextualOne => "undefined, 1 by context (1.00)".into(),
    }
}

impl Thresholds {
    pub fn resolve(&self) -> Result<(Rational, DiBand)> {
        let threshold = parse_rational(&self.ofi_threshold).context("--ofi-threshold")?;
        if threshold <= Rational::from_integer(0) {
            bail!("--ofi-threshold must be positive, got {}", self.ofi_threshold);
        }
        let low = parse_rational(&self.di_low).context("--di-low")?;
        let high = parse_rational(&self.di_high).context("--di-high")?;
        let band = DiBand::new(low, high).context("--di-low/--di-high")?;
        Ok((threshold, band))
    }
}

/// Paths derived from `--out-grid-csv`: `<stem>_ofi.csv`, `<stem>_di.csv`.
pub fn grid_csv_paths(base: &Path) -> (PathBuf, PathBuf) {
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "grid".into());
    let ext = base
        .extension()
        .map(|e| e.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".into());
    (
        base.with_file_name(format!("{stem}_ofi.{ext}")),
        base.with_file_name(format!("{stem}_di.{ext}")),
    )
}

fn read_input(input: Option<&Path>) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    match input {
        None => io::stdin().read_to_end(&mut buf).map(|_| ())?,
        Some(p) if p.as_os_str() == "-" => io::stdin().read_to_end(&mut buf).map(|_| ())?,
        Some(p) => File::open(p)
            .and_then(|mut f| f.read_to_end(&mut buf))
            .map(|_| ())
            .with_context(|| format!("cannot read {}", p.display()))?,
    }
    Ok(buf)
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn write_grid_csv(grid: &PairwiseMatrix, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    grid.write_csv(&mut buf)?;
    write_file(path, &buf)
}

/// Builds the audit report from raw input. Errors carry the failing stage.
pub fn audit_report(args: &AuditArgs, input: &[u8], exec: Execution) -> Result<AuditReport> {
    let (ofi_threshold, di_band) = args.thresholds.resolve().context("[config]")?;
    let delimiter = u8::try_from(args.delimiter)
        .ok()
        .filter(u8::is_ascii)
        .context("[config] --delimiter must be a single ASCII character")?;
    let schema = Schema::new(&args.group_col, &args.label_col, &args.pred_col)
        .with_delimiter(delimiter);

    let mut records = parse_records(input, &schema).context("[parse]")?;
    if args.flip {
        records = flip_polarity(&records);
    }
    if let Some(size) = args.sample {
        let seed = args.seed.context("[sample] --sample requires --seed")?;
        records = sample_records(&records, size, seed).context("[sample]")?;
    }
    let table = aggregate_with(&records, exec).context("[aggregate]")?;
    let config = AuditConfig {
        ofi_threshold,
        di_band,
        group_order: args.group_order.clone(),
    };
    build_report(&table, &config, exec).context("[report]")
}

pub fn cmd_audit(args: &AuditArgs, exec: Execution, out: &mut dyn Write) -> Result<bool> {
    let input = read_input(args.input.as_deref()).context("[read]")?;
    let report = audit_report(args, &input, exec)?;
    let json = serialize_report(&report).context("[report]")?;

    let style = HeatmapStyle::default();
    if let Some(path) = &args.out_heatmap_ofi {
        let svg = render_heatmap(&report.ofi, &style).context("[render]")?;
        write_file(path, svg.as_bytes()).context("[write]")?;
    }
    if let Some(path) = &args.out_heatmap_di {
        let svg = render_heatmap(&report.di, &style).context("[render]")?;
        write_file(path, svg.as_bytes()).context("[write]")?;
    }
    if let Some(base) = &args.out_grid_csv {
        let (ofi_path, di_path) = grid_csv_paths(base);
        write_grid_csv(&report.ofi, &ofi_path).context("[write]")?;
        write_grid_csv(&report.di, &di_path).context("[write]")?;
    }
    match &args.out_report {
        Some(path) => {
            write_file(path, json.as_bytes()).context("[write]")?;
            print_audit_summary(&report, out)?;
        }
        None => out.write_all(json.as_bytes())?,
    }
    Ok(true)
}

fn print_audit_summary(report: &AuditReport, out: &mut dyn Write) -> Result<()> {
    writeln!(
        out,
        "records: {}  groups: {}  OFI threshold: {}  DI band: [{}, {}]",
        report.summary.record_count,
        report.summary.groups.len(),
        to_fraction(&report.config.ofi_threshold),
        to_fraction(&report.config.di_band.low),
        to_fraction(&report.config.di_band.high),
    )?;
    for g in &report.summary.groups {
        writeln!(
            out,
            "  {:<24} n={:<6} b={}  E[b]={}  B={}",
            g.group,
            g.n,
            exact(&g.benefit),
            exact(&g.expected_benefit),
            exact(&g.marginal_benefit)
        )?;
    }
    for p in &report.pairs {
        writeln!(
            out,
            "  {} vs {}: OFI={}  DI={}  -> {}",
            p.first,
            p.second,
            exact(&p.ofi),
            exact_di(&p.di),
            p.diagnosis
        )?;
    }
    Ok(())
}

fn scenario_matrix(cells: &[i64], name: &str) -> Result<BinaryConfusion> {
    let mut counts = [0u64; 4];
    for (slot, &value) in counts.iter_mut().zip(cells) {
        *slot = u64::try_from(value)
            .with_context(|| format!("group {name}: cell value {value} is negative"))?;
    }
    let cm = BinaryConfusion::new(counts[0], counts[1], counts[2], counts[3]);
    if cm.n() == 0 {
        bail!("group {name} is empty (all cells are zero)");
    }
    Ok(cm)
}

pub fn cmd_scenario(args: &ScenarioArgs, out: &mut dyn Write) -> Result<bool> {
    if args.cells.len() != 8 {
        bail!("expected 8 cell values, got {}", args.cells.len());
    }
    let (threshold, band) = args.thresholds.resolve()?;
    let cm_i = scenario_matrix(&args.cells[..4], "i")?;
    let cm_j = scenario_matrix(&args.cells[4..], "j")?;

    for (name, cm) in [("i", &cm_i), ("j", &cm_j)] {
        writeln!(out, "group {name}: {cm} (n={})", cm.n())?;
        writeln!(
            out,
            "  b = {}   E[b] = {}   B = {}",
            exact(&benefit(cm)?),
            exact(&expected_benefit(cm)?),
            exact(&marginal_benefit(cm)?)
        )?;
    }
    let ofi_value = ofi(&cm_i, &cm_j)?;
    let di = disparate_impact(&cm_i, &cm_j)?;
    let ofi_v = ofi_verdict(&ofi_value, &threshold)?;
    let di_v = band.verdict(&di);
    writeln!(
        out,
        "OFI(i, j) = {}   verdict: {} (threshold {})",
        exact(&ofi_value),
        ofi_v,
        to_fraction(&threshold)
    )?;
    writeln!(
        out,
        "DI(i, j)  = {}   verdict: {} (band [{}, {}])",
        exact_di(&di),
        di_v,
        to_fraction(&band.low),
        to_fraction(&band.high)
    )?;
    writeln!(out, "diagnosis: {}", diagnose(&ofi_value, &threshold, di_v))?;
    Ok(true)
}

pub fn cmd_dist(args: &DistArgs, exec: Execution, out: &mut dyn Write) -> Result<bool> {
    if args.n == 0 {
        bail!("--n must be at least 1");
    }
    let dist = marginal_benefit_distribution(args.n, exec)?;
    let stats = b_stats(args.n)?;
    let witness = non_triangular_witness(args.n)?;

    let mut csv_buf = Vec::new();
    {
        let mut w = BufWriter::new(&mut csv_buf);
        writeln!(w, "score_numerator,score_denominator,multiplicity")?;
        for (score, m) in &dist.counts {
            writeln!(w, "{},{},{}", score.numer(), score.denom(), m)?;
        }
    }
    let mode = dist
        .unique_mode()
        .map(|m| to_fraction(&m))
        .unwrap_or_else(|| "none".into());
    let summary = format!(
        "n={} matrices={} mean={} variance={} ({:.6}) std={:.6} mode={} triangular_std={:.6} std_difference={:+.6}",
        args.n,
        dist.total(),
        to_fraction(&stats.mean),
        to_fraction(&stats.variance),
        stats.std * stats.std,
        stats.std,
        mode,
        triangular_reference_std(),
        witness.difference,
    );
    match &args.out_csv {
        Some(path) => {
            write_file(path, &csv_buf)?;
            writeln!(out, "{summary}")?;
        }
        None => {
            out.write_all(&csv_buf)?;
            writeln!(out, "# {summary}")?;
        }
    }
    Ok(true)
}

pub fn cmd_verify(args: &VerifyArgs, exec: Execution, out: &mut dyn Write) -> Result<bool> {
    check_range(args.n_min, args.n_max).context("refusing to verify")?;
    let report = verify_range(args.n_min, args.n_max, exec)?;
    writeln!(out, "verifying n = {}..={}", report.n_min, report.n_max)?;
    for check in &report.checks {
        match &check.failure {
            None => writeln!(out, "PASS  {} ({} values of n)", check.name, check.checked)?,
            Some(why) => writeln!(out, "FAIL  {}: {}", check.name, why)?,
        }
    }
    let passed = report.all_passed();
    writeln!(out, "{}", if passed { "all identities hold" } else { "some identities FAILED" })?;
    Ok(passed)
}
