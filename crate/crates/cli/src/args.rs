use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Bias auditing with the Objective Fairness Index and disparate impact.
#[derive(Debug, Parser)]
#[command(name = "ofi", version, about)]
pub struct Cli {
    /// Worker threads for the parallel loops; defaults to the available
    /// parallelism. 1 runs everything sequentially.
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// Audit a labelled-prediction dataset across all group pairs.
    Audit(AuditArgs),
    /// Compare two confusion matrices given inline.
    Scenario(ScenarioArgs),
    /// Distribution of marginal benefit over every confusion matrix of size n.
    Dist(DistArgs),
    /// Check the counting and moment identities against full enumeration.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Thresholds {
    /// OFI values outside [-t, t] are flagged. Accepts decimals or fractions.
    #[arg(long, default_value = "3/10")]
    pub ofi_threshold: String,

    /// Lower edge of the DI acceptance band.
    #[arg(long, default_value = "4/5")]
    pub di_low: String,

    /// Upper edge of the DI acceptance band.
    #[arg(long, default_value = "5/4")]
    pub di_high: String,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    /// Delimited text with a header row; `-` or omitted reads standard input.
    #[arg(long)]
    pub input: Option<PathBuf>,

    #[arg(long, default_value = "group")]
    pub group_col: String,

    #[arg(long, default_value = "label")]
    pub label_col: String,

    #[arg(long, default_value = "prediction")]
    pub pred_col: String,

    /// Single-byte field delimiter.
    #[arg(long, default_value = ",")]
    pub delimiter: char,

    /// Treat the 0 class as the beneficial outcome.
    #[arg(long)]
    pub flip: bool,

    #[command(flatten)]
    pub thresholds: Thresholds,

    /// Comma-separated group order for the grids (default: lexicographic).
    #[arg(long, value_delimiter = ',')]
    pub group_order: Option<Vec<String>>,

    /// Report JSON path; the report goes to standard output when omitted.
    #[arg(long)]
    pub out_report: Option<PathBuf>,

    #[arg(long)]
    pub out_heatmap_ofi: Option<PathBuf>,

    #[arg(long)]
    pub out_heatmap_di: Option<PathBuf>,

    /// Grid CSV path; `<stem>_ofi.csv` and `<stem>_di.csv` are written
    /// next to it.
    #[arg(long)]
    pub out_grid_csv: Option<PathBuf>,

    /// Audit a uniform sample of this many records (requires --seed).
    #[arg(long, requires = "seed")]
    pub sample: Option<usize>,

    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    /// TP FN FP TN of group i followed by TP FN FP TN of group j.
    #[arg(num_args = 8, value_names = ["TP_I", "FN_I", "FP_I", "TN_I", "TP_J", "FN_J", "FP_J", "TN_J"], allow_negative_numbers = true, required = true)]
    pub cells: Vec<i64>,

    #[command(flatten)]
    pub thresholds: Thresholds,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    #[arg(long)]
    pub n: u64,

    /// Write the distribution CSV here instead of standard output.
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 1)]
    pub n_min: u64,

    #[arg(long, default_value_t = 40)]
    pub n_max: u64,
}
