//! Pairwise OFI / DI grids over every group pair, verdicts and the combined
//! diagnosis, plus report, CSV and heatmap output.

mod heatmap;
mod report;

pub use heatmap::{render_heatmap, Color, HeatmapStyle, Palette};
pub use report::{parse_report, serialize_report};

use std::fmt;
use std::io::Write;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::ingestion::GroupTable;
use crate::metrics::{
    self, benefit, disparate_impact, expected_benefit, marginal_benefit, BiasVerdict,
    BinaryConfusion, DiBand, DiScore,
};
use crate::rational::{exact_serde, to_fraction, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Ofi,
    Di,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Ofi => "OFI",
            Metric::Di => "DI",
        })
    }
}

/// One grid cell: an exact OFI value or a DI score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Ofi(#[serde(with = "exact_serde")] Rational),
    Di(DiScore),
}

impl Cell {
    /// Value used for display and colouring; `None` for an undefined DI.
    pub fn value(&self) -> Option<Rational> {
        match self {
            Cell::Ofi(v) => Some(*v),
            Cell::Di(di) => di.value(),
        }
    }

    fn csv_text(&self) -> String {
        match self {
            Cell::Ofi(v) | Cell::Di(DiScore::Finite { value: v }) => to_fraction(v),
            Cell::Di(DiScore::UndefinedZeroDenominator) => "undefined_zero_denominator".into(),
            Cell::Di(DiScore::UndefinedContextualOne) => "undefined_contextual_one".into(),
        }
    }
}

/// Square grid where `cells[i][j]` is the metric of group `i` against
/// group `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairwiseMatrix {
    pub group_order: Vec<String>,
    pub metric: Metric,
    pub cells: Vec<Vec<Cell>>,
}

impl PairwiseMatrix {
    pub fn len(&self) -> usize {
        self.group_order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.group_order.is_empty()
    }

    pub fn cell(&self, first: &str, second: &str) -> Result<&Cell> {
        let index = |g: &str| {
            self.group_order
                .iter()
                .position(|x| x == g)
                .ok_or_else(|| Error::UnknownGroup(g.to_string()))
        };
        Ok(&self.cells[index(first)?][index(second)?])
    }

    /// Checks shape and the metric's structural invariants: OFI grids are
    /// antisymmetric with a zero diagonal, DI grids are reciprocal where
    /// both directions are finite.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let k = self.len();
        if self.cells.len() != k || self.cells.iter().any(|row| row.len() != k) {
            return Err(format!("{} grid is not {k}x{k}", self.metric));
        }
        for i in 0..k {
            for j in 0..k {
                let (a, b) = (&self.cells[i][j], &self.cells[j][i]);
                match (self.metric, a, b) {
                    (Metric::Ofi, Cell::Ofi(x), Cell::Ofi(y)) => {
                        if *x != -*y {
                            return Err(format!("OFI not antisymmetric at ({i}, {j})"));
                        }
                    }
                    (Metric::Di, Cell::Di(x), Cell::Di(y)) => {
                        if let (DiScore::Finite { value: x }, DiScore::Finite { value: y }) = (x, y)
                        {
                            if *x * *y != Rational::from_integer(1) {
                                return Err(format!("DI not reciprocal at ({i}, {j})"));
                            }
                        }
                        if i == j
                            && !matches!(x, DiScore::Finite { .. } | DiScore::UndefinedContextualOne)
                        {
                            return Err(format!("DI diagonal undefined at {i}"));
                        }
                    }
                    _ => return Err(format!("cell kind does not match {} at ({i}, {j})", self.metric)),
                }
            }
        }
        Ok(())
    }

    /// CSV with the group order as both header row and first column.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        let mut header = vec![self.metric.to_string()];
        header.extend(self.group_order.iter().cloned());
        writer.write_record(&header)?;
        for (group, row) in self.group_order.iter().zip(&self.cells) {
            let mut record = vec![group.clone()];
            record.extend(row.iter().map(Cell::csv_text));
            writer.write_record(&record)?;
        }
        writer.flush()?;
        Ok(())
    }
}

/// Resolves the group order: lexicographic by default, or the caller's
/// order, which must name at least two distinct known groups.
fn resolve_order(table: &GroupTable, order: Option<&[String]>) -> Result<Vec<String>> {
    let order: Vec<String> = match order {
        None => table.groups.keys().cloned().collect(),
        Some(order) => {
            for (i, g) in order.iter().enumerate() {
                table.get(g)?;
                if order[..i].contains(g) {
                    return Err(Error::Config(format!("group `{g}` listed twice")));
                }
            }
            order.to_vec()
        }
    };
    if order.len() < 2 {
        return Err(Error::InsufficientGroups(order.len()));
    }
    Ok(order)
}

/// Fills the full grid (both directions and the diagonal) for `metric`.
pub fn pairwise(
    table: &GroupTable,
    metric: Metric,
    order: Option<&[String]>,
    exec: Execution,
) -> Result<PairwiseMatrix> {
    let group_order = resolve_order(table, order)?;
    let matrices: Vec<BinaryConfusion> = group_order
        .iter()
        .map(|g| table.get(g).copied())
        .collect::<Result<_>>()?;
    let rows = exec.map_collect(&matrices, |cm_i| {
        matrices
            .iter()
            .map(|cm_j| match metric {
                Metric::Ofi => metrics::ofi(cm_i, cm_j).map(Cell::Ofi),
                Metric::Di => disparate_impact(cm_i, cm_j).map(Cell::Di),
            })
            .collect::<Result<Vec<_>>>()
    });
    let cells = rows.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(PairwiseMatrix {
        group_order,
        metric,
        cells,
    })
}

/// Combined reading of one pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Diagnosis {
    /// |OFI| exceeds the threshold: the decision procedure itself is biased.
    AlgorithmicBias,
    /// OFI within the threshold while DI is flagged: the disparity exists in
    /// the labels, not in the procedure.
    SystemicDisparity,
    NoFinding,
}

impl fmt::Display for Diagnosis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Diagnosis::AlgorithmicBias => "algorithmic bias",
            Diagnosis::SystemicDisparity => "systemic disparity",
            Diagnosis::NoFinding => "no finding",
        })
    }
}

/// An undefined DI verdict never counts as flagged.
pub fn diagnose(ofi: &Rational, threshold: &Rational, di_verdict: BiasVerdict) -> Diagnosis {
    if ofi.abs() > *threshold {
        Diagnosis::AlgorithmicBias
    } else if di_verdict.indicates_bias() {
        Diagnosis::SystemicDisparity
    } else {
        Diagnosis::NoFinding
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditConfig {
    #[serde(with = "exact_serde")]
    pub ofi_threshold: Rational,
    pub di_band: DiBand,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_order: Option<Vec<String>>,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            ofi_threshold: metrics::default_ofi_threshold(),
            di_band: DiBand::four_fifths(),
            group_order: None,
        }
    }
}

impl AuditConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.ofi_threshold.is_positive() {
            return Err(Error::NonPositiveThreshold("OFI threshold"));
        }
        DiBand::new(self.di_band.low, self.di_band.high)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub group: String,
    pub n: u64,
    pub confusion: BinaryConfusion,
    #[serde(with = "exact_serde")]
    pub benefit: Rational,
    #[serde(with = "exact_serde")]
    pub expected_benefit: Rational,
    #[serde(with = "exact_serde")]
    pub marginal_benefit: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub record_count: u64,
    pub groups: Vec<GroupSummary>,
}

/// Verdicts for one ordered pair `(first, second)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairFinding {
    pub first: String,
    pub second: String,
    #[serde(with = "exact_serde")]
    pub ofi: Rational,
    pub di: DiScore,
    pub ofi_verdict: BiasVerdict,
    pub di_verdict: BiasVerdict,
    pub diagnosis: Diagnosis,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub config: AuditConfig,
    pub summary: DatasetSummary,
    pub ofi: PairwiseMatrix,
    pub di: PairwiseMatrix,
    pub pairs: Vec<PairFinding>,
}

pub fn build_report(table: &GroupTable, config: &AuditConfig, exec: Execution) -> Result<AuditReport> {
    config.validate()?;
    let order = config.group_order.as_deref();
    let ofi_grid = pairwise(table, Metric::Ofi, order, exec)?;
    let di_grid = pairwise(table, Metric::Di, order, exec)?;

    let groups = table
        .groups
        .iter()
        .map(|(group, cm)| {
            Ok(GroupSummary {
                group: group.clone(),
                n: cm.n(),
                confusion: *cm,
                benefit: benefit(cm)?,
                expected_benefit: expected_benefit(cm)?,
                marginal_benefit: marginal_benefit(cm)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut pairs = Vec::new();
    for (i, first) in ofi_grid.group_order.iter().enumerate() {
        for (j, second) in ofi_grid.group_order.iter().enumerate() {
            if i == j {
                continue;
            }
            let (Cell::Ofi(ofi), Cell::Di(di)) = (ofi_grid.cells[i][j], di_grid.cells[i][j]) else {
                unreachable!("grids are built per metric");
            };
            pairs.push(finding(first, second, ofi, di, config)?);
        }
    }

    Ok(AuditReport {
        config: config.clone(),
        summary: DatasetSummary {
            record_count: table.record_count(),
            groups,
        },
        ofi: ofi_grid,
        di: di_grid,
        pairs,
    })
}

fn finding(
    first: &str,
    second: &str,
    ofi: Rational,
    di: DiScore,
    config: &AuditConfig,
) -> Result<PairFinding> {
    let ofi_verdict = metrics::ofi_verdict(&ofi, &config.ofi_threshold)?;
    let di_verdict = config.di_band.verdict(&di);
    Ok(PairFinding {
        first: first.to_string(),
        second: second.to_string(),
        ofi,
        di,
        ofi_verdict,
        di_verdict,
        diagnosis: diagnose(&ofi, &config.ofi_threshold, di_verdict),
    })
}

impl AuditReport {
    /// Re-derives every verdict from the grids and recorded configuration
    /// and checks the grid invariants.
    pub fn check_consistency(&self) -> std::result::Result<(), String> {
        self.ofi.validate()?;
        self.di.validate()?;
        if self.ofi.group_order != self.di.group_order {
            return Err("OFI and DI grids use different group orders".into());
        }
        let k = self.ofi.len();
        if self.pairs.len() != k * (k - 1) {
            return Err(format!("expected {} pairs, found {}", k * (k - 1), self.pairs.len()));
        }
        for pair in &self.pairs {
            let ofi = self.ofi.cell(&pair.first, &pair.second).map_err(|e| e.to_string())?;
            let di = self.di.cell(&pair.first, &pair.second).map_err(|e| e.to_string())?;
            let (Cell::Ofi(ofi), Cell::Di(di)) = (ofi, di) else {
                return Err("cell kinds do not match metrics".into());
            };
            let expected = finding(&pair.first, &pair.second, *ofi, *di, &self.config)
                .map_err(|e| e.to_string())?;
            if &expected != pair {
                return Err(format!("pair {} / {} disagrees with its grid cells", pair.first, pair.second));
            }
        }
        Ok(())
    }

    pub fn pair(&self, first: &str, second: &str) -> Option<&PairFinding> {
        self.pairs
            .iter()
            .find(|p| p.first == first && p.second == second)
    }
}
