//! Reading labelled predictions and aggregating them into per-group
//! confusion matrices.

use std::collections::BTreeMap;
use std::io::Read;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::metrics::BinaryConfusion;

/// One individual's group, true label and predicted label.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PredictionRecord {
    pub group_id: String,
    pub label: bool,
    pub prediction: bool,
}

impl PredictionRecord {
    pub fn new(group_id: impl Into<String>, label: bool, prediction: bool) -> Self {
        PredictionRecord {
            group_id: group_id.into(),
            label,
            prediction,
        }
    }

    fn as_confusion(&self) -> BinaryConfusion {
        match (self.label, self.prediction) {
            (true, true) => BinaryConfusion::new(1, 0, 0, 0),
            (true, false) => BinaryConfusion::new(0, 1, 0, 0),
            (false, true) => BinaryConfusion::new(0, 0, 1, 0),
            (false, false) => BinaryConfusion::new(0, 0, 0, 1),
        }
    }
}

/// Which columns hold the group, the label and the prediction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    pub group_col: String,
    pub label_col: String,
    pub pred_col: String,
    pub delimiter: u8,
}

impl Schema {
    pub fn new(
        group_col: impl Into<String>,
        label_col: impl Into<String>,
        pred_col: impl Into<String>,
    ) -> Self {
        Schema {
            group_col: group_col.into(),
            label_col: label_col.into(),
            pred_col: pred_col.into(),
            delimiter: b',',
        }
    }

    pub fn with_delimiter(mut self, delimiter: u8) -> Self {
        self.delimiter = delimiter;
        self
    }
}

/// Parses delimiter-separated text with a header row.
///
/// Label and prediction cells must be `0` or `1` after trimming; anything
/// else fails with the 1-based data row number.
pub fn parse_records<R: Read>(source: R, schema: &Schema) -> Result<Vec<PredictionRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(schema.delimiter)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(source);

    let headers = reader.headers()?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    };
    let group_idx = column(&schema.group_col)?;
    let label_idx = column(&schema.label_col)?;
    let pred_idx = column(&schema.pred_col)?;

    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row_no = i + 1;
        let row = row?;
        let field = |idx: usize, name: &str| {
            row.get(idx).ok_or_else(|| Error::Row {
                row: row_no,
                message: format!("missing value for column `{name}`"),
            })
        };
        let group = field(group_idx, &schema.group_col)?;
        if group.is_empty() {
            return Err(Error::Row {
                row: row_no,
                message: format!("empty group in column `{}`", schema.group_col),
            });
        }
        let label = parse_binary(field(label_idx, &schema.label_col)?, &schema.label_col, row_no)?;
        let prediction = parse_binary(field(pred_idx, &schema.pred_col)?, &schema.pred_col, row_no)?;
        records.push(PredictionRecord::new(group, label, prediction));
    }
    if records.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(records)
}

fn parse_binary(value: &str, column: &str, row: usize) -> Result<bool> {
    match value {
        "0" => Ok(false),
        "1" => Ok(true),
        other => Err(Error::Row {
            row,
            message: format!("column `{column}` has non-binary value `{other}`"),
        }),
    }
}

/// Complements label and prediction, so the other class becomes the
/// beneficial one.
pub fn flip_polarity(records: &[PredictionRecord]) -> Vec<PredictionRecord> {
    records
        .iter()
        .map(|r| PredictionRecord::new(r.group_id.clone(), !r.label, !r.prediction))
        .collect()
}

/// Uniform sample of `size` records without replacement, in input order.
pub fn sample_records(
    records: &[PredictionRecord],
    size: usize,
    seed: u64,
) -> Result<Vec<PredictionRecord>> {
    if size > records.len() {
        return Err(Error::Config(format!(
            "sample size {size} exceeds record count {}",
            records.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = rand::seq::index::sample(&mut rng, records.len(), size).into_vec();
    picked.sort_unstable();
    Ok(picked.into_iter().map(|i| records[i].clone()).collect())
}

/// Per-group confusion matrices and their cell-wise total.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupTable {
    pub groups: BTreeMap<String, BinaryConfusion>,
    pub total: BinaryConfusion,
}

impl GroupTable {
    /// Builds a table from explicit matrices; every group must be non-empty.
    pub fn from_groups<I, S>(groups: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, BinaryConfusion)>,
        S: Into<String>,
    {
        let mut table = GroupTable {
            groups: BTreeMap::new(),
            total: BinaryConfusion::default(),
        };
        for (name, cm) in groups {
            let name = name.into();
            if cm.n() == 0 {
                return Err(Error::EmptyGroup(name));
            }
            table.add(name, cm);
        }
        Ok(table)
    }

    fn add(&mut self, group: String, cm: BinaryConfusion) {
        *self.groups.entry(group).or_default() += cm;
        self.total += cm;
    }

    fn merge(mut self, other: GroupTable) -> GroupTable {
        for (group, cm) in other.groups {
            self.add(group, cm);
        }
        self
    }

    pub fn get(&self, group: &str) -> Result<&BinaryConfusion> {
        self.groups
            .get(group)
            .ok_or_else(|| Error::UnknownGroup(group.to_string()))
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn record_count(&self) -> u64 {
        self.total.n()
    }
}

/// Counts TP/FN/FP/TN per group.
pub fn aggregate(records: &[PredictionRecord]) -> Result<GroupTable> {
    aggregate_with(records, Execution::Sequential)
}

/// [`aggregate`] sharded over record chunks and merged cell-wise.
pub fn aggregate_with(records: &[PredictionRecord], exec: Execution) -> Result<GroupTable> {
    if records.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let chunks: Vec<&[PredictionRecord]> = records.chunks(4096).collect();
    let partials = exec.map_collect(&chunks, |chunk| {
        let mut table = GroupTable {
            groups: BTreeMap::new(),
            total: BinaryConfusion::default(),
        };
        for r in chunk.iter() {
            table.add(r.group_id.clone(), r.as_confusion());
        }
        table
    });
    Ok(partials
        .into_iter()
        .reduce(GroupTable::merge)
        .expect("at least one chunk"))
}
