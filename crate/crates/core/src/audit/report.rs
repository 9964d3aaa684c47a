//! JSON form of an [`AuditReport`].
//!
//! Field order follows the struct definitions, so output is stable across
//! runs. Exact values are written as `{"num", "den", "approx"}` and read
//! back from `num`/`den` alone.

use super::AuditReport;
use crate::error::Result;

pub fn serialize_report(report: &AuditReport) -> Result<String> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    Ok(text)
}

pub fn parse_report(text: &str) -> Result<AuditReport> {
    Ok(serde_json::from_str(text)?)
}
