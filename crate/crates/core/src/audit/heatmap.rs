//! Standalone SVG heatmaps for pairwise grids.

use std::fmt::Write;

use num_traits::ToPrimitive;

use super::{Cell, Metric, PairwiseMatrix};
use crate::error::{Error, Result};
use crate::metrics::DiScore;
use crate::rational::{to_fixed, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Color(pub u8, pub u8, pub u8);

impl Color {
    pub fn hex(&self) -> String {
        format!("#{:02x}{:02x}{:02x}", self.0, self.1, self.2)
    }

    fn lerp(self, other: Color, t: f64) -> Color {
        let mix = |a: u8, b: u8| (a as f64 + (b as f64 - a as f64) * t).round() as u8;
        Color(mix(self.0, other.0), mix(self.1, other.1), mix(self.2, other.2))
    }
}

/// Three-stop diverging palette.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Palette {
    pub low: Color,
    pub center: Color,
    pub high: Color,
}

impl Default for Palette {
    fn default() -> Self {
        Palette {
            low: Color(0x3b, 0x4c, 0xc0),
            center: Color(0xf7, 0xf7, 0xf7),
            high: Color(0xb4, 0x04, 0x26),
        }
    }
}

impl Palette {
    /// `position` in `[-1, 1]`, 0 mapping to the center colour.
    pub fn at(&self, position: f64) -> Color {
        let t = position.clamp(-1.0, 1.0);
        if t >= 0.0 {
            self.center.lerp(self.high, t)
        } else {
            self.center.lerp(self.low, -t)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeatmapStyle {
    pub palette: Palette,
    pub decimals: u32,
    pub cell_size: u32,
    pub font_size: u32,
}

impl Default for HeatmapStyle {
    fn default() -> Self {
        HeatmapStyle {
            palette: Palette::default(),
            decimals: 2,
            cell_size: 64,
            font_size: 13,
        }
    }
}

/// Palette position of a value: OFI is clamped to [-2, 2] around 0, DI to
/// [0, 2] around 1.
fn position(metric: Metric, value: f64) -> f64 {
    match metric {
        Metric::Ofi => value.clamp(-2.0, 2.0) / 2.0,
        Metric::Di => value.clamp(0.0, 2.0) - 1.0,
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Renders the grid as a self-contained SVG document.
///
/// Each pair gets one `rect.cell` with its value overlaid; undefined DI
/// cells use a hatch pattern and the text `undef`, and a DI of 1 assigned
/// by context is marked `1.00*`.
pub fn render_heatmap(matrix: &PairwiseMatrix, style: &HeatmapStyle) -> Result<String> {
    if matrix.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    matrix.validate().map_err(Error::Config)?;

    let k = matrix.len() as u32;
    let cell = style.cell_size;
    let longest = matrix
        .group_order
        .iter()
        .map(|g| g.chars().count() as u32)
        .max()
        .unwrap_or(0);
    let label_space = 16 + longest * style.font_size * 6 / 10;
    let left = label_space;
    let top = label_space + 24;
    let width = left + k * cell + 16;
    let height = top + k * cell + 40;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="{}">"#,
        style.font_size
    );
    let _ = writeln!(
        svg,
        r##"<defs><pattern id="undef-hatch" patternUnits="userSpaceOnUse" width="8" height="8" patternTransform="rotate(45)"><rect width="8" height="8" fill="#ffffff"/><line x1="0" y1="0" x2="0" y2="8" stroke="#888888" stroke-width="3"/></pattern></defs>"##
    );
    let _ = writeln!(
        svg,
        r#"<text class="title" x="{}" y="18" text-anchor="middle" font-weight="bold">{} (row vs column)</text>"#,
        width / 2,
        matrix.metric
    );

    for (idx, group) in matrix.group_order.iter().enumerate() {
        let idx = idx as u32;
        let name = escape(group);
        let _ = writeln!(
            svg,
            r#"<text class="axis-label row-label" x="{}" y="{}" text-anchor="end" dominant-baseline="middle">{name}</text>"#,
            left - 6,
            top + idx * cell + cell / 2
        );
        let cx = left + idx * cell + cell / 2;
        let cy = top - 6;
        let _ = writeln!(
            svg,
            r#"<text class="axis-label col-label" x="{cx}" y="{cy}" text-anchor="start" transform="rotate(-45 {cx} {cy})">{name}</text>"#
        );
    }

    for (i, row) in matrix.cells.iter().enumerate() {
        for (j, value) in row.iter().enumerate() {
            let x = left + j as u32 * cell;
            let y = top + i as u32 * cell;
            let (fill, text) = match value {
                Cell::Di(DiScore::UndefinedZeroDenominator) => {
                    ("url(#undef-hatch)".to_string(), "undef".to_string())
                }
                Cell::Di(DiScore::UndefinedContextualOne) => (
                    style.palette.at(0.0).hex(),
                    format!("{}*", to_fixed(&Rational::from_integer(1), style.decimals)),
                ),
                Cell::Ofi(v) | Cell::Di(DiScore::Finite { value: v }) => {
                    let approx = v.to_f64().unwrap_or(0.0);
                    (
                        style.palette.at(position(matrix.metric, approx)).hex(),
                        to_fixed(v, style.decimals),
                    )
                }
            };
            let _ = writeln!(
                svg,
                r##"<rect class="cell" x="{x}" y="{y}" width="{cell}" height="{cell}" fill="{fill}" stroke="#ffffff" stroke-width="1"><title>{} vs {}: {text}</title></rect>"##,
                escape(&matrix.group_order[i]),
                escape(&matrix.group_order[j]),
            );
            let _ = writeln!(
                svg,
                r#"<text class="value" x="{}" y="{}" text-anchor="middle" dominant-baseline="middle">{text}</text>"#,
                x + cell / 2,
                y + cell / 2
            );
        }
    }

    let note = match matrix.metric {
        Metric::Ofi => "centered at 0, scale [-2, 2]",
        Metric::Di => "centered at 1, scale [0, 2]; undef = zero denominator, * = 1 by context",
    };
    let _ = writeln!(
        svg,
        r#"<text class="note" x="{}" y="{}" font-size="{}">{note}</text>"#,
        8,
        height - 12,
        style.font_size.saturating_sub(3).max(8)
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}
