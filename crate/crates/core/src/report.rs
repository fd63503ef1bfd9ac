//! Rendering of score breakdowns as JSON, CSV or Markdown. Output is
//! deterministic: same inputs, same bytes.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{ScoreBreakdown, SensitivityFinding};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
    Markdown,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown report format `{0}` (expected json, csv or md)")]
pub struct UnknownFormat(pub String);

impl FromStr for ReportFormat {
    type Err = UnknownFormat;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "md" | "markdown" => Ok(ReportFormat::Markdown),
            _ => Err(UnknownFormat(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportDocument {
    pub format: ReportFormat,
    pub body: String,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    #[serde(flatten)]
    breakdown: &'a ScoreBreakdown,
    sensitivity: &'a [SensitivityFinding],
}

#[derive(Deserialize)]
struct JsonReportOwned {
    #[serde(flatten)]
    breakdown: ScoreBreakdown,
    #[serde(default)]
    sensitivity: Vec<SensitivityFinding>,
}

/// Renders a breakdown and its sensitivity findings.
///
/// The JSON form is the breakdown object with an extra `sensitivity` array;
/// it parses straight back into a [`ScoreBreakdown`].
pub fn render_report(
    breakdown: &ScoreBreakdown,
    sensitivity: &[SensitivityFinding],
    format: ReportFormat,
) -> ReportDocument {
    let body = match format {
        ReportFormat::Json => {
            let mut text = serde_json::to_string_pretty(&JsonReport {
                breakdown,
                sensitivity,
            })
            .expect("report serializes");
            text.push('\n');
            text
        }
        ReportFormat::Csv => render_csv(breakdown),
        ReportFormat::Markdown => render_markdown(breakdown, sensitivity),
    };
    ReportDocument { format, body }
}

/// Parses the JSON form produced by [`render_report`].
pub fn parse_json_report(
    text: &str,
) -> serde_json::Result<(ScoreBreakdown, Vec<SensitivityFinding>)> {
    let owned: JsonReportOwned = serde_json::from_str(text)?;
    Ok((owned.breakdown, owned.sensitivity))
}

fn render_csv(b: &ScoreBreakdown) -> String {
    let mut out = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    out.write_record([
        "criterion_id",
        "name",
        "category",
        "response",
        "raw_points",
        "weight",
        "weighted_points",
    ])
    .expect("write to vec");
    for row in &b.rows {
        out.write_record([
            row.criterion_id.as_str(),
            row.name.as_str(),
            row.category.as_str(),
            &row.response.token(),
            &row.raw_points.to_string(),
            &row.weight.to_string(),
            &row.weighted_points.to_string(),
        ])
        .expect("write to vec");
    }
    out.write_record([
        "total",
        "Total",
        "",
        b.recommendation.as_str(),
        "",
        "",
        &b.total.to_string(),
    ])
    .expect("write to vec");
    String::from_utf8(out.into_inner().expect("flush to vec")).expect("csv is utf-8")
}

fn name_of<'a>(b: &'a ScoreBreakdown, id: &'a str) -> &'a str {
    b.rows
        .iter()
        .find(|r| r.criterion_id == id)
        .map_or(id, |r| r.name.as_str())
}

fn bullet_list(out: &mut String, b: &ScoreBreakdown, ids: &[String], empty: &str) {
    if ids.is_empty() {
        let _ = writeln!(out, "{empty}");
    }
    for id in ids {
        let _ = writeln!(out, "- {id} ({})", name_of(b, id));
    }
}

fn render_markdown(b: &ScoreBreakdown, sensitivity: &[SensitivityFinding]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# Interaction mode report: {} (`{}`)",
        b.task_name, b.task_id
    );
    let _ = writeln!(out);
    let _ = writeln!(out, "- Recommendation: **{}**", b.recommendation);
    let _ = writeln!(out, "- Total: {} points", b.total);
    let _ = writeln!(out, "- Rubric: `{}`", b.rubric_id);

    let mut current = None;
    for row in &b.rows {
        if current != Some(row.category) {
            current = Some(row.category);
            let _ = writeln!(out);
            let _ = writeln!(out, "## {}", row.category.heading());
            let _ = writeln!(out);
            let _ = writeln!(out, "| Criterion | Response | Points | Weight | Weighted |");
            let _ = writeln!(out, "|---|---|---:|---:|---:|");
        }
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} |",
            row.name,
            row.response.token(),
            row.raw_points,
            row.weight,
            row.weighted_points
        );
    }

    let _ = writeln!(out);
    let _ = writeln!(out, "## Collaboration signals");
    let _ = writeln!(out);
    bullet_list(&mut out, b, &b.signals, "None.");

    let _ = writeln!(out);
    let _ = writeln!(out, "## Automation flags");
    let _ = writeln!(out);
    bullet_list(&mut out, b, &b.auto_flags_set, "None.");

    let _ = writeln!(out);
    let _ = writeln!(out, "## Overrides");
    let _ = writeln!(out);
    if b.overrides_applied.is_empty() {
        let _ = writeln!(out, "None.");
    }
    for id in &b.overrides_applied {
        let _ = writeln!(
            out,
            "- {id} ({}): answered Yes, automation ruled out",
            name_of(b, id)
        );
    }

    let _ = writeln!(out);
    let _ = writeln!(out, "## Sensitivity");
    let _ = writeln!(out);
    if sensitivity.is_empty() {
        let _ = writeln!(out, "No single change alters the recommendation.");
    } else {
        let _ = writeln!(
            out,
            "| Criterion | Change | New total | Delta | New recommendation |"
        );
        let _ = writeln!(out, "|---|---|---:|---:|---|");
        for f in sensitivity {
            let _ = writeln!(
                out,
                "| {} | {} → {} | {} | {} | {} |",
                f.criterion_id,
                f.from_response.token(),
                f.to_response.token(),
                f.new_total,
                f.delta,
                f.new_recommendation
            );
        }
    }
    out
}

/// Plain-text table of sensitivity findings.
pub fn render_findings(findings: &[SensitivityFinding]) -> String {
    let mut out = String::new();
    if findings.is_empty() {
        out.push_str("No single change alters the recommendation.\n");
        return out;
    }
    let _ = writeln!(
        out,
        "{:<28} {:<10} {:>9} {:>7}  new recommendation",
        "criterion", "change", "new total", "delta"
    );
    for f in findings {
        let change = format!("{}->{}", f.from_response.token(), f.to_response.token());
        let _ = writeln!(
            out,
            "{:<28} {:<10} {:>9} {:>7}  {}",
            f.criterion_id,
            change,
            f.new_total.to_string(),
            f.delta.to_string(),
            f.new_recommendation
        );
    }
    out
}
