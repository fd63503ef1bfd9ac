//! The nine calibration tasks from three case studies, with their published
//! totals and cluster labels kept as reference metadata.
//!
//! Published totals are reference data, not engine targets; only band
//! structure, labels and rank order are expected to line up.

use std::fmt;
use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::builtin_rubric;
use crate::engine::{score_assessment, ScoreError};
use crate::model::{Assessment, HalfPoints, Recommendation, Reference, Rubric, ScoringPolicy};
use crate::response::parse_token;

/// Canonical corpus document, embedded at build time.
pub const CORPUS_JSON: &str = include_str!("../corpus/a2c_cases.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseStudy {
    ProteinCrystallisation,
    GenomeAnnotation,
    BiologicalCollections,
}

impl CaseStudy {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseStudy::ProteinCrystallisation => "protein_crystallisation",
            CaseStudy::GenomeAnnotation => "genome_annotation",
            CaseStudy::BiologicalCollections => "biological_collections",
        }
    }
}

impl FromStr for CaseStudy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "protein_crystallisation" => Ok(CaseStudy::ProteinCrystallisation),
            "genome_annotation" => Ok(CaseStudy::GenomeAnnotation),
            "biological_collections" => Ok(CaseStudy::BiologicalCollections),
            other => Err(format!("unknown case study `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusTask {
    pub assessment: Assessment,
    pub case_study: CaseStudy,
    pub reference: Reference,
}

impl CorpusTask {
    pub fn task_id(&self) -> &str {
        &self.assessment.task_id
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("corpus JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("corpus CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("task `{task_id}`: {message}")]
    Task { task_id: String, message: String },
    #[error("corpus CSV: {0}")]
    Layout(String),
}

fn into_task(assessment: Assessment) -> Result<CorpusTask, CorpusError> {
    let fail = |message: String| CorpusError::Task {
        task_id: assessment.task_id.clone(),
        message,
    };
    let case_study = assessment
        .case_study
        .as_deref()
        .ok_or_else(|| fail("missing case_study".into()))?
        .parse()
        .map_err(fail)?;
    let reference = assessment
        .reference
        .ok_or_else(|| fail("missing reference".into()))?;
    Ok(CorpusTask {
        assessment,
        case_study,
        reference,
    })
}

/// Parses a corpus document (a JSON array of assessments with reference
/// metadata).
pub fn parse_corpus_json(text: &str) -> Result<Vec<CorpusTask>, CorpusError> {
    let docs: Vec<Assessment> = serde_json::from_str(text)?;
    docs.into_iter().map(into_task).collect()
}

/// Parses a corpus laid out as a table: one row per criterion, one column per
/// task, criterion id in the first column. The header row names task ids.
/// Optional rows `task_name`, `case_study`, `paper_total` and `paper_label`
/// carry task metadata.
pub fn parse_corpus_csv(reader: impl Read) -> Result<Vec<Assessment>, CorpusError> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = csv.headers()?.clone();
    if headers.len() < 2 {
        return Err(CorpusError::Layout(
            "expected a criterion column and at least one task".into(),
        ));
    }
    let mut tasks: Vec<Assessment> = headers
        .iter()
        .skip(1)
        .map(|id| Assessment::new(id, id))
        .collect();
    let mut totals: Vec<Option<HalfPoints>> = vec![None; tasks.len()];
    let mut labels: Vec<Option<Recommendation>> = vec![None; tasks.len()];

    for record in csv.records() {
        let record = record?;
        let key = record.get(0).unwrap_or_default().to_string();
        for (i, cell) in record.iter().skip(1).enumerate() {
            let Some(task) = tasks.get_mut(i) else {
                return Err(CorpusError::Layout(format!(
                    "row `{key}` has more cells than tasks"
                )));
            };
            let fail = |message: String| CorpusError::Task {
                task_id: task.task_id.clone(),
                message,
            };
            match key.as_str() {
                "task_name" => task.task_name = cell.to_string(),
                "case_study" => task.case_study = Some(cell.to_string()),
                "paper_total" => {
                    let value: f64 = cell
                        .parse()
                        .map_err(|_| fail(format!("bad paper_total `{cell}`")))?;
                    totals[i] = Some(
                        HalfPoints::from_decimal(value)
                            .ok_or_else(|| fail(format!("bad paper_total `{cell}`")))?,
                    );
                }
                "paper_label" => labels[i] = Some(cell.parse().map_err(fail)?),
                criterion => {
                    let level = parse_token(cell).map_err(|e| fail(format!("{criterion}: {e}")))?;
                    task.responses.insert(criterion.to_string(), level);
                }
            }
        }
    }
    for (i, task) in tasks.iter_mut().enumerate() {
        if let (Some(paper_total), Some(paper_label)) = (totals[i], labels[i]) {
            task.reference = Some(Reference {
                paper_total,
                paper_label,
            });
        }
    }
    Ok(tasks)
}

/// Converts parsed assessments into corpus tasks (each needs a case study and
/// reference metadata).
pub fn tasks_from_assessments(docs: Vec<Assessment>) -> Result<Vec<CorpusTask>, CorpusError> {
    docs.into_iter().map(into_task).collect()
}

/// The nine built-in calibration tasks, in published column order.
pub fn load_corpus() -> Vec<CorpusTask> {
    parse_corpus_json(CORPUS_JSON).expect("embedded corpus parses")
}

pub fn corpus_task(task_id: &str) -> Option<CorpusTask> {
    load_corpus().into_iter().find(|t| t.task_id() == task_id)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusRow {
    pub task_id: String,
    pub case_study: CaseStudy,
    pub computed_total: HalfPoints,
    pub computed_recommendation: Recommendation,
    pub paper_total: HalfPoints,
    pub paper_label: Recommendation,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub rows: Vec<CorpusRow>,
    pub agreement_count: usize,
    /// Spearman rank correlation between computed and published totals.
    pub rank_correlation: f64,
}

/// Scores every task under `policy` and compares with the published labels.
pub fn corpus_report(
    tasks: &[CorpusTask],
    rubric: &Rubric,
    policy: &ScoringPolicy,
) -> Result<CorpusReport, ScoreError> {
    let rows = tasks
        .iter()
        .map(|task| {
            let breakdown = score_assessment(&task.assessment, rubric, policy)?;
            Ok(CorpusRow {
                task_id: task.task_id().to_string(),
                case_study: task.case_study,
                computed_total: breakdown.total,
                computed_recommendation: breakdown.recommendation,
                paper_total: task.reference.paper_total,
                paper_label: task.reference.paper_label,
                agrees: breakdown.recommendation == task.reference.paper_label,
            })
        })
        .collect::<Result<Vec<_>, ScoreError>>()?;
    let computed: Vec<f64> = rows.iter().map(|r| r.computed_total.as_points()).collect();
    let published: Vec<f64> = rows.iter().map(|r| r.paper_total.as_points()).collect();
    Ok(CorpusReport {
        agreement_count: rows.iter().filter(|r| r.agrees).count(),
        rank_correlation: spearman(&computed, &published),
        rows,
    })
}

/// Built-in corpus report under the built-in rubric and the given policy.
pub fn builtin_corpus_report(policy: &ScoringPolicy) -> CorpusReport {
    corpus_report(&load_corpus(), builtin_rubric(), policy)
        .expect("corpus scores under the built-in rubric")
}

/// 1-based ranks with ties sharing their mean rank.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start;
        while end + 1 < order.len() && values[order[end + 1]] == values[order[start]] {
            end += 1;
        }
        let rank = (start + end) as f64 / 2.0 + 1.0;
        for &idx in &order[start..=end] {
            ranks[idx] = rank;
        }
        start = end + 1;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        return f64::NAN;
    }
    sxy / (sxx * syy).sqrt()
}

/// Spearman rank correlation (Pearson correlation of average ranks). NaN when
/// either side is constant.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "spearman needs paired samples");
    pearson(&average_ranks(x), &average_ranks(y))
}

impl fmt::Display for CorpusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "| task | case study | computed total | computed | published total | published | agrees |"
        )?;
        writeln!(f, "|---|---|---:|---|---:|---|---|")?;
        for r in &self.rows {
            writeln!(
                f,
                "| {} | {} | {} | {} | {} | {} | {} |",
                r.task_id,
                r.case_study.as_str(),
                r.computed_total,
                r.computed_recommendation.short_label(),
                r.paper_total,
                r.paper_label.short_label(),
                if r.agrees { "yes" } else { "no" },
            )?;
        }
        writeln!(f)?;
        writeln!(
            f,
            "Label agreement: {}/{}",
            self.agreement_count,
            self.rows.len()
        )?;
        writeln!(
            f,
            "Rank correlation (Spearman): {:.3}",
            self.rank_correlation
        )
    }
}
