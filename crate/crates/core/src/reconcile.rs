//! Two-rater reconciliation. Identical answers pass through, one-step graded
//! disagreements are kept as a mixed response, and opposite-end
//! disagreements are returned as conflicts for the raters to settle.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Assessment, Conflict, ConflictKind, RaterSheet, Rubric};
use crate::response::ResponseLevel;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReconcileError {
    #[error("rater sheets cover different criteria (only in first: [{}]; only in second: [{}])", .only_in_first.join(", "), .only_in_second.join(", "))]
    DifferentCriteria {
        only_in_first: Vec<String>,
        only_in_second: Vec<String>,
    },
    #[error("rater `{rater_id}` answered unknown criterion `{criterion_id}`")]
    UnknownCriterion {
        rater_id: String,
        criterion_id: String,
    },
    #[error("rater `{rater_id}` gave `{response}` for `{criterion_id}`, which is not an atomic level of its scale")]
    InvalidResponse {
        rater_id: String,
        criterion_id: String,
        response: ResponseLevel,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Reconciliation {
    /// Agreed or averaged responses, in rubric order.
    pub consensus: IndexMap<String, ResponseLevel>,
    pub conflicts: Vec<Conflict>,
}

impl Reconciliation {
    /// Folds the outcome into an assessment; conflicts stay attached and
    /// block scoring until resolved.
    pub fn into_assessment(self, task_id: &str, task_name: &str) -> Assessment {
        let mut assessment = Assessment::new(task_id, task_name);
        assessment.responses = self.consensus;
        assessment.conflicts = self.conflicts;
        assessment
    }
}

fn check_sheet(sheet: &RaterSheet, rubric: &Rubric) -> Result<(), ReconcileError> {
    for (id, level) in &sheet.responses {
        let criterion = rubric
            .criterion(id)
            .ok_or_else(|| ReconcileError::UnknownCriterion {
                rater_id: sheet.rater_id.clone(),
                criterion_id: id.clone(),
            })?;
        if !level.is_atomic() || !level.is_valid_for(criterion.scale) {
            return Err(ReconcileError::InvalidResponse {
                rater_id: sheet.rater_id.clone(),
                criterion_id: id.clone(),
                response: *level,
            });
        }
    }
    Ok(())
}

/// Merges one pair of atomic answers. `Err` carries a polar conflict.
fn merge(a: ResponseLevel, b: ResponseLevel) -> Result<ResponseLevel, [ResponseLevel; 2]> {
    if a == b {
        return Ok(a);
    }
    if let (Some(ga), Some(gb)) = (a.grade(), b.grade()) {
        if let Some(mixed) = ResponseLevel::mixed(ga, gb) {
            return Ok(mixed);
        }
    }
    Err(if a <= b { [a, b] } else { [b, a] })
}

/// Reconciles two raters' sheets for the same task. The result does not
/// depend on argument order.
pub fn reconcile(
    first: &RaterSheet,
    second: &RaterSheet,
    rubric: &Rubric,
) -> Result<Reconciliation, ReconcileError> {
    check_sheet(first, rubric)?;
    check_sheet(second, rubric)?;

    let mut only_in_first: Vec<String> = first
        .responses
        .keys()
        .filter(|k| !second.responses.contains_key(*k))
        .cloned()
        .collect();
    let mut only_in_second: Vec<String> = second
        .responses
        .keys()
        .filter(|k| !first.responses.contains_key(*k))
        .cloned()
        .collect();
    if !only_in_first.is_empty() || !only_in_second.is_empty() {
        only_in_first.sort_by_key(|id| rubric.position(id));
        only_in_second.sort_by_key(|id| rubric.position(id));
        return Err(ReconcileError::DifferentCriteria {
            only_in_first,
            only_in_second,
        });
    }

    let mut outcome = Reconciliation::default();
    for criterion in &rubric.criteria {
        let (Some(&a), Some(&b)) = (
            first.responses.get(&criterion.id),
            second.responses.get(&criterion.id),
        ) else {
            continue;
        };
        match merge(a, b) {
            Ok(level) => {
                outcome.consensus.insert(criterion.id.clone(), level);
            }
            Err(responses) => outcome.conflicts.push(Conflict {
                criterion_id: criterion.id.clone(),
                responses,
                kind: ConflictKind::Polar,
            }),
        }
    }
    Ok(outcome)
}
