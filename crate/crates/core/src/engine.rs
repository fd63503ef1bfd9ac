//! Scoring: per-criterion points, weighted totals, band classification,
//! overrides, collaboration signals and single-change sensitivity.
//!
//! Everything here is a pure function of its arguments and works in integer
//! half-point units.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    Assessment, Category, Conflict, Criterion, HalfPoints, OverrideRule, PointDelta,
    Recommendation, Rubric, ScoringPolicy,
};
use crate::response::{ResponseLevel, Scale};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScoreError {
    #[error("assessment is incomplete; missing responses for: {}", .missing.join(", "))]
    Incomplete { missing: Vec<String> },
    #[error("unknown criterion `{0}`")]
    UnknownCriterion(String),
    #[error("response `{response}` is not valid for criterion `{criterion_id}` ({scale} scale)")]
    InvalidResponse {
        criterion_id: String,
        response: ResponseLevel,
        scale: Scale,
    },
    #[error("criterion `{criterion_id}` has no points for `{level}`")]
    MissingPoints {
        criterion_id: String,
        level: ResponseLevel,
    },
    #[error(
        "mixed response `{response}` on `{criterion_id}` does not average to whole half-points"
    )]
    InexactMixed {
        criterion_id: String,
        response: ResponseLevel,
    },
    #[error("what-if substitutions must be atomic, got `{0}`")]
    NonAtomicSubstitution(ResponseLevel),
    #[error("{} unresolved rater conflict(s): {}", .0.len(), conflict_ids(.0))]
    UnresolvedConflicts(Vec<Conflict>),
}

fn conflict_ids(conflicts: &[Conflict]) -> String {
    conflicts
        .iter()
        .map(|c| c.criterion_id.as_str())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Raw (unweighted) points for one response.
///
/// Mixed responses score the exact mean of their two members. Automation-flag
/// criteria score zero for every response.
pub fn points_for(
    criterion: &Criterion,
    response: ResponseLevel,
    policy: &ScoringPolicy,
) -> Result<HalfPoints, ScoreError> {
    if !response.is_valid_for(criterion.scale) {
        return Err(ScoreError::InvalidResponse {
            criterion_id: criterion.id.clone(),
            response,
            scale: criterion.scale,
        });
    }
    if criterion.auto_flag {
        return Ok(HalfPoints::ZERO);
    }
    let map = policy.point_map_for(criterion);
    let lookup = |level: ResponseLevel| {
        map.get(&level)
            .copied()
            .ok_or_else(|| ScoreError::MissingPoints {
                criterion_id: criterion.id.clone(),
                level,
            })
    };
    match response {
        ResponseLevel::Mixed { lower, upper } => {
            let sum = lookup(lower.level())?.0 + lookup(upper.level())?.0;
            if sum % 2 != 0 {
                return Err(ScoreError::InexactMixed {
                    criterion_id: criterion.id.clone(),
                    response,
                });
            }
            Ok(HalfPoints(sum / 2))
        }
        atomic => lookup(atomic),
    }
}

/// Band for a total: Automation at or below `automation_max`, Collaboration
/// at or above `collaboration_min`, Augmentation in between.
pub fn classify(total: HalfPoints, policy: &ScoringPolicy) -> Recommendation {
    let t = policy.thresholds;
    if total <= t.automation_max {
        Recommendation::Automation
    } else if total >= t.collaboration_min {
        Recommendation::Collaboration
    } else {
        Recommendation::Augmentation
    }
}

/// Applies never-automation rules. Returns the adjusted recommendation and
/// the ids of the criteria whose rule fired.
pub fn apply_overrides(
    assessment: &Assessment,
    rubric: &Rubric,
    base: Recommendation,
) -> (Recommendation, Vec<String>) {
    if base != Recommendation::Automation {
        return (base, Vec::new());
    }
    let fired: Vec<String> = rubric
        .criteria
        .iter()
        .filter(|c| c.override_rule == Some(OverrideRule::NeverAutomationOnYes))
        .filter(|c| assessment.response(&c.id) == Some(ResponseLevel::Yes))
        .map(|c| c.id.clone())
        .collect();
    if fired.is_empty() {
        (base, fired)
    } else {
        (Recommendation::Augmentation, fired)
    }
}

/// Criteria whose answer matches their collaboration signal exactly. Mixed
/// answers never match.
pub fn collaboration_signals(assessment: &Assessment, rubric: &Rubric) -> Vec<String> {
    rubric
        .criteria
        .iter()
        .filter(|c| c.collab_signal.is_some() && assessment.response(&c.id) == c.collab_signal)
        .map(|c| c.id.clone())
        .collect()
}

/// Automation-flag criteria answered Yes.
pub fn automation_flags(assessment: &Assessment, rubric: &Rubric) -> Vec<String> {
    rubric
        .criteria
        .iter()
        .filter(|c| c.auto_flag && assessment.response(&c.id) == Some(ResponseLevel::Yes))
        .map(|c| c.id.clone())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionScore {
    pub criterion_id: String,
    pub name: String,
    pub category: Category,
    pub response: ResponseLevel,
    pub raw_points: HalfPoints,
    pub weight: u32,
    pub weighted_points: HalfPoints,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreBreakdown {
    pub task_id: String,
    pub task_name: String,
    pub rubric_id: String,
    pub rows: Vec<CriterionScore>,
    pub total: HalfPoints,
    pub signals: Vec<String>,
    pub auto_flags_set: Vec<String>,
    pub overrides_applied: Vec<String>,
    pub recommendation: Recommendation,
}

fn check_responses(assessment: &Assessment, rubric: &Rubric) -> Result<(), ScoreError> {
    if !assessment.conflicts.is_empty() {
        return Err(ScoreError::UnresolvedConflicts(
            assessment.conflicts.clone(),
        ));
    }
    for (id, level) in &assessment.responses {
        let criterion = rubric
            .criterion(id)
            .ok_or_else(|| ScoreError::UnknownCriterion(id.clone()))?;
        if !level.is_valid_for(criterion.scale) {
            return Err(ScoreError::InvalidResponse {
                criterion_id: id.clone(),
                response: *level,
                scale: criterion.scale,
            });
        }
    }
    Ok(())
}

/// Scores a complete assessment.
pub fn score_assessment(
    assessment: &Assessment,
    rubric: &Rubric,
    policy: &ScoringPolicy,
) -> Result<ScoreBreakdown, ScoreError> {
    check_responses(assessment, rubric)?;
    let missing: Vec<String> = rubric
        .criteria
        .iter()
        .filter(|c| !assessment.responses.contains_key(&c.id))
        .map(|c| c.id.clone())
        .collect();
    if !missing.is_empty() {
        return Err(ScoreError::Incomplete { missing });
    }

    let rows = rubric
        .criteria
        .iter()
        .map(|criterion| {
            let response = assessment.responses[&criterion.id];
            let raw_points = points_for(criterion, response, policy)?;
            let weight = policy.weight_for(criterion);
            Ok(CriterionScore {
                criterion_id: criterion.id.clone(),
                name: criterion.name.clone(),
                category: criterion.category,
                response,
                raw_points,
                weight,
                weighted_points: raw_points * weight,
            })
        })
        .collect::<Result<Vec<_>, ScoreError>>()?;
    let total: HalfPoints = rows.iter().map(|r| r.weighted_points).sum();
    let (recommendation, overrides_applied) =
        apply_overrides(assessment, rubric, classify(total, policy));

    Ok(ScoreBreakdown {
        task_id: assessment.task_id.clone(),
        task_name: assessment.task_name.clone(),
        rubric_id: rubric.id.clone(),
        rows,
        total,
        signals: collaboration_signals(assessment, rubric),
        auto_flags_set: automation_flags(assessment, rubric),
        overrides_applied,
        recommendation,
    })
}

/// Running score over whatever has been answered so far.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvisionalScore {
    pub answered_count: usize,
    pub complete: bool,
    pub provisional_total: HalfPoints,
    /// Present only once every criterion is answered.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provisional_recommendation: Option<Recommendation>,
    pub signals: Vec<String>,
    pub missing: Vec<String>,
}

/// Sums weighted points over answered criteria only. A recommendation is
/// attached only when the assessment is complete.
pub fn provisional_score(
    assessment: &Assessment,
    rubric: &Rubric,
    policy: &ScoringPolicy,
) -> Result<ProvisionalScore, ScoreError> {
    check_responses(assessment, rubric)?;
    let mut total = HalfPoints::ZERO;
    let mut missing = Vec::new();
    for criterion in &rubric.criteria {
        match assessment.response(&criterion.id) {
            Some(level) => {
                total += points_for(criterion, level, policy)? * policy.weight_for(criterion)
            }
            None => missing.push(criterion.id.clone()),
        }
    }
    let complete = missing.is_empty();
    let provisional_recommendation = if complete {
        Some(apply_overrides(assessment, rubric, classify(total, policy)).0)
    } else {
        None
    };
    Ok(ProvisionalScore {
        answered_count: rubric.criteria.len() - missing.len(),
        complete,
        provisional_total: total,
        provisional_recommendation,
        signals: collaboration_signals(assessment, rubric),
        missing,
    })
}

/// A single-response change that moves the recommendation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SensitivityFinding {
    pub criterion_id: String,
    pub from_response: ResponseLevel,
    pub to_response: ResponseLevel,
    pub new_total: HalfPoints,
    pub delta: PointDelta,
    pub new_recommendation: Recommendation,
}

/// Outcome of substituting one response on a copy of an assessment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WhatIf {
    pub criterion_id: String,
    pub from_response: ResponseLevel,
    pub to_response: ResponseLevel,
    pub new_total: HalfPoints,
    pub new_recommendation: Recommendation,
    pub delta: PointDelta,
}

/// Re-scores a copy of `assessment` with one atomic response replaced.
pub fn what_if(
    assessment: &Assessment,
    rubric: &Rubric,
    policy: &ScoringPolicy,
    criterion_id: &str,
    to_response: ResponseLevel,
) -> Result<WhatIf, ScoreError> {
    if !to_response.is_atomic() {
        return Err(ScoreError::NonAtomicSubstitution(to_response));
    }
    let criterion = rubric
        .criterion(criterion_id)
        .ok_or_else(|| ScoreError::UnknownCriterion(criterion_id.to_string()))?;
    let baseline = score_assessment(assessment, rubric, policy)?;
    let from_response = assessment.responses[&criterion.id];
    let mut variant = assessment.clone();
    variant.responses.insert(criterion.id.clone(), to_response);
    let rescored = score_assessment(&variant, rubric, policy)?;
    Ok(WhatIf {
        criterion_id: criterion.id.clone(),
        from_response,
        to_response,
        new_total: rescored.total,
        new_recommendation: rescored.recommendation,
        delta: PointDelta::between(rescored.total, baseline.total),
    })
}

/// Every single atomic change that alters the recommendation, largest total
/// swing first; ties keep rubric order.
pub fn sensitivity(
    assessment: &Assessment,
    rubric: &Rubric,
    policy: &ScoringPolicy,
) -> Result<Vec<SensitivityFinding>, ScoreError> {
    let baseline = score_assessment(assessment, rubric, policy)?;
    let mut findings = Vec::new();
    for criterion in &rubric.criteria {
        let current = assessment.responses[&criterion.id];
        for &alternative in criterion.scale.atomic_levels() {
            if alternative == current {
                continue;
            }
            let mut variant = assessment.clone();
            variant.responses.insert(criterion.id.clone(), alternative);
            let rescored = score_assessment(&variant, rubric, policy)?;
            if rescored.recommendation != baseline.recommendation {
                findings.push(SensitivityFinding {
                    criterion_id: criterion.id.clone(),
                    from_response: current,
                    to_response: alternative,
                    new_total: rescored.total,
                    delta: PointDelta::between(rescored.total, baseline.total),
                    new_recommendation: rescored.recommendation,
                });
            }
        }
    }
    findings.sort_by_key(|f| std::cmp::Reverse(f.delta.magnitude()));
    Ok(findings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin_rubric;
    use crate::response::Grade;

    fn policy() -> ScoringPolicy {
        builtin_rubric().default_policy()
    }

    fn criterion(id: &str) -> &'static Criterion {
        builtin_rubric().criterion(id).unwrap()
    }

    #[test]
    fn points_examples() {
        let p = policy();
        assert_eq!(
            points_for(criterion("variability"), ResponseLevel::High, &p),
            Ok(HalfPoints(8))
        );
        assert_eq!(
            points_for(criterion("decision"), ResponseLevel::No, &p),
            Ok(HalfPoints(0))
        );
        let mixed = ResponseLevel::mixed(Grade::Medium, Grade::High).unwrap();
        assert_eq!(
            points_for(criterion("coordinative_complexity"), mixed, &p),
            Ok(HalfPoints(6))
        );
        let low_mid = ResponseLevel::mixed(Grade::Low, Grade::Medium).unwrap();
        assert_eq!(
            points_for(criterion("variability"), low_mid, &p),
            Ok(HalfPoints(2))
        );
    }

    #[test]
    fn auto_flags_score_nothing() {
        let p = policy();
        for id in ["managing_workload", "need_scale", "need_efficiency"] {
            assert_eq!(
                points_for(criterion(id), ResponseLevel::Yes, &p),
                Ok(HalfPoints::ZERO)
            );
            assert_eq!(
                points_for(criterion(id), ResponseLevel::No, &p),
                Ok(HalfPoints::ZERO)
            );
        }
    }

    #[test]
    fn points_reject_scale_mismatch() {
        let err = points_for(criterion("decision"), ResponseLevel::High, &policy()).unwrap_err();
        assert!(matches!(err, ScoreError::InvalidResponse { .. }));
    }

    #[test]
    fn classify_bands() {
        let p = policy();
        assert_eq!(
            classify(HalfPoints::from_points(12), &p),
            Recommendation::Automation
        );
        assert_eq!(
            classify(HalfPoints::from_points(13), &p),
            Recommendation::Automation
        );
        assert_eq!(classify(HalfPoints(27), &p), Recommendation::Augmentation);
        assert_eq!(
            classify(HalfPoints::from_points(18), &p),
            Recommendation::Augmentation
        );
        assert_eq!(
            classify(HalfPoints::from_points(24), &p),
            Recommendation::Collaboration
        );
        assert_eq!(
            classify(HalfPoints::from_points(25), &p),
            Recommendation::Collaboration
        );
    }

    fn all_zero() -> Assessment {
        let mut a = Assessment::new("zero", "All zero");
        for c in &builtin_rubric().criteria {
            let level = match c.scale {
                Scale::Binary if c.auto_flag => ResponseLevel::Yes,
                Scale::Binary => ResponseLevel::No,
                Scale::Graded => ResponseLevel::Low,
            };
            a.responses.insert(c.id.clone(), level);
        }
        a
    }

    #[test]
    fn all_zero_task_is_automation() {
        let b = score_assessment(&all_zero(), builtin_rubric(), &policy()).unwrap();
        assert_eq!(b.total, HalfPoints::ZERO);
        assert_eq!(b.recommendation, Recommendation::Automation);
        assert_eq!(
            b.auto_flags_set,
            ["managing_workload", "need_scale", "need_efficiency"]
        );
        assert!(b.overrides_applied.is_empty());
    }

    #[test]
    fn social_ethical_override() {
        let rubric = builtin_rubric();
        let yes = all_zero().with_response("social_ethical", ResponseLevel::Yes);
        assert_eq!(
            apply_overrides(&yes, rubric, Recommendation::Automation),
            (
                Recommendation::Augmentation,
                vec!["social_ethical".to_string()]
            )
        );
        assert_eq!(
            apply_overrides(&all_zero(), rubric, Recommendation::Automation),
            (Recommendation::Automation, vec![])
        );
        assert_eq!(
            apply_overrides(&yes, rubric, Recommendation::Collaboration),
            (Recommendation::Collaboration, vec![])
        );
        let b = score_assessment(&yes, rubric, &policy()).unwrap();
        assert_eq!(b.total, HalfPoints::from_points(4));
        assert_eq!(b.recommendation, Recommendation::Augmentation);
        assert_eq!(b.overrides_applied, ["social_ethical"]);
    }

    #[test]
    fn incomplete_lists_missing() {
        let mut a = all_zero();
        a.responses.shift_remove("variability");
        assert_eq!(
            score_assessment(&a, builtin_rubric(), &policy()),
            Err(ScoreError::Incomplete {
                missing: vec!["variability".into()]
            })
        );
        let p = provisional_score(&a, builtin_rubric(), &policy()).unwrap();
        assert_eq!(p.answered_count, 17);
        assert!(!p.complete);
        assert_eq!(p.provisional_recommendation, None);
    }

    #[test]
    fn mixed_never_signals() {
        let rubric = builtin_rubric();
        let a = all_zero()
            .with_response(
                "variability",
                ResponseLevel::mixed(Grade::Medium, Grade::High).unwrap(),
            )
            .with_response("uncertainty_understanding", ResponseLevel::High);
        assert_eq!(
            collaboration_signals(&a, rubric),
            ["uncertainty_understanding"]
        );
    }

    #[test]
    fn what_if_identity_has_zero_delta() {
        let a = all_zero();
        let w = what_if(
            &a,
            builtin_rubric(),
            &policy(),
            "variability",
            ResponseLevel::Low,
        )
        .unwrap();
        assert_eq!(w.delta, PointDelta(0));
        assert_eq!(w.new_recommendation, Recommendation::Automation);
        let err = what_if(
            &a,
            builtin_rubric(),
            &policy(),
            "variability",
            ResponseLevel::mixed(Grade::Low, Grade::Medium).unwrap(),
        );
        assert!(matches!(err, Err(ScoreError::NonAtomicSubstitution(_))));
    }
}
