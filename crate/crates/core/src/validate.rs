//! Structural checks for rubrics, policies and assessments. Violations are
//! returned as data; an empty report means valid.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{Assessment, Criterion, HalfPoints, PointMap, Rubric, ScoringPolicy};
use crate::response::Scale;

/// Highest admissible raw score for one response: 4 points.
pub const MAX_RAW_POINTS: HalfPoints = HalfPoints(8);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    DuplicateId,
    MissingPoint,
    ExtraPoint,
    PointRange,
    NonMonotone,
    MixedAverageInexact,
    WeightRange,
    InvalidSignal,
    InvalidOverride,
    ThresholdOrder,
    UnknownPolicyCriterion,
    MissingResponse,
    UnknownCriterion,
    ScaleMismatch,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::DuplicateId => "duplicate-id",
            Rule::MissingPoint => "missing-point",
            Rule::ExtraPoint => "extra-point",
            Rule::PointRange => "point-range",
            Rule::NonMonotone => "non-monotone",
            Rule::MixedAverageInexact => "mixed-average-inexact",
            Rule::WeightRange => "weight-range",
            Rule::InvalidSignal => "invalid-signal",
            Rule::InvalidOverride => "invalid-override",
            Rule::ThresholdOrder => "threshold-order",
            Rule::UnknownPolicyCriterion => "unknown-policy-criterion",
            Rule::MissingResponse => "missing-response",
            Rule::UnknownCriterion => "unknown-criterion",
            Rule::ScaleMismatch => "scale-mismatch",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: Rule,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub criterion_id: Option<String>,
    pub message: String,
}

impl Violation {
    fn new(rule: Rule, criterion_id: Option<&str>, message: impl Into<String>) -> Violation {
        Violation {
            rule,
            criterion_id: criterion_id.map(str::to_string),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.criterion_id {
            Some(id) => write!(f, "[{}] {}: {}", self.rule.as_str(), id, self.message),
            None => write!(f, "[{}] {}", self.rule.as_str(), self.message),
        }
    }
}

fn check_point_map(criterion: &Criterion, map: &PointMap, out: &mut Vec<Violation>) {
    let id = Some(criterion.id.as_str());
    let levels = criterion.scale.atomic_levels();
    for level in levels {
        if !map.contains_key(level) {
            out.push(Violation::new(
                Rule::MissingPoint,
                id,
                format!("point map has no entry for `{level}`"),
            ));
        }
    }
    for (level, points) in map {
        if !levels.contains(level) {
            out.push(Violation::new(
                Rule::ExtraPoint,
                id,
                format!(
                    "`{level}` is not an atomic level of the {} scale",
                    criterion.scale
                ),
            ));
        }
        if *points > MAX_RAW_POINTS {
            out.push(Violation::new(
                Rule::PointRange,
                id,
                format!("`{level}` scores {points} points, above the 4-point maximum"),
            ));
        }
    }
    let present: Vec<HalfPoints> = levels.iter().filter_map(|l| map.get(l).copied()).collect();
    if !criterion.auto_flag
        && present.len() == levels.len()
        && present.windows(2).any(|w| w[0] > w[1])
    {
        out.push(Violation::new(
            Rule::NonMonotone,
            id,
            "points must not decrease along the scale",
        ));
    }
    if criterion.scale == Scale::Graded && present.len() == levels.len() {
        // Mixed responses average adjacent members; the mean must stay in half-units.
        if present.windows(2).any(|w| (w[0].0 + w[1].0) % 2 != 0) {
            out.push(Violation::new(
                Rule::MixedAverageInexact,
                id,
                "adjacent graded levels must average to a whole number of half-points",
            ));
        }
    }
}

fn check_thresholds(policy: &ScoringPolicy, out: &mut Vec<Violation>) {
    let t = policy.thresholds;
    if t.automation_max >= t.collaboration_min {
        out.push(Violation::new(
            Rule::ThresholdOrder,
            None,
            format!(
                "automation_max ({}) must be below collaboration_min ({})",
                t.automation_max, t.collaboration_min
            ),
        ));
    }
}

/// Checks every rubric invariant, including its default thresholds.
pub fn validate_rubric(rubric: &Rubric) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for criterion in &rubric.criteria {
        let id = Some(criterion.id.as_str());
        if !seen.insert(criterion.id.as_str()) {
            out.push(Violation::new(
                Rule::DuplicateId,
                id,
                "criterion id appears more than once",
            ));
        }
        if criterion.weight < 1 {
            out.push(Violation::new(
                Rule::WeightRange,
                id,
                format!("weight {} is below 1", criterion.weight),
            ));
        }
        check_point_map(criterion, &criterion.point_map, &mut out);
        if let Some(signal) = criterion.collab_signal {
            if !signal.is_atomic() || !signal.is_valid_for(criterion.scale) {
                out.push(Violation::new(
                    Rule::InvalidSignal,
                    id,
                    format!(
                        "collaboration signal `{signal}` is not an atomic {} level",
                        criterion.scale
                    ),
                ));
            }
        }
        if criterion.override_rule.is_some() && criterion.scale != Scale::Binary {
            out.push(Violation::new(
                Rule::InvalidOverride,
                id,
                "never-automation-on-yes requires a binary scale",
            ));
        }
    }
    check_thresholds(&rubric.default_policy(), &mut out);
    out
}

/// Checks a policy's overrides and thresholds against a rubric.
pub fn validate_policy(policy: &ScoringPolicy, rubric: &Rubric) -> Vec<Violation> {
    let mut out = Vec::new();
    for (id, map) in &policy.point_overrides {
        match rubric.criterion(id) {
            Some(criterion) => check_point_map(criterion, map, &mut out),
            None => out.push(Violation::new(
                Rule::UnknownPolicyCriterion,
                Some(id),
                "point override names no rubric criterion",
            )),
        }
    }
    for (id, weight) in &policy.weight_overrides {
        if rubric.criterion(id).is_none() {
            out.push(Violation::new(
                Rule::UnknownPolicyCriterion,
                Some(id),
                "weight override names no rubric criterion",
            ));
        } else if *weight < 1 {
            out.push(Violation::new(
                Rule::WeightRange,
                Some(id),
                format!("weight {weight} is below 1"),
            ));
        }
    }
    check_thresholds(policy, &mut out);
    out
}

/// Reports missing responses, unknown criterion ids and scale mismatches.
/// An assessment with an empty report is complete and scorable.
pub fn validate_assessment(assessment: &Assessment, rubric: &Rubric) -> Vec<Violation> {
    let mut out = Vec::new();
    for (id, level) in &assessment.responses {
        match rubric.criterion(id) {
            None => out.push(Violation::new(
                Rule::UnknownCriterion,
                Some(id),
                "response names no rubric criterion",
            )),
            Some(criterion) if !level.is_valid_for(criterion.scale) => out.push(Violation::new(
                Rule::ScaleMismatch,
                Some(id),
                format!("`{level}` is not valid on a {} scale", criterion.scale),
            )),
            Some(_) => {}
        }
    }
    for criterion in &rubric.criteria {
        if !assessment.responses.contains_key(&criterion.id) {
            out.push(Violation::new(
                Rule::MissingResponse,
                Some(&criterion.id),
                "no response",
            ));
        }
    }
    out
}
