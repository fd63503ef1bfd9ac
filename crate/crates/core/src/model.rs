//! Domain types: criteria, rubrics, scoring policies, assessments and rater
//! sheets, with their JSON forms.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::response::{ResponseLevel, Scale};

/// Score quantity in half-point units. All arithmetic in the engine is done
/// on this integer; it is rendered (and serialized) as decimal points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfPoints(pub u64);

impl HalfPoints {
    pub const ZERO: HalfPoints = HalfPoints(0);

    pub fn from_points(points: u64) -> HalfPoints {
        HalfPoints(points * 2)
    }

    /// Converts a decimal point value; `None` unless it is a non-negative
    /// multiple of one half.
    pub fn from_decimal(points: f64) -> Option<HalfPoints> {
        let halves = points * 2.0;
        if !halves.is_finite() || halves < 0.0 || halves.fract() != 0.0 || halves > u64::MAX as f64
        {
            return None;
        }
        Some(HalfPoints(halves as u64))
    }

    pub fn as_points(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl fmt::Display for HalfPoints {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}.{}",
            self.0 / 2,
            if self.0.is_multiple_of(2) { 0 } else { 5 }
        )
    }
}

/// Signed difference between two totals, in half-point units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PointDelta(pub i64);

impl PointDelta {
    pub fn between(new: HalfPoints, base: HalfPoints) -> PointDelta {
        PointDelta(new.0 as i64 - base.0 as i64)
    }

    pub fn magnitude(self) -> u64 {
        self.0.unsigned_abs()
    }

    pub fn as_points(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl fmt::Display for PointDelta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "+" };
        write!(f, "{sign}{}", HalfPoints(self.magnitude()))
    }
}

impl Serialize for PointDelta {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.as_points())
    }
}

impl<'de> Deserialize<'de> for PointDelta {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let value = f64::deserialize(deserializer)?;
        let halves = value * 2.0;
        if !halves.is_finite() || halves.fract() != 0.0 {
            return Err(serde::de::Error::custom(format!(
                "delta {value} is not a multiple of 0.5"
            )));
        }
        Ok(PointDelta(halves as i64))
    }
}

impl Add for HalfPoints {
    type Output = HalfPoints;
    fn add(self, rhs: HalfPoints) -> HalfPoints {
        HalfPoints(self.0 + rhs.0)
    }
}

impl AddAssign for HalfPoints {
    fn add_assign(&mut self, rhs: HalfPoints) {
        self.0 += rhs.0;
    }
}

impl Mul<u32> for HalfPoints {
    type Output = HalfPoints;
    fn mul(self, rhs: u32) -> HalfPoints {
        HalfPoints(self.0 * u64::from(rhs))
    }
}

impl std::iter::Sum for HalfPoints {
    fn sum<I: Iterator<Item = HalfPoints>>(iter: I) -> HalfPoints {
        iter.fold(HalfPoints::ZERO, Add::add)
    }
}

impl Serialize for HalfPoints {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.as_points())
    }
}

impl<'de> Deserialize<'de> for HalfPoints {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let value = f64::deserialize(deserializer)?;
        HalfPoints::from_decimal(value).ok_or_else(|| {
            serde::de::Error::custom(format!(
                "point value {value} is not a non-negative multiple of 0.5"
            ))
        })
    }
}

/// The three interaction modes, ordered from least to most human involvement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Recommendation {
    Automation,
    Augmentation,
    Collaboration,
}

impl Recommendation {
    pub fn as_str(self) -> &'static str {
        match self {
            Recommendation::Automation => "automation",
            Recommendation::Augmentation => "augmentation",
            Recommendation::Collaboration => "collaboration",
        }
    }

    /// Abbreviated cluster label (`Auto`, `Aug`, `Collab`).
    pub fn short_label(self) -> &'static str {
        match self {
            Recommendation::Automation => "Auto",
            Recommendation::Augmentation => "Aug",
            Recommendation::Collaboration => "Collab",
        }
    }
}

impl fmt::Display for Recommendation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Recommendation::Automation => "Automation",
            Recommendation::Augmentation => "Augmentation",
            Recommendation::Collaboration => "Collaboration",
        })
    }
}

impl FromStr for Recommendation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "auto" | "automation" => Ok(Recommendation::Automation),
            "aug" | "augmentation" => Ok(Recommendation::Augmentation),
            "collab" | "collaboration" => Ok(Recommendation::Collaboration),
            other => Err(format!("unknown recommendation `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Category {
    TaskElements,
    WorkerImpacts,
    SupportNeeds,
}

impl Category {
    pub const ALL: [Category; 3] = [
        Category::TaskElements,
        Category::WorkerImpacts,
        Category::SupportNeeds,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::TaskElements => "task-elements",
            Category::WorkerImpacts => "worker-impacts",
            Category::SupportNeeds => "support-needs",
        }
    }

    /// Section heading as printed on the instrument.
    pub fn heading(self) -> &'static str {
        match self {
            Category::TaskElements => "Elements of the task",
            Category::WorkerImpacts => "Impact on workers",
            Category::SupportNeeds => "Challenges and support needs",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OverrideRule {
    /// A `Yes` answer rules out automation whatever the total.
    NeverAutomationOnYes,
}

/// Atomic response level to points.
pub type PointMap = BTreeMap<ResponseLevel, HalfPoints>;

/// One rubric row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Criterion {
    pub id: String,
    pub name: String,
    pub category: Category,
    pub question: String,
    pub scale: Scale,
    pub point_map: PointMap,
    pub weight: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub collab_signal: Option<ResponseLevel>,
    #[serde(default, rename = "override", skip_serializing_if = "Option::is_none")]
    pub override_rule: Option<OverrideRule>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub auto_flag: bool,
}

/// Point cut-offs separating the three bands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Totals at or below this are Automation.
    pub automation_max: HalfPoints,
    /// Totals at or above this are Collaboration.
    pub collaboration_min: HalfPoints,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MixedRule {
    /// A mixed response scores the mean of its two members.
    #[default]
    AverageOfMembers,
}

/// Everything that turns responses into a recommendation besides the rubric
/// rows themselves. Point-map and weight overrides are keyed by criterion id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoringPolicy {
    #[serde(default)]
    pub mixed_rule: MixedRule,
    pub thresholds: Thresholds,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub point_overrides: BTreeMap<String, PointMap>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub weight_overrides: BTreeMap<String, u32>,
}

impl ScoringPolicy {
    pub fn new(thresholds: Thresholds) -> ScoringPolicy {
        ScoringPolicy {
            mixed_rule: MixedRule::AverageOfMembers,
            thresholds,
            point_overrides: BTreeMap::new(),
            weight_overrides: BTreeMap::new(),
        }
    }

    pub fn point_map_for<'a>(&'a self, criterion: &'a Criterion) -> &'a PointMap {
        self.point_overrides
            .get(&criterion.id)
            .unwrap_or(&criterion.point_map)
    }

    pub fn weight_for(&self, criterion: &Criterion) -> u32 {
        self.weight_overrides
            .get(&criterion.id)
            .copied()
            .unwrap_or(criterion.weight)
    }

    /// Policy with every effective weight and both thresholds multiplied by `k`.
    pub fn scaled(&self, rubric: &Rubric, k: u32) -> ScoringPolicy {
        let mut scaled = self.clone();
        scaled.weight_overrides = rubric
            .criteria
            .iter()
            .map(|c| (c.id.clone(), self.weight_for(c) * k))
            .collect();
        scaled.thresholds = Thresholds {
            automation_max: self.thresholds.automation_max * k,
            collaboration_min: self.thresholds.collaboration_min * k,
        };
        scaled
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rubric {
    pub id: String,
    pub version: String,
    pub criteria: Vec<Criterion>,
    pub thresholds: Thresholds,
}

impl Rubric {
    pub fn criterion(&self, id: &str) -> Option<&Criterion> {
        self.criteria.iter().find(|c| c.id == id)
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.criteria.iter().position(|c| c.id == id)
    }

    pub fn default_policy(&self) -> ScoringPolicy {
        ScoringPolicy::new(self.thresholds)
    }

    pub fn from_json(text: &str) -> serde_json::Result<Rubric> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("rubric serializes")
    }
}

/// Published reference values carried alongside a fixture task.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reference {
    pub paper_total: HalfPoints,
    pub paper_label: Recommendation,
}

/// Two-rater disagreement at opposite ends of a scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConflictKind {
    Polar,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conflict {
    pub criterion_id: String,
    /// The two rater responses, lower level first.
    pub responses: [ResponseLevel; 2],
    pub kind: ConflictKind,
}

/// One task's responses across the rubric.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assessment {
    pub task_id: String,
    pub task_name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case_study: Option<String>,
    pub responses: IndexMap<String, ResponseLevel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<Reference>,
    /// Polar disagreements still awaiting an agreed response.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub conflicts: Vec<Conflict>,
}

impl Assessment {
    pub fn new(task_id: impl Into<String>, task_name: impl Into<String>) -> Assessment {
        Assessment {
            task_id: task_id.into(),
            task_name: task_name.into(),
            case_study: None,
            responses: IndexMap::new(),
            reference: None,
            conflicts: Vec::new(),
        }
    }

    pub fn with_response(mut self, criterion_id: &str, level: ResponseLevel) -> Assessment {
        self.responses.insert(criterion_id.to_string(), level);
        self
    }

    pub fn response(&self, criterion_id: &str) -> Option<ResponseLevel> {
        self.responses.get(criterion_id).copied()
    }

    pub fn from_json(text: &str) -> serde_json::Result<Assessment> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("assessment serializes")
    }
}

/// One rater's independent answers. Mixed levels never appear here.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RaterSheet {
    pub rater_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task_name: Option<String>,
    pub responses: IndexMap<String, ResponseLevel>,
}

impl RaterSheet {
    pub fn new(rater_id: impl Into<String>) -> RaterSheet {
        RaterSheet {
            rater_id: rater_id.into(),
            task_id: None,
            task_name: None,
            responses: IndexMap::new(),
        }
    }

    pub fn with_response(mut self, criterion_id: &str, level: ResponseLevel) -> RaterSheet {
        self.responses.insert(criterion_id.to_string(), level);
        self
    }
}
