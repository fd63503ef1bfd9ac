//! The built-in interaction-mode rubric: 18 criteria in instrument order,
//! their scoring questions, default point maps, weights and thresholds.
//!
//! Default points (in whole points): graded criteria score Low 0, Medium 2,
//! High 4, including the two complexity rows whose instrument column merges
//! "Medium or High". Binary human-in-the-loop criteria score Yes 2, No 0.
//! `need_innovation` scores Yes 4. The three automation-flag criteria
//! (`managing_workload`, `need_scale`, `need_efficiency`) score 0 either way
//! and only surface a Yes as a pro-automation note.

use std::io;
use std::path::Path;
use std::sync::OnceLock;

use crate::model::{Category, Criterion, HalfPoints, OverrideRule, PointMap, Rubric, Thresholds};
use crate::response::{ResponseLevel, Scale};

pub const BUILTIN_RUBRIC_ID: &str = "a2c";
pub const BUILTIN_RUBRIC_VERSION: &str = "1.0.0";

/// File name of the exported canonical catalog.
pub const CATALOG_FILE_NAME: &str = "a2c_rubric.json";

/// Default band cut-offs: 13 and 24 points.
pub const DEFAULT_THRESHOLDS: Thresholds = Thresholds {
    automation_max: HalfPoints(26),
    collaboration_min: HalfPoints(48),
};

#[derive(Clone, Copy)]
enum Kind {
    /// Yes keeps a human in the loop (2 points).
    HumanInLoop,
    /// Yes recommends collaboration (4 points).
    Collaborative,
    /// Yes favours automation; scores nothing.
    AutomationFlag,
    /// Low 0, Medium 2, High 4.
    Graded,
}

struct Row {
    id: &'static str,
    name: &'static str,
    category: Category,
    question: &'static str,
    kind: Kind,
    weight: u32,
    signal: bool,
    override_rule: bool,
}

const ROWS: [Row; 18] = [
    Row {
        id: "decision",
        name: "Decision task",
        category: Category::TaskElements,
        question: "Does this task involve a decision?",
        kind: Kind::HumanInLoop,
        weight: 1,
        signal: false,
        override_rule: false,
    },
    Row {
        id: "component_complexity",
        name: "Component complexity",
        category: Category::TaskElements,
        question: "How complex is this task in terms of 1) the number of different pieces of information that must be considered, 2) the number of steps in the task/actions that are taken?",
        kind: Kind::Graded,
        weight: 1,
        signal: false,
        override_rule: false,
    },
    Row {
        id: "dynamic_complexity",
        name: "Dynamic complexity",
        category: Category::TaskElements,
        question: "How dynamic is the state of the world in which the task takes place? How much impact do these have on completing the task?",
        kind: Kind::Graded,
        weight: 1,
        signal: false,
        override_rule: false,
    },
    Row {
        id: "coordinative_complexity",
        name: "Coordinative complexity and interdependence",
        category: Category::TaskElements,
        question: "How complex is the coordination/scheduling of the task? How interdependent are task components (i.e. does changing one affect how others are conducted)?",
        kind: Kind::Graded,
        weight: 1,
        signal: true,
        override_rule: false,
    },
    Row {
        id: "variability",
        name: "Variability",
        category: Category::TaskElements,
        question: "How much do instances of this task vary from each other? Consider 1) variation in the problem (i.e. different starting conditions or information to consider) and 2) variation in the actions performed.",
        kind: Kind::Graded,
        weight: 1,
        signal: true,
        override_rule: false,
    },
    Row {
        id: "uncertainty_information",
        name: "Uncertainty: lacking information",
        category: Category::TaskElements,
        question: "How much uncertainty is experienced due to a lack of information? (e.g. is the ground truth is available? Is there enough information to get a clear picture of the problem?)",
        kind: Kind::Graded,
        weight: 1,
        signal: true,
        override_rule: false,
    },
    Row {
        id: "uncertainty_understanding",
        name: "Uncertainty: lacking understanding",
        category: Category::TaskElements,
        question: "How much uncertainty is experienced due to a lack of understanding? (e.g. is it clear what action is best for a given instance? Are the underlying rules of cause/effect known?)",
        kind: Kind::Graded,
        weight: 1,
        signal: true,
        override_rule: false,
    },
    Row {
        id: "noncodified_knowledge",
        name: "Presence of non-codified knowledge",
        category: Category::TaskElements,
        question: "Does this task require knowledge that is not easily codified (e.g. experience, common sense, intuition, perceptual judgements)?",
        kind: Kind::HumanInLoop,
        weight: 1,
        signal: false,
        override_rule: false,
    },
    Row {
        id: "situation_awareness",
        name: "Maintaining situation awareness",
        category: Category::WorkerImpacts,
        question: "Is an awareness or knowledge of what happens in this task required (e.g. for subsequent tasks or to check automated output)?",
        kind: Kind::HumanInLoop,
        weight: 1,
        signal: false,
        override_rule: false,
    },
    Row {
        id: "maintaining_skills",
        name: "Maintaining skills",
        category: Category::WorkerImpacts,
        question: "Are the skills developed through this task used on other occasions (e.g. to perform the manually on occasion or step in to fix an automated error)?",
        kind: Kind::HumanInLoop,
        weight: 1,
        signal: false,
        override_rule: false,
    },
    Row {
        id: "managing_workload",
        name: "Managing workload",
        category: Category::WorkerImpacts,
        question: "Are workers currently experiencing workload that is too high or unmanageable (i.e. more work than workers feel they have the capacity to complete)?",
        kind: Kind::AutomationFlag,
        weight: 3,
        signal: false,
        override_rule: false,
    },
    Row {
        id: "risks",
        name: "Risks",
        category: Category::WorkerImpacts,
        question: "Is this considered a high stakes task with serious consequences if something goes wrong?",
        kind: Kind::HumanInLoop,
        weight: 3,
        signal: false,
        override_rule: false,
    },
    Row {
        id: "social_ethical",
        name: "Social/ethical imperatives",
        category: Category::WorkerImpacts,
        question: "Are there social or ethical reasons to prioritise human decision-making in this task context?",
        kind: Kind::HumanInLoop,
        weight: 2,
        signal: false,
        override_rule: true,
    },
    Row {
        id: "motivation_enjoyment",
        name: "Motivation and enjoyment",
        category: Category::WorkerImpacts,
        question: "Do the people performing this task find significant value or meaning in manually performing this task?",
        kind: Kind::HumanInLoop,
        weight: 2,
        signal: false,
        override_rule: false,
    },
    Row {
        id: "need_scale",
        name: "Need for scale",
        category: Category::SupportNeeds,
        question: "Is there a need to perform the task at a significantly greater scale?",
        kind: Kind::AutomationFlag,
        weight: 1,
        signal: false,
        override_rule: false,
    },
    Row {
        id: "need_efficiency",
        name: "Need for efficiency",
        category: Category::SupportNeeds,
        question: "Is there a need to reduce the amount of time or resources spent on this task?",
        kind: Kind::AutomationFlag,
        weight: 1,
        signal: false,
        override_rule: false,
    },
    Row {
        id: "need_accuracy",
        name: "Need for maintaining accuracy",
        category: Category::SupportNeeds,
        question: "Is there a need to maintain the current standard of accuracy, precision or quality?",
        kind: Kind::HumanInLoop,
        weight: 1,
        signal: false,
        override_rule: false,
    },
    Row {
        id: "need_innovation",
        name: "Need for innovation",
        category: Category::SupportNeeds,
        question: "Is there a need to create a new product or make a breakthrough or novel discovery in this task?",
        kind: Kind::Collaborative,
        weight: 1,
        signal: true,
        override_rule: false,
    },
];

fn point_map(kind: Kind) -> PointMap {
    let pts = HalfPoints::from_points;
    match kind {
        Kind::HumanInLoop => {
            PointMap::from([(ResponseLevel::No, pts(0)), (ResponseLevel::Yes, pts(2))])
        }
        Kind::Collaborative => {
            PointMap::from([(ResponseLevel::No, pts(0)), (ResponseLevel::Yes, pts(4))])
        }
        Kind::AutomationFlag => {
            PointMap::from([(ResponseLevel::No, pts(0)), (ResponseLevel::Yes, pts(0))])
        }
        Kind::Graded => PointMap::from([
            (ResponseLevel::Low, pts(0)),
            (ResponseLevel::Medium, pts(2)),
            (ResponseLevel::High, pts(4)),
        ]),
    }
}

fn build() -> Rubric {
    let criteria = ROWS
        .iter()
        .map(|row| {
            let scale = match row.kind {
                Kind::Graded => Scale::Graded,
                _ => Scale::Binary,
            };
            let collab_signal = row.signal.then_some(match scale {
                Scale::Graded => ResponseLevel::High,
                Scale::Binary => ResponseLevel::Yes,
            });
            Criterion {
                id: row.id.to_string(),
                name: row.name.to_string(),
                category: row.category,
                question: row.question.to_string(),
                scale,
                point_map: point_map(row.kind),
                weight: row.weight,
                collab_signal,
                override_rule: row
                    .override_rule
                    .then_some(OverrideRule::NeverAutomationOnYes),
                auto_flag: matches!(row.kind, Kind::AutomationFlag),
            }
        })
        .collect();
    Rubric {
        id: BUILTIN_RUBRIC_ID.to_string(),
        version: BUILTIN_RUBRIC_VERSION.to_string(),
        criteria,
        thresholds: DEFAULT_THRESHOLDS,
    }
}

/// The built-in rubric with its default thresholds.
pub fn builtin_rubric() -> &'static Rubric {
    static RUBRIC: OnceLock<Rubric> = OnceLock::new();
    RUBRIC.get_or_init(build)
}

/// Writes the built-in rubric as canonical JSON.
pub fn export_catalog(path: impl AsRef<Path>) -> io::Result<()> {
    let mut text = builtin_rubric().to_json();
    text.push('\n');
    std::fs::write(path, text)
}
