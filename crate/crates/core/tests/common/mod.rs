//! Independent fixtures shared by the integration tests: a hand transcription
//! of the published case grid and a table-driven scoring oracle that does not
//! touch the library's point maps.

#![allow(dead_code)]

pub mod gen;

pub const TASK_IDS: [&str; 9] = [
    "select_initial_screen",
    "determine_crystal_formed",
    "select_optimising_screen",
    "structural_annotation",
    "functional_annotation",
    "data_quality_control",
    "image_specimens",
    "transcribe_metadata",
    "metadata_quality_control",
];

/// Criterion id, weight, then one cell per task in `TASK_IDS` order.
pub const GRID: [(&str, u64, [&str; 9]); 18] = [
    ("decision", 1, ["Y", "Y", "Y", "Y", "Y", "Y", "N", "N", "Y"]),
    (
        "component_complexity",
        1,
        ["M", "L", "M-H", "M", "M", "M-H", "M", "L-M", "M"],
    ),
    (
        "dynamic_complexity",
        1,
        ["L", "H", "M-H", "L-M", "L-M", "L-M", "L", "L", "M"],
    ),
    (
        "coordinative_complexity",
        1,
        ["M-H", "M-H", "M-H", "L", "L-M", "M-H", "M", "L", "L-M"],
    ),
    (
        "variability",
        1,
        ["M-H", "L", "M-H", "M", "M", "M", "L", "M", "M"],
    ),
    (
        "uncertainty_information",
        1,
        ["L-M", "L-M", "M-H", "M", "M-H", "M", "L", "L-M", "L-M"],
    ),
    (
        "uncertainty_understanding",
        1,
        ["M-H", "L", "H", "L", "L-M", "M", "L", "L", "L"],
    ),
    (
        "noncodified_knowledge",
        1,
        ["Y", "Y", "Y", "Y", "Y", "Y", "N", "N", "Y"],
    ),
    (
        "situation_awareness",
        1,
        ["N", "N", "N", "Y", "Y", "Y", "N", "Y", "N"],
    ),
    (
        "maintaining_skills",
        1,
        ["N", "N", "N", "Y", "Y", "Y", "N", "N", "N"],
    ),
    (
        "managing_workload",
        3,
        ["N", "N", "N", "Y", "Y", "Y", "Y", "Y", "Y"],
    ),
    ("risks", 3, ["N", "N", "N", "N", "N", "N", "Y", "Y", "Y"]),
    (
        "social_ethical",
        2,
        ["N", "N", "N", "N", "N", "N", "N", "N", "N"],
    ),
    (
        "motivation_enjoyment",
        2,
        ["N", "N", "N", "Y", "Y", "N", "N", "Y", "N"],
    ),
    (
        "need_scale",
        1,
        ["N", "N", "N", "Y", "Y", "Y", "Y", "Y", "Y"],
    ),
    (
        "need_efficiency",
        1,
        ["Y", "Y", "Y", "N", "Y", "N", "Y", "Y", "N"],
    ),
    (
        "need_accuracy",
        1,
        ["Y", "Y", "Y", "Y", "Y", "Y", "Y", "Y", "Y"],
    ),
    (
        "need_innovation",
        1,
        ["N", "N", "N", "Y", "Y", "N", "N", "N", "N"],
    ),
];

/// Published totals and cluster labels, per task.
pub const PUBLISHED_TOTALS: [u64; 9] = [30, 24, 35, 35, 35, 30, 16, 25, 29];
pub const PUBLISHED_LABELS: [&str; 9] = [
    "Aug", "Aug", "Collab", "Collab", "Collab", "Aug", "Auto", "Aug", "Aug",
];

/// Totals under the default policy, hand-summed from `GRID`.
pub const COMPUTED_TOTALS: [u64; 9] = [18, 14, 25, 25, 28, 23, 12, 18, 20];

/// Spearman correlation of `COMPUTED_TOTALS` against `PUBLISHED_TOTALS`,
/// computed with an external statistics package.
pub const EXPECTED_SPEARMAN: f64 = 0.939992081999923;

pub fn task_index(task_id: &str) -> usize {
    TASK_IDS
        .iter()
        .position(|t| *t == task_id)
        .expect("known task")
}

pub fn cell(task_id: &str, criterion_id: &str) -> &'static str {
    let column = task_index(task_id);
    GRID.iter()
        .find(|row| row.0 == criterion_id)
        .expect("known criterion")
        .2[column]
}

/// Raw half-points of one cell under the default point scheme.
pub fn oracle_cell_half_points(criterion_id: &str, token: &str) -> u64 {
    const AUTO_FLAGS: [&str; 3] = ["managing_workload", "need_scale", "need_efficiency"];
    if AUTO_FLAGS.contains(&criterion_id) {
        return 0;
    }
    let yes = if criterion_id == "need_innovation" {
        8
    } else {
        4
    };
    match token {
        "N" | "L" => 0,
        "Y" => yes,
        "M" => 4,
        "H" => 8,
        "L-M" => 2,
        "M-H" => 6,
        other => panic!("unexpected cell `{other}`"),
    }
}

/// Weighted total in half-points for one task column.
pub fn oracle_task_half_points(task_id: &str, weights_all_one: bool) -> u64 {
    GRID.iter()
        .map(|(id, weight, _)| {
            let w = if weights_all_one { 1 } else { *weight };
            oracle_cell_half_points(id, cell(task_id, id)) * w
        })
        .sum()
}

/// Band label with inclusive thresholds, in whole points.
pub fn oracle_band(
    total_half_points: u64,
    automation_max: u64,
    collaboration_min: u64,
) -> &'static str {
    if total_half_points <= automation_max * 2 {
        "Auto"
    } else if total_half_points >= collaboration_min * 2 {
        "Collab"
    } else {
        "Aug"
    }
}
