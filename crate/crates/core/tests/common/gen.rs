//! Random rubrics and assessments, plus property checks that compare the
//! engine against plain arithmetic over the generated case.

use std::collections::BTreeMap;

use modeadvisor::model::OverrideRule;
use modeadvisor::{
    builtin_rubric, reconcile, score_assessment, sensitivity, Assessment, Category, ConflictKind,
    Criterion, Grade, HalfPoints, RaterSheet, Recommendation, ResponseLevel, Rubric, Scale,
    ScoringPolicy, Thresholds,
};
use proptest::prelude::*;

#[derive(Debug, Clone)]
pub struct RowSpec {
    pub scale: Scale,
    /// Half-points per atomic level, in scale order (N,Y or L,M,H).
    pub points: Vec<u64>,
    pub weight: u64,
    pub never_automation_on_yes: bool,
    pub auto_flag: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Atomic(usize),
    /// Mixed of atomic levels `i` and `i + 1` (graded only).
    Mixed(usize),
}

#[derive(Debug, Clone)]
pub struct CaseSpec {
    pub rows: Vec<RowSpec>,
    pub automation_max: u64,
    pub collaboration_min: u64,
    pub answers: Vec<Answer>,
}

fn row_strategy() -> impl Strategy<Value = RowSpec> {
    let binary = (0u64..=7, 1u64..=8, 1u64..=5, 0u8..6).prop_map(|(no, bump, weight, kind)| {
        let yes = (no + bump).min(8);
        RowSpec {
            scale: Scale::Binary,
            points: vec![no, yes],
            weight,
            never_automation_on_yes: kind == 0,
            auto_flag: kind == 1,
        }
    });
    let graded = (0u64..=8, 0u64..=4, 0u64..=4, 1u64..=5).prop_map(|(low, dm, dh, weight)| {
        // Steps of two half-units keep every adjacent mean exact.
        let medium = (low + 2 * dm).min(8 - (8 - low) % 2);
        let high = (medium + 2 * dh).min(8 - (8 - medium) % 2);
        RowSpec {
            scale: Scale::Graded,
            points: vec![low, medium, high],
            weight,
            never_automation_on_yes: false,
            auto_flag: false,
        }
    });
    prop_oneof![binary, graded]
}

fn answer_strategy(scale: Scale) -> BoxedStrategy<Answer> {
    match scale {
        Scale::Binary => (0usize..2).prop_map(Answer::Atomic).boxed(),
        Scale::Graded => prop_oneof![
            3 => (0usize..3).prop_map(Answer::Atomic),
            2 => (0usize..2).prop_map(Answer::Mixed),
        ]
        .boxed(),
    }
}

pub fn case_strategy() -> impl Strategy<Value = CaseSpec> {
    (
        prop::collection::vec(row_strategy(), 1..=30),
        0u64..=120,
        1u64..=120,
    )
        .prop_flat_map(|(rows, automation_max, gap)| {
            let answers: Vec<BoxedStrategy<Answer>> =
                rows.iter().map(|r| answer_strategy(r.scale)).collect();
            (
                Just(rows),
                Just(automation_max),
                Just(automation_max + gap),
                answers,
            )
                .prop_map(|(rows, automation_max, collaboration_min, answers)| {
                    CaseSpec {
                        rows,
                        automation_max,
                        collaboration_min,
                        answers,
                    }
                })
        })
}

/// A case plus one row index and a replacement answer for that row.
pub fn case_with_change() -> impl Strategy<Value = (CaseSpec, usize, Answer)> {
    case_strategy().prop_flat_map(|case| {
        let n = case.rows.len();
        (Just(case), 0..n).prop_flat_map(|(case, i)| {
            let answer = answer_strategy(case.rows[i].scale);
            (Just(case), Just(i), answer)
        })
    })
}

fn atomic(scale: Scale, i: usize) -> ResponseLevel {
    scale.atomic_levels()[i]
}

fn to_level(scale: Scale, answer: Answer) -> ResponseLevel {
    match answer {
        Answer::Atomic(i) => atomic(scale, i),
        Answer::Mixed(i) => {
            let grade = |j: usize| atomic(scale, j).grade().unwrap();
            ResponseLevel::mixed(grade(i), grade(i + 1)).unwrap()
        }
    }
}

pub fn build_rubric(case: &CaseSpec) -> Rubric {
    let criteria = case
        .rows
        .iter()
        .enumerate()
        .map(|(i, row)| Criterion {
            id: format!("c{i:02}"),
            name: format!("Criterion {i}"),
            category: Category::ALL[i % 3],
            question: format!("Question {i}?"),
            scale: row.scale,
            point_map: row
                .scale
                .atomic_levels()
                .iter()
                .zip(&row.points)
                .map(|(level, p)| (*level, HalfPoints(*p)))
                .collect::<BTreeMap<_, _>>(),
            weight: row.weight as u32,
            collab_signal: match row.scale {
                Scale::Binary => Some(ResponseLevel::Yes),
                Scale::Graded => Some(ResponseLevel::High),
            },
            override_rule: row
                .never_automation_on_yes
                .then_some(OverrideRule::NeverAutomationOnYes),
            auto_flag: row.auto_flag,
        })
        .collect();
    Rubric {
        id: "generated".into(),
        version: "0".into(),
        criteria,
        thresholds: Thresholds {
            automation_max: HalfPoints(case.automation_max),
            collaboration_min: HalfPoints(case.collaboration_min),
        },
    }
}

pub fn build_assessment(case: &CaseSpec, answers: &[Answer]) -> Assessment {
    let mut a = Assessment::new("generated", "Generated task");
    for (i, (row, answer)) in case.rows.iter().zip(answers).enumerate() {
        a.responses
            .insert(format!("c{i:02}"), to_level(row.scale, *answer));
    }
    a
}

pub fn oracle_raw(row: &RowSpec, answer: Answer) -> u64 {
    if row.auto_flag {
        return 0;
    }
    match answer {
        Answer::Atomic(i) => row.points[i],
        Answer::Mixed(i) => (row.points[i] + row.points[i + 1]) / 2,
    }
}

pub fn oracle_total(case: &CaseSpec, answers: &[Answer]) -> u64 {
    let mut total = 0;
    for (row, answer) in case.rows.iter().zip(answers) {
        total += oracle_raw(row, *answer) * row.weight;
    }
    total
}

pub fn oracle_recommendation(case: &CaseSpec, answers: &[Answer]) -> Recommendation {
    let total = oracle_total(case, answers);
    let band = if total <= case.automation_max {
        Recommendation::Automation
    } else if total >= case.collaboration_min {
        Recommendation::Collaboration
    } else {
        Recommendation::Augmentation
    };
    let vetoed = case
        .rows
        .iter()
        .zip(answers)
        .any(|(row, answer)| row.never_automation_on_yes && *answer == Answer::Atomic(1));
    if band == Recommendation::Automation && vetoed {
        Recommendation::Augmentation
    } else {
        band
    }
}

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Engine total and recommendation equal the oracle.
pub fn check_oracle_equivalence(case: &CaseSpec) -> Check {
    let rubric = build_rubric(case);
    let violations = modeadvisor::validate_rubric(&rubric);
    ensure!(
        violations.is_empty(),
        "generator produced an invalid rubric: {violations:?}"
    );
    let b = score_assessment(
        &build_assessment(case, &case.answers),
        &rubric,
        &rubric.default_policy(),
    )
    .map_err(|e| e.to_string())?;
    let expected = oracle_total(case, &case.answers);
    ensure!(
        b.total == HalfPoints(expected),
        "engine {} half-units, oracle {expected}",
        b.total.0
    );
    let rec = oracle_recommendation(case, &case.answers);
    ensure!(
        b.recommendation == rec,
        "engine {:?}, oracle {rec:?}",
        b.recommendation
    );
    Ok(())
}

/// Replacing one answer by one with at least as many raw points never lowers
/// the total or moves the recommendation towards automation.
pub fn check_monotonicity(case: &CaseSpec, row: usize, other: Answer) -> Check {
    let rubric = build_rubric(case);
    let policy = rubric.default_policy();
    let mut low = case.answers.clone();
    let mut high = case.answers.clone();
    if oracle_raw(&case.rows[row], other) >= oracle_raw(&case.rows[row], case.answers[row]) {
        high[row] = other;
    } else {
        low[row] = other;
    }
    let score = |answers: &[Answer]| {
        score_assessment(&build_assessment(case, answers), &rubric, &policy)
            .map_err(|e| e.to_string())
    };
    let (before, after) = (score(&low)?, score(&high)?);
    ensure!(
        after.total >= before.total,
        "total fell {} -> {}",
        before.total,
        after.total
    );
    ensure!(
        after.recommendation >= before.recommendation,
        "recommendation fell {:?} -> {:?}",
        before.recommendation,
        after.recommendation
    );
    Ok(())
}

/// Multiplying every weight and both thresholds by `k` multiplies totals by
/// `k` and keeps the recommendation.
pub fn check_scale_invariance(case: &CaseSpec, k: u32) -> Check {
    let rubric = build_rubric(case);
    let base = rubric.default_policy();
    let scaled = base.scaled(&rubric, k);
    let a = build_assessment(case, &case.answers);
    let b1 = score_assessment(&a, &rubric, &base).map_err(|e| e.to_string())?;
    let b2 = score_assessment(&a, &rubric, &scaled).map_err(|e| e.to_string())?;
    ensure!(
        b2.total.0 == b1.total.0 * u64::from(k),
        "{} x {k} != {}",
        b1.total,
        b2.total
    );
    ensure!(
        b1.recommendation == b2.recommendation,
        "{:?} != {:?}",
        b1.recommendation,
        b2.recommendation
    );
    Ok(())
}

/// Two rater sheets over the same random subset of built-in criteria.
pub fn rater_pair_strategy() -> impl Strategy<Value = (RaterSheet, RaterSheet)> {
    let rubric = builtin_rubric();
    let per_criterion: Vec<_> = rubric
        .criteria
        .iter()
        .map(|c| {
            let levels = c.scale.atomic_levels();
            (
                any::<bool>(),
                prop::sample::select(levels.to_vec()),
                prop::sample::select(levels.to_vec()),
            )
        })
        .collect();
    per_criterion.prop_map(move |cells| {
        let mut a = RaterSheet::new("a");
        let mut b = RaterSheet::new("b");
        for (criterion, (include, x, y)) in builtin_rubric().criteria.iter().zip(cells) {
            if include {
                a.responses.insert(criterion.id.clone(), x);
                b.responses.insert(criterion.id.clone(), y);
            }
        }
        (a, b)
    })
}

pub fn check_reconcile(a: &RaterSheet, b: &RaterSheet) -> Check {
    let rubric = builtin_rubric();
    let ab = reconcile(a, b, rubric).map_err(|e| e.to_string())?;
    let ba = reconcile(b, a, rubric).map_err(|e| e.to_string())?;
    ensure!(ab == ba, "reconcile is order dependent: {ab:?} vs {ba:?}");
    for (id, x) in &a.responses {
        let y = b.responses[id];
        let in_consensus = ab.consensus.contains_key(id);
        let conflict = ab.conflicts.iter().find(|c| &c.criterion_id == id);
        ensure!(
            in_consensus != conflict.is_some(),
            "{id} must be either consensus or conflict"
        );
        let polar = matches!(
            (x, y),
            (ResponseLevel::Yes, ResponseLevel::No)
                | (ResponseLevel::No, ResponseLevel::Yes)
                | (ResponseLevel::Low, ResponseLevel::High)
                | (ResponseLevel::High, ResponseLevel::Low)
        );
        ensure!(
            conflict.is_some() == polar,
            "{id}: {x} vs {y} polar={polar}"
        );
        if let Some(c) = conflict {
            ensure!(c.kind == ConflictKind::Polar, "{id}: conflict kind");
        }
        if let Some(level) = ab.consensus.get(id) {
            let expected = if x == &y {
                *x
            } else {
                ResponseLevel::mixed(x.grade().unwrap(), y.grade().unwrap()).unwrap()
            };
            ensure!(*level == expected, "{id}: {x} vs {y} gave {level}");
        }
    }
    ensure!(
        ab.consensus.len() + ab.conflicts.len() == a.responses.len(),
        "criteria lost or invented"
    );
    Ok(())
}

/// Sensitivity findings equal the brute-force set of single atomic changes
/// that alter the recommendation, in the documented order.
pub fn check_sensitivity(
    assessment: &Assessment,
    rubric: &Rubric,
    policy: &ScoringPolicy,
) -> Check {
    let baseline = score_assessment(assessment, rubric, policy).map_err(|e| e.to_string())?;
    let mut expected = Vec::new();
    for criterion in &rubric.criteria {
        let current = assessment.responses[&criterion.id];
        for level in criterion.scale.atomic_levels() {
            if *level == current {
                continue;
            }
            let mut variant = assessment.clone();
            variant.responses.insert(criterion.id.clone(), *level);
            let b = score_assessment(&variant, rubric, policy).map_err(|e| e.to_string())?;
            if b.recommendation != baseline.recommendation {
                let swing = b.total.0.abs_diff(baseline.total.0);
                expected.push((
                    swing,
                    criterion.id.clone(),
                    *level,
                    b.total,
                    b.recommendation,
                ));
            }
        }
    }
    // Stable sort keeps rubric order inside equal swings.
    expected.sort_by_key(|x| std::cmp::Reverse(x.0));
    let found = sensitivity(assessment, rubric, policy).map_err(|e| e.to_string())?;
    ensure!(
        found.len() == expected.len(),
        "{} findings, brute force {}",
        found.len(),
        expected.len()
    );
    for (f, (swing, id, level, total, rec)) in found.iter().zip(&expected) {
        ensure!(
            &f.criterion_id == id
                && f.to_response == *level
                && f.new_total == *total
                && f.new_recommendation == *rec,
            "finding {f:?} != expected {id} -> {level}"
        );
        ensure!(f.delta.magnitude() == *swing, "{id}: delta {}", f.delta);
        ensure!(
            f.from_response == assessment.responses[id],
            "{id}: from_response"
        );
        ensure!(
            f.new_recommendation != baseline.recommendation,
            "{id}: finding does not change recommendation"
        );
    }
    Ok(())
}

/// Complete random assessments of the built-in rubric.
pub fn builtin_assessment_strategy() -> impl Strategy<Value = Assessment> {
    let per_criterion: Vec<BoxedStrategy<ResponseLevel>> = builtin_rubric()
        .criteria
        .iter()
        .map(|c| {
            let scale = c.scale;
            answer_strategy(scale)
                .prop_map(move |a| to_level(scale, a))
                .boxed()
        })
        .collect();
    per_criterion.prop_map(|levels| {
        let mut a = Assessment::new("random", "Random task");
        for (c, level) in builtin_rubric().criteria.iter().zip(levels) {
            a.responses.insert(c.id.clone(), level);
        }
        a
    })
}

pub fn any_level() -> impl Strategy<Value = ResponseLevel> {
    prop_oneof![
        Just(ResponseLevel::No),
        Just(ResponseLevel::Yes),
        Just(ResponseLevel::Low),
        Just(ResponseLevel::Medium),
        Just(ResponseLevel::High),
        Just(ResponseLevel::mixed(Grade::Low, Grade::Medium).unwrap()),
        Just(ResponseLevel::mixed(Grade::Medium, Grade::High).unwrap()),
    ]
}
