//! Two raters answer independently; one-step disagreements are averaged and
//! opposite answers must be settled before the task can be scored.

use std::error::Error;
use std::io::Write;

use modeadvisor::{
    builtin_rubric, corpus_task, reconcile, score_assessment, RaterSheet, ResponseLevel, ScoreError,
};

pub fn run(out: &mut dyn Write) -> Result<(), Box<dyn Error>> {
    let rubric = builtin_rubric();
    let task = corpus_task("image_specimens").ok_or("missing corpus task")?;

    let mut first = RaterSheet::new("rater-a");
    for (id, level) in &task.assessment.responses {
        first = first.with_response(id, *level);
    }
    let second = first
        .clone()
        .with_response("coordinative_complexity", ResponseLevel::High)
        .with_response("risks", ResponseLevel::No);

    let outcome = reconcile(&first, &second, rubric)?;
    writeln!(
        out,
        "averaged: coordinative_complexity = {}",
        outcome.consensus["coordinative_complexity"]
    )?;
    for c in &outcome.conflicts {
        writeln!(
            out,
            "conflict: {} ({} vs {})",
            c.criterion_id, c.responses[0], c.responses[1]
        )?;
    }

    let mut assessment =
        outcome.into_assessment(&task.assessment.task_id, &task.assessment.task_name);
    match score_assessment(&assessment, rubric, &rubric.default_policy()) {
        Err(ScoreError::UnresolvedConflicts(c)) => {
            writeln!(out, "blocked: {} conflict(s) open", c.len())?
        }
        other => return Err(format!("expected a conflict, got {other:?}").into()),
    }

    // The raters discuss and agree on Yes.
    assessment.conflicts.clear();
    assessment
        .responses
        .insert("risks".into(), ResponseLevel::Yes);
    let b = score_assessment(&assessment, rubric, &rubric.default_policy())?;
    writeln!(out, "agreed: {} points -> {}", b.total, b.recommendation)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run(&mut std::io::stdout())
}
