//! Which single answers would change the recommendation, and a one-off
//! what-if that leaves the assessment untouched.

use std::error::Error;
use std::io::Write;

use modeadvisor::report::render_findings;
use modeadvisor::{builtin_rubric, corpus_task, sensitivity, what_if, ResponseLevel};

pub fn run(out: &mut dyn Write) -> Result<(), Box<dyn Error>> {
    let rubric = builtin_rubric();
    let policy = rubric.default_policy();

    for task_id in ["transcribe_metadata", "data_quality_control"] {
        let task = corpus_task(task_id).ok_or("missing corpus task")?;
        writeln!(out, "== {task_id}")?;
        out.write_all(
            render_findings(&sensitivity(&task.assessment, rubric, &policy)?).as_bytes(),
        )?;
    }

    let image = corpus_task("image_specimens").ok_or("missing corpus task")?;
    let w = what_if(
        &image.assessment,
        rubric,
        &policy,
        "variability",
        ResponseLevel::High,
    )?;
    writeln!(
        out,
        "image_specimens, variability {} -> {}: {} points ({}) -> {}",
        w.from_response, w.to_response, w.new_total, w.delta, w.new_recommendation
    )?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run(&mut std::io::stdout())
}
