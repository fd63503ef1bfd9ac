//! Score one assessment and print the Markdown report.
//!
//! ```text
//! cargo run --example score_task [task_id]
//! ```

use std::error::Error;
use std::io::Write;

use modeadvisor::{
    builtin_rubric, corpus_task, render_report, score_assessment, sensitivity, ReportFormat,
};

pub fn run(task_id: &str, out: &mut dyn Write) -> Result<(), Box<dyn Error>> {
    let rubric = builtin_rubric();
    let policy = rubric.default_policy();
    let task = corpus_task(task_id).ok_or_else(|| format!("no corpus task `{task_id}`"))?;

    let breakdown = score_assessment(&task.assessment, rubric, &policy)?;
    writeln!(
        out,
        "{}: {} points -> {}",
        breakdown.task_id, breakdown.total, breakdown.recommendation
    )?;

    let findings = sensitivity(&task.assessment, rubric, &policy)?;
    let report = render_report(&breakdown, &findings, ReportFormat::Markdown);
    writeln!(out)?;
    out.write_all(report.body.as_bytes())?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let task = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "image_specimens".into());
    run(&task, &mut std::io::stdout())
}
