//! The nine calibration tasks scored under the default policy, side by side
//! with their published totals and labels.

use std::error::Error;
use std::io::Write;

use modeadvisor::{builtin_rubric, corpus_report, load_corpus};

pub fn run(out: &mut dyn Write) -> Result<(), Box<dyn Error>> {
    let rubric = builtin_rubric();
    let report = corpus_report(&load_corpus(), rubric, &rubric.default_policy())?;
    write!(out, "{report}")?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run(&mut std::io::stdout())
}
