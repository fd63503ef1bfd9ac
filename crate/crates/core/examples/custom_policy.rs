//! Re-run the calibration corpus under alternative policies: flat weights,
//! a stricter point map for one criterion, and scaled thresholds.

use std::error::Error;
use std::io::Write;

use modeadvisor::corpus::builtin_corpus_report;
use modeadvisor::validate::validate_policy;
use modeadvisor::{builtin_rubric, HalfPoints, ResponseLevel, ScoringPolicy};

pub fn run(out: &mut dyn Write) -> Result<(), Box<dyn Error>> {
    let rubric = builtin_rubric();

    let default = builtin_corpus_report(&rubric.default_policy());
    writeln!(
        out,
        "default policy: {}/9 agree, rho {:.3}",
        default.agreement_count, default.rank_correlation
    )?;

    let mut flat = ScoringPolicy::new(rubric.thresholds);
    flat.weight_overrides = rubric.criteria.iter().map(|c| (c.id.clone(), 1)).collect();
    let report = builtin_corpus_report(&flat);
    writeln!(out, "flat weights: {}/9 agree", report.agreement_count)?;

    // Medium and High both worth 2 points on component complexity.
    let mut merged = rubric.default_policy();
    merged.point_overrides.insert(
        "component_complexity".into(),
        [
            (ResponseLevel::Low, HalfPoints::from_points(0)),
            (ResponseLevel::Medium, HalfPoints::from_points(2)),
            (ResponseLevel::High, HalfPoints::from_points(2)),
        ]
        .into(),
    );
    let problems = validate_policy(&merged, rubric);
    if !problems.is_empty() {
        return Err(format!("invalid policy: {problems:?}").into());
    }
    let report = builtin_corpus_report(&merged);
    writeln!(
        out,
        "merged M/H on component_complexity: {}/9 agree",
        report.agreement_count
    )?;

    let scaled = rubric.default_policy().scaled(rubric, 10);
    let report = builtin_corpus_report(&scaled);
    writeln!(
        out,
        "weights and thresholds x10: {}/9 agree",
        report.agreement_count
    )?;
    writeln!(out)?;
    write!(out, "{report}")?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run(&mut std::io::stdout())
}
