//! Write the built-in rubric as canonical JSON and load it back.
//!
//! ```text
//! cargo run --example export_catalog [path]
//! ```

use std::error::Error;
use std::io::Write;
use std::path::Path;

use modeadvisor::{builtin_rubric, export_catalog, validate_rubric, Rubric};

pub fn run(path: &Path, out: &mut dyn Write) -> Result<(), Box<dyn Error>> {
    export_catalog(path)?;
    let rubric = Rubric::from_json(&std::fs::read_to_string(path)?)?;
    assert_eq!(&rubric, builtin_rubric());
    assert!(validate_rubric(&rubric).is_empty());
    writeln!(
        out,
        "wrote {} ({} criteria, version {})",
        path.display(),
        rubric.criteria.len(),
        rubric.version
    )?;
    for c in rubric.criteria.iter().take(3) {
        writeln!(out, "  {:<24} {}", c.id, c.question)?;
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let path = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join(modeadvisor::catalog::CATALOG_FILE_NAME));
    run(&path, &mut std::io::stdout())
}
