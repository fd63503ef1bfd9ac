//! `modeadvisor` command line.
//!
//! Exit codes: 0 success, 1 validation violations, 2 unresolved rater
//! conflicts, 3 I/O, parse or usage failure.

use std::ffi::OsString;
use std::io::Write;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};

use crate::catalog::{builtin_rubric, export_catalog};
use crate::corpus::{
    corpus_report, load_corpus, parse_corpus_csv, parse_corpus_json, tasks_from_assessments,
    CorpusTask,
};
use crate::engine::{score_assessment, sensitivity, ScoreError};
use crate::model::{Assessment, Conflict, RaterSheet, Rubric};
use crate::reconcile::reconcile;
use crate::report::{render_findings, render_report, ReportFormat};
use crate::service::{serve, CorsOrigins, ServiceConfig};
use crate::validate::{validate_assessment, validate_rubric, Violation};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATIONS: u8 = 1;
pub const EXIT_CONFLICTS: u8 = 2;
pub const EXIT_FAILURE: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "modeadvisor",
    version,
    about = "Recommend a human-AI interaction mode from a criteria rubric"
)]
struct Cli {
    /// Rubric JSON file (defaults to the built-in rubric)
    #[arg(long, global = true, env = "MODEADVISOR_RUBRIC")]
    rubric: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Md,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> ReportFormat {
        match f {
            FormatArg::Json => ReportFormat::Json,
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Md => ReportFormat::Markdown,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableFormat {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a rubric or assessment file
    Validate { file: PathBuf },
    /// Score a complete assessment
    Score {
        assessment: PathBuf,
        #[arg(long, value_enum, default_value = "md")]
        format: FormatArg,
    },
    /// Reconcile two rater sheets into a consensus assessment
    Reconcile {
        first: PathBuf,
        second: PathBuf,
        /// Where to write the consensus assessment (stdout if omitted)
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List single-response changes that alter the recommendation
    Sensitivity {
        assessment: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: TableFormat,
    },
    /// Score the calibration corpus and compare with published labels
    Corpus {
        /// Corpus file (.json array or .csv table); built-in corpus if omitted
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: TableFormat,
    },
    /// Write the built-in rubric as canonical JSON
    ExportRubric { path: PathBuf },
    /// Run the HTTP assessment service
    Serve {
        #[arg(long, env = "MODEADVISOR_PORT", default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        /// Allowed browser origin (repeatable; any origin if omitted)
        #[arg(long = "cors-origin")]
        cors_origins: Vec<String>,
        /// Session snapshot file, loaded on start and written on shutdown
        #[arg(long)]
        state: Option<PathBuf>,
        /// Directory of static files to serve alongside the API
        #[arg(long)]
        static_dir: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Violations(Vec<String>),
    Conflicts(Vec<Conflict>),
    /// Conflicts already written to stdout.
    ConflictsReported,
    Fatal(String),
}

impl Failure {
    fn fatal(context: impl std::fmt::Display, err: impl std::fmt::Display) -> Failure {
        Failure::Fatal(format!("{context}: {err}"))
    }
}

impl From<ScoreError> for Failure {
    fn from(err: ScoreError) -> Failure {
        match err {
            ScoreError::UnresolvedConflicts(conflicts) => Failure::Conflicts(conflicts),
            ScoreError::MissingPoints { .. } | ScoreError::InexactMixed { .. } => {
                Failure::Fatal(err.to_string())
            }
            other => Failure::Violations(vec![other.to_string()]),
        }
    }
}

fn violations(list: Vec<Violation>) -> Result<(), Failure> {
    if list.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violations(
            list.iter().map(ToString::to_string).collect(),
        ))
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::fatal(path.display(), e))
}

fn load_rubric(path: Option<&Path>) -> Result<Rubric, Failure> {
    let Some(path) = path else {
        return Ok(builtin_rubric().clone());
    };
    let rubric = Rubric::from_json(&read(path)?).map_err(|e| Failure::fatal(path.display(), e))?;
    violations(validate_rubric(&rubric))?;
    Ok(rubric)
}

fn load_assessment(path: &Path) -> Result<Assessment, Failure> {
    Assessment::from_json(&read(path)?).map_err(|e| Failure::fatal(path.display(), e))
}

fn write_conflicts(out: &mut dyn Write, conflicts: &[Conflict]) -> std::io::Result<()> {
    writeln!(out, "{} unresolved conflict(s):", conflicts.len())?;
    for c in conflicts {
        writeln!(
            out,
            "  {}: {} vs {} ({:?})",
            c.criterion_id,
            c.responses[0].label(),
            c.responses[1].label(),
            c.kind
        )?;
    }
    Ok(())
}

fn io_fail(e: std::io::Error) -> Failure {
    Failure::fatal("write", e)
}

/// Parses `argv` (including the program name) and runs one command.
/// Returns the process exit code.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    if !text.contains("Usage:") {
                        let _ = writeln!(err, "\n{}", Cli::command().render_usage());
                    }
                    EXIT_FAILURE
                }
            };
        }
    };
    match run(cli, out) {
        Ok(()) => EXIT_OK,
        Err(Failure::Violations(list)) => {
            let _ = writeln!(err, "{} violation(s):", list.len());
            for v in list {
                let _ = writeln!(err, "  {v}");
            }
            EXIT_VIOLATIONS
        }
        Err(Failure::Conflicts(conflicts)) => {
            let _ = write_conflicts(err, &conflicts);
            EXIT_CONFLICTS
        }
        Err(Failure::ConflictsReported) => EXIT_CONFLICTS,
        Err(Failure::Fatal(message)) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_FAILURE
        }
    }
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    let rubric_path = cli.rubric.as_deref();
    match cli.command {
        Command::Validate { file } => {
            let text = read(&file)?;
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| Failure::fatal(file.display(), e))?;
            if value.get("criteria").is_some() {
                let rubric =
                    Rubric::from_json(&text).map_err(|e| Failure::fatal(file.display(), e))?;
                violations(validate_rubric(&rubric))?;
                writeln!(
                    out,
                    "rubric `{}` is valid ({} criteria)",
                    rubric.id,
                    rubric.criteria.len()
                )
                .map_err(io_fail)?;
            } else {
                let rubric = load_rubric(rubric_path)?;
                let assessment =
                    Assessment::from_json(&text).map_err(|e| Failure::fatal(file.display(), e))?;
                if !assessment.conflicts.is_empty() {
                    return Err(Failure::Conflicts(assessment.conflicts));
                }
                violations(validate_assessment(&assessment, &rubric))?;
                writeln!(
                    out,
                    "assessment `{}` is complete and valid",
                    assessment.task_id
                )
                .map_err(io_fail)?;
            }
        }
        Command::Score { assessment, format } => {
            let rubric = load_rubric(rubric_path)?;
            let assessment = load_assessment(&assessment)?;
            if !assessment.conflicts.is_empty() {
                return Err(Failure::Conflicts(assessment.conflicts));
            }
            violations(validate_assessment(&assessment, &rubric))?;
            let policy = rubric.default_policy();
            let breakdown = score_assessment(&assessment, &rubric, &policy)?;
            let findings = sensitivity(&assessment, &rubric, &policy)?;
            let doc = render_report(&breakdown, &findings, format.into());
            out.write_all(doc.body.as_bytes()).map_err(io_fail)?;
        }
        Command::Reconcile {
            first,
            second,
            output,
        } => {
            let rubric = load_rubric(rubric_path)?;
            let load_sheet = |path: &Path| -> Result<RaterSheet, Failure> {
                serde_json::from_str(&read(path)?).map_err(|e| Failure::fatal(path.display(), e))
            };
            let (a, b) = (load_sheet(&first)?, load_sheet(&second)?);
            let outcome =
                reconcile(&a, &b, &rubric).map_err(|e| Failure::Violations(vec![e.to_string()]))?;
            let task_id = a
                .task_id
                .clone()
                .or(b.task_id.clone())
                .unwrap_or_else(|| "reconciled".into());
            let task_name = a
                .task_name
                .clone()
                .or(b.task_name.clone())
                .unwrap_or_else(|| task_id.clone());
            let conflicts = outcome.conflicts.clone();
            let assessment = outcome.into_assessment(&task_id, &task_name);
            let text = assessment.to_json() + "\n";
            let Some(path) = output else {
                out.write_all(text.as_bytes()).map_err(io_fail)?;
                return if conflicts.is_empty() {
                    Ok(())
                } else {
                    Err(Failure::Conflicts(conflicts))
                };
            };
            std::fs::write(&path, text).map_err(|e| Failure::fatal(path.display(), e))?;
            writeln!(out, "consensus written to {}", path.display()).map_err(io_fail)?;
            if !conflicts.is_empty() {
                write_conflicts(out, &conflicts).map_err(io_fail)?;
                return Err(Failure::ConflictsReported);
            }
        }
        Command::Sensitivity { assessment, format } => {
            let rubric = load_rubric(rubric_path)?;
            let assessment = load_assessment(&assessment)?;
            if !assessment.conflicts.is_empty() {
                return Err(Failure::Conflicts(assessment.conflicts));
            }
            violations(validate_assessment(&assessment, &rubric))?;
            let findings = sensitivity(&assessment, &rubric, &rubric.default_policy())?;
            let text = match format {
                TableFormat::Text => render_findings(&findings),
                TableFormat::Json => {
                    serde_json::to_string_pretty(&findings).expect("findings serialize") + "\n"
                }
            };
            out.write_all(text.as_bytes()).map_err(io_fail)?;
        }
        Command::Corpus { input, format } => {
            let rubric = load_rubric(rubric_path)?;
            let tasks = match input {
                None => load_corpus(),
                Some(path) => load_corpus_file(&path)?,
            };
            for task in &tasks {
                violations(validate_assessment(&task.assessment, &rubric))?;
            }
            let report = corpus_report(&tasks, &rubric, &rubric.default_policy())?;
            let text = match format {
                TableFormat::Text => report.to_string(),
                TableFormat::Json => {
                    serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
                }
            };
            out.write_all(text.as_bytes()).map_err(io_fail)?;
        }
        Command::ExportRubric { path } => {
            export_catalog(&path).map_err(|e| Failure::fatal(path.display(), e))?;
            writeln!(out, "wrote {}", path.display()).map_err(io_fail)?;
        }
        Command::Serve {
            port,
            host,
            cors_origins,
            state,
            static_dir,
        } => {
            let rubric = load_rubric(rubric_path)?;
            let config = ServiceConfig {
                addr: SocketAddr::new(host, port),
                rubric,
                cors: if cors_origins.is_empty() {
                    CorsOrigins::Any
                } else {
                    CorsOrigins::List(cors_origins)
                },
                state_file: state,
                static_dir,
            };
            let runtime =
                tokio::runtime::Runtime::new().map_err(|e| Failure::fatal("runtime", e))?;
            runtime
                .block_on(serve(config))
                .map_err(|e| Failure::fatal("serve", e))?;
        }
    }
    Ok(())
}

fn load_corpus_file(path: &Path) -> Result<Vec<CorpusTask>, Failure> {
    let is_csv = path
        .extension()
        .is_some_and(|ext| ext.eq_ignore_ascii_case("csv"));
    let result = if is_csv {
        let file = std::fs::File::open(path).map_err(|e| Failure::fatal(path.display(), e))?;
        parse_corpus_csv(file).and_then(tasks_from_assessments)
    } else {
        parse_corpus_json(&read(path)?)
    };
    result.map_err(|e| Failure::fatal(path.display(), e))
}
