//! Criteria-based recommendation of a human-AI interaction mode:
//! automation, augmentation or collaboration.
//!
//! A [`Rubric`] lists criteria (scoring questions with a response scale,
//! point map and weight). An [`Assessment`] answers every criterion for one
//! task. [`score_assessment`] turns it into a weighted total in exact
//! half-point units, classifies the total into a band, applies the
//! never-automation override and reports collaboration signals.
//!
//! ```
//! use modeadvisor::{builtin_rubric, corpus_task, score_assessment, Recommendation};
//!
//! let rubric = builtin_rubric();
//! let task = corpus_task("image_specimens").unwrap();
//! let breakdown = score_assessment(&task.assessment, rubric, &rubric.default_policy()).unwrap();
//! assert_eq!(breakdown.total.to_string(), "12.0");
//! assert_eq!(breakdown.recommendation, Recommendation::Automation);
//! ```

pub mod catalog;
pub mod cli;
pub mod corpus;
pub mod engine;
pub mod model;
pub mod reconcile;
pub mod report;
pub mod response;
pub mod service;
pub mod validate;

pub use catalog::{builtin_rubric, export_catalog};
pub use corpus::{corpus_report, corpus_task, load_corpus, CaseStudy, CorpusReport, CorpusTask};
pub use engine::{
    apply_overrides, classify, collaboration_signals, points_for, provisional_score,
    score_assessment, sensitivity, what_if, ScoreBreakdown, ScoreError, SensitivityFinding, WhatIf,
};
pub use model::{
    Assessment, Category, Conflict, ConflictKind, Criterion, HalfPoints, PointDelta, RaterSheet,
    Recommendation, Rubric, ScoringPolicy, Thresholds,
};
pub use reconcile::{reconcile, Reconciliation};
pub use report::{render_report, ReportDocument, ReportFormat};
pub use response::{parse_response, Grade, ResponseLevel, Scale};
pub use validate::{validate_assessment, validate_rubric, Violation};
