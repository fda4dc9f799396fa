//! Proof checking for short proofs written in a controlled fragment of English.
//!
//! A submission is split into sentences ([`cnl`]), each proof sentence is
//! checked against what has been established so far ([`prover`]), and the
//! outcome is reported as feedback items ([`diagnostics`]).

pub mod algebra;
pub mod cnl;
pub mod diagnostics;
pub mod engine;
pub mod logic;
pub mod prover;
pub mod span;
pub mod wire;

pub use cnl::{parse_document, scan_document, ProblemDocument};
pub use diagnostics::{Category, FeedbackItem, Severity, Verbosity};
pub use engine::{check_document, check_source, Engine, Report, ReportStatus};
pub use span::Span;
