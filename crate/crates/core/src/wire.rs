//! JSON shapes shared by the command line and the HTTP service.

use serde::{Deserialize, Serialize};

use crate::diagnostics::{render_feedback, RenderedItem, Verbosity};
use crate::engine::{Mark, Report, ReportStatus};
use crate::prover::VerdictStatus;
use crate::span::Span;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct CheckRequest {
    pub text: String,
    #[serde(default)]
    pub verbosity: Verbosity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SentenceView {
    pub index: usize,
    pub span: Span,
    pub excerpt: String,
    pub kind: Option<&'static str>,
    pub mark: Mark,
    /// `ok` or the code of the first blocking feedback category.
    pub label: String,
    /// `verified`, `refuted` or `unknown` for sentences that claim something.
    pub step: Option<&'static str>,
    pub rules: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResponse {
    pub schema: &'static str,
    pub status: &'static str,
    pub verbosity: Verbosity,
    pub items: Vec<RenderedItem>,
    pub sentences: Vec<SentenceView>,
}

impl CheckResponse {
    pub fn from_report(report: &Report, verbosity: Verbosity) -> Self {
        let doc = render_feedback(report, verbosity);
        let sentences = report
            .sentences
            .iter()
            .map(|s| SentenceView {
                index: s.index,
                span: s.span,
                excerpt: s.span.slice(&report.source).to_string(),
                kind: s.kind,
                mark: s.mark,
                label: s.label(&report.items),
                step: s.verdict.as_ref().map(|v| match v.status {
                    VerdictStatus::Verified => "verified",
                    VerdictStatus::Refuted(_) => "refuted",
                    VerdictStatus::Unknown => "unknown",
                }),
                rules: s.verdict.as_ref().map(|v| v.trace.clone()).unwrap_or_default(),
            })
            .collect();
        CheckResponse {
            schema: SCHEMA_VERSION,
            status: match report.status {
                ReportStatus::Accepted => "accepted",
                ReportStatus::RejectedWithFeedback => "rejected",
            },
            verbosity,
            items: doc.items,
            sentences,
        }
    }

    /// Pretty-printed JSON with a trailing newline; byte-stable for a given
    /// input.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("response serializes");
        s.push('\n');
        s
    }
}

/// A student's guess of the label of each proof sentence.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct PredictRequest {
    pub text: String,
    /// Sentence index → predicted label (`ok`, `i` … `v`).
    pub predictions: std::collections::BTreeMap<usize, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredictionView {
    pub index: usize,
    pub excerpt: String,
    pub predicted: Option<String>,
    pub actual: String,
    pub correct: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredictResponse {
    pub schema: &'static str,
    pub correct: usize,
    pub total: usize,
    pub sentences: Vec<PredictionView>,
}

impl PredictResponse {
    /// Compare predictions with the checker's labels for the proof sentences.
    pub fn compare(report: &Report, req: &PredictRequest) -> Self {
        let sentences: Vec<PredictionView> = report
            .sentences
            .iter()
            .filter(|s| s.section == crate::cnl::Section::Body)
            .map(|s| {
                let actual = s.label(&report.items);
                let predicted = req.predictions.get(&s.index).cloned();
                PredictionView {
                    index: s.index,
                    excerpt: s.span.slice(&report.source).to_string(),
                    correct: predicted.as_deref() == Some(actual.as_str()),
                    predicted,
                    actual,
                }
            })
            .collect();
        PredictResponse {
            schema: SCHEMA_VERSION,
            correct: sentences.iter().filter(|s| s.correct).count(),
            total: sentences.len(),
            sentences,
        }
    }
}
