//! Feedback items, the error-pattern catalog and rendering.

mod catalog;
mod prose;

use serde::Serialize;

pub use catalog::{default_catalog, detect_patterns, CatalogError, PatternCatalog, PatternMatch, PatternRule};
pub use prose::{countermodel_prose, render_feedback, FeedbackDocument, RenderedItem, Verbosity};

use crate::prover::Countermodel;
use crate::span::Span;

/// The five kinds of feedback.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Category {
    /// (i) the sentence could not be read.
    Textual,
    /// (ii) ill-typed or undeclared names.
    Type,
    /// (iii) a step that could not be verified.
    UnverifiedStep,
    /// (iv) a step matching a known mistake.
    ErrorPattern,
    /// (v) the goal was not reached.
    GoalStatus,
}

impl Category {
    pub fn code(self) -> &'static str {
        match self {
            Category::Textual => "i",
            Category::Type => "ii",
            Category::UnverifiedStep => "iii",
            Category::ErrorPattern => "iv",
            Category::GoalStatus => "v",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Category::Textual => "text",
            Category::Type => "type",
            Category::UnverifiedStep => "unverified step",
            Category::ErrorPattern => "typical mistake",
            Category::GoalStatus => "goal",
        }
    }

    /// Categories whose errors keep a proof from being accepted.
    pub fn blocks_acceptance(self) -> bool {
        !matches!(self, Category::ErrorPattern)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FeedbackItem {
    pub category: Category,
    pub severity: Severity,
    /// Index of the sentence the item is about.
    pub sentence: usize,
    /// Byte range inside that sentence.
    pub span: Span,
    pub message: String,
    pub pattern_id: Option<String>,
    pub countermodel: Option<Countermodel>,
    pub hint: Option<String>,
    /// Position (in the report's item list) of the item this one refines.
    pub refines: Option<usize>,
    /// Rules the step checker tried or used.
    pub trace: Vec<String>,
}

impl FeedbackItem {
    pub fn new(category: Category, sentence: usize, span: Span, message: impl Into<String>) -> Self {
        FeedbackItem {
            category,
            severity: Severity::Error,
            sentence,
            span,
            message: message.into(),
            pattern_id: None,
            countermodel: None,
            hint: None,
            refines: None,
            trace: Vec::new(),
        }
    }

    pub fn warning(mut self) -> Self {
        self.severity = Severity::Warning;
        self
    }

    pub fn with_hint(mut self, hint: impl Into<String>) -> Self {
        self.hint = Some(hint.into());
        self
    }

    pub fn with_countermodel(mut self, model: Option<Countermodel>) -> Self {
        self.countermodel = model;
        self
    }

    pub fn with_trace(mut self, trace: Vec<String>) -> Self {
        self.trace = trace;
        self
    }

    pub fn blocks_acceptance(&self) -> bool {
        self.severity == Severity::Error && self.category.blocks_acceptance()
    }
}
