//! Turning a report into text for students.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Category, Severity};
use crate::engine::{Mark, Report, ReportStatus};
use crate::prover::Countermodel;
use crate::span::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verbosity {
    Terse,
    #[default]
    Explained,
}

impl std::str::FromStr for Verbosity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "terse" => Ok(Verbosity::Terse),
            "explained" => Ok(Verbosity::Explained),
            other => Err(format!("unknown verbosity '{other}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RenderedItem {
    pub category: Category,
    pub code: &'static str,
    pub severity: Severity,
    pub sentence: usize,
    pub span: Span,
    /// The source text under `span`.
    pub excerpt: String,
    pub message: String,
    pub pattern_id: Option<String>,
    pub countermodel: Option<Countermodel>,
    pub refines: Option<usize>,
    /// Present only in explained mode.
    pub hint: Option<String>,
    pub countermodel_text: Option<String>,
    pub trace: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FeedbackDocument {
    pub status: ReportStatus,
    pub verbosity: Verbosity,
    pub items: Vec<RenderedItem>,
    /// `(sentence index, excerpt, label)` for every sentence.
    pub sentences: Vec<(usize, String, String)>,
}

fn truth(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

/// Describe a countermodel as a situation the student can picture.
pub fn countermodel_prose(model: &Countermodel) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut tail = String::new();
    match model {
        Countermodel::Propositional { assignment } => {
            parts.extend(assignment.iter().map(|(p, b)| format!("{p} {}", truth(*b))));
        }
        Countermodel::SetScenario { memberships, propositions, distinct } => {
            for m in memberships {
                let rel = if m.member { "∈" } else { "∉" };
                parts.push(format!("{} {rel} {}", m.element, m.set));
            }
            parts.extend(propositions.iter().map(|(p, b)| format!("{p} {}", truth(*b))));
            if distinct.len() > 1 {
                tail = format!(", where {} are different elements", join_and(distinct));
            }
        }
    }
    format!(
        "Consider: {}{tail}. Then all your assumptions hold but your claim fails.",
        parts.join(", ")
    )
}

fn join_and(names: &[String]) -> String {
    match names {
        [] => String::new(),
        [one] => one.clone(),
        [init @ .., last] => format!("{} and {last}", init.join(", ")),
    }
}

/// Render every item of `report`; explained mode adds hints, countermodel
/// prose and the rules the checker tried.
pub fn render_feedback(report: &Report, verbosity: Verbosity) -> FeedbackDocument {
    let explained = verbosity == Verbosity::Explained;
    let items = report
        .items
        .iter()
        .map(|i| RenderedItem {
            category: i.category,
            code: i.category.code(),
            severity: i.severity,
            sentence: i.sentence,
            span: i.span,
            excerpt: i.span.slice(&report.source).to_string(),
            message: i.message.clone(),
            pattern_id: i.pattern_id.clone(),
            countermodel: i.countermodel.clone(),
            refines: i.refines,
            hint: if explained { i.hint.clone() } else { None },
            countermodel_text: if explained { i.countermodel.as_ref().map(countermodel_prose) } else { None },
            trace: if explained && !i.trace.is_empty() { Some(i.trace.clone()) } else { None },
        })
        .collect();
    let sentences = report
        .sentences
        .iter()
        .map(|s| (s.index, s.span.slice(&report.source).to_string(), s.label(&report.items)))
        .collect();
    FeedbackDocument { status: report.status, verbosity, items, sentences }
}

impl FeedbackDocument {
    /// Plain text for a terminal.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let verdict = match self.status {
            ReportStatus::Accepted => "accepted",
            ReportStatus::RejectedWithFeedback => "rejected",
        };
        let _ = writeln!(out, "{verdict}");
        for item in &self.items {
            let sev = match item.severity {
                Severity::Error => "",
                Severity::Warning => " warning",
            };
            let _ = writeln!(
                out,
                "sentence {} [{}{}] {}: {}",
                item.sentence + 1,
                item.code,
                sev,
                item.category.title(),
                item.message
            );
            if !item.excerpt.is_empty() {
                let _ = writeln!(out, "    > {}", item.excerpt);
            }
            if let Some(id) = &item.pattern_id {
                let _ = writeln!(out, "    pattern: {id}");
            }
            if let Some(text) = &item.countermodel_text {
                let _ = writeln!(out, "    {text}");
            }
            if let Some(hint) = &item.hint {
                let _ = writeln!(out, "    hint: {hint}");
            }
            if let Some(trace) = &item.trace {
                let _ = writeln!(out, "    rules tried: {}", trace.join(", "));
            }
        }
        out
    }
}

impl Mark {
    pub fn symbol(self) -> &'static str {
        match self {
            Mark::Ok => "ok",
            Mark::Warning => "warning",
            Mark::Error => "error",
        }
    }
}
