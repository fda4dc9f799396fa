//! Canonical surface form of classified sentences.

use super::sentence::{Announcement, Method, SentenceAst, SentenceKind};
use crate::logic::{Formula, Sort};

fn capitalized(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

fn sort_noun(sort: Sort, plural: bool) -> &'static str {
    match (sort, plural) {
        (Sort::Integer, false) => "an integer",
        (Sort::Integer, true) => "integers",
        (Sort::Set, false) => "a set",
        (Sort::Set, true) => "sets",
        (Sort::Proposition, false) => "a proposition",
        (Sort::Proposition, true) => "propositions",
        (Sort::Pair, false) => "a pair",
        (Sort::Pair, true) => "pairs",
    }
}

fn with_cue(cue: &Option<String>, body: &str) -> String {
    match cue {
        Some(c) => format!("{} {body}", capitalized(c)),
        None => capitalized(body),
    }
}

/// Render a sentence so that classifying the result gives the same AST.
pub fn render_sentence(s: &SentenceAst) -> String {
    let text = match &s.kind {
        SentenceKind::Declare { vars, sort } => {
            format!("Let {} be {}", vars.join(", "), sort_noun(*sort, vars.len() > 1))
        }
        SentenceKind::Assume { formula, let_form: true } => match formula {
            Formula::Even(t) => format!("Let {t} be even"),
            Formula::Odd(t) => format!("Let {t} be odd"),
            other => format!("Let {other}"),
        },
        SentenceKind::Assume { formula, let_form: false } => format!("Assume that {formula}"),
        SentenceKind::ExistsClaim { var, formula } => {
            with_cue(&s.cue, &format!("there is an integer {var} such that {formula}"))
        }
        SentenceKind::Pick { var, formula } => format!("Pick an integer {var} such that {formula}"),
        SentenceKind::GoalAnnounce { announcement } => match announcement {
            Announcement::Goal { formula } => format!("Prove: {formula}"),
            Announcement::Remains { formula } => format!("It remains to show: {formula}"),
            Announcement::Method { method: Method::Contraposition } => "We prove the contraposition".to_string(),
            Announcement::Method { method: Method::Contradiction } => "We argue by contradiction".to_string(),
        },
        SentenceKind::Infer { formula: Formula::False } => with_cue(&s.cue, "this is a contradiction"),
        SentenceKind::Infer { formula } => with_cue(&s.cue, &formula.to_string()),
        SentenceKind::SubproofClose => "This proves the claim".to_string(),
        SentenceKind::Qed => return "qed.".to_string(),
    };
    format!("{text}.")
}
