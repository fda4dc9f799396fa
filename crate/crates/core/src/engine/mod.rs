//! Running a whole submission through the checker.

mod state;

use std::sync::OnceLock;

use serde::Serialize;

pub use state::{apply_sentence, FrameMethod, FrameOrigin, GoalFrame, ProofState, StepEnv, StepOutcome};

use crate::cnl::{scan_document, Announcement, DocumentError, ProblemDocument, Section, SentenceAst, SentenceError, SentenceKind};
use crate::diagnostics::{default_catalog, Category, FeedbackItem, PatternCatalog, Severity};
use crate::logic::{typecheck, Formula};
use crate::prover::{ProverConfig, StepVerdict};
use crate::span::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ReportStatus {
    Accepted,
    RejectedWithFeedback,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mark {
    Ok,
    Warning,
    Error,
}

/// Outcome for one sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SentenceReport {
    pub index: usize,
    pub span: Span,
    pub section: Section,
    /// Sentence kind, `None` if the sentence could not be read.
    pub kind: Option<&'static str>,
    pub mark: Mark,
    /// Step-checker result for sentences that claim something.
    pub verdict: Option<StepVerdict>,
}

impl SentenceReport {
    /// `ok`, or the code of the first blocking category.
    pub fn label(&self, items: &[FeedbackItem]) -> String {
        items
            .iter()
            .find(|i| i.sentence == self.index && i.blocks_acceptance())
            .map_or_else(|| "ok".to_string(), |i| i.category.code().to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub status: ReportStatus,
    pub items: Vec<FeedbackItem>,
    pub sentences: Vec<SentenceReport>,
    pub goal: Option<Formula>,
    #[serde(skip)]
    pub source: String,
}

impl Report {
    pub fn accepted(&self) -> bool {
        self.status == ReportStatus::Accepted
    }

    pub fn items_in(&self, category: Category) -> impl Iterator<Item = &FeedbackItem> {
        self.items.iter().filter(move |i| i.category == category)
    }
}

/// Checker settings: step-checker limits and the error-pattern catalog.
#[derive(Debug, Clone)]
pub struct Engine {
    pub prover: ProverConfig,
    pub catalog: PatternCatalog,
}

impl Default for Engine {
    fn default() -> Self {
        Engine { prover: ProverConfig::default(), catalog: default_catalog() }
    }
}

fn default_engine() -> &'static Engine {
    static ENGINE: OnceLock<Engine> = OnceLock::new();
    ENGINE.get_or_init(Engine::default)
}

/// Check a parsed document with the default settings.
pub fn check_document(doc: &ProblemDocument) -> Report {
    default_engine().check_document(doc)
}

/// Parse and check a submission with the default settings.
pub fn check_source(source: &str) -> Report {
    default_engine().check_source(source)
}

fn parse_item(err: &SentenceError, index: usize) -> FeedbackItem {
    match err {
        SentenceError::UnknownSymbol { span, text } => {
            FeedbackItem::new(Category::Textual, index, *span, format!("Unknown symbol '{text}'."))
                .with_hint("Use the symbols of the exercise, or write the relation in words.")
        }
        SentenceError::MalformedFormula { span, expected } => {
            FeedbackItem::new(Category::Textual, index, *span, format!("The formula could not be read: expected {expected}."))
        }
        SentenceError::Nonprocessable { span } => {
            FeedbackItem::new(Category::Textual, index, *span, "This sentence could not be processed.")
                .with_hint("Rephrase it with a standard form such as 'Hence ...', 'Assume that ...' or 'Let ... be ...'.")
        }
        SentenceError::NonProposition { span } => FeedbackItem::new(
            Category::Type,
            index,
            *span,
            "This is a term, not a statement. Say what holds for it.",
        ),
    }
}

/// Fit a span inside the sentence it belongs to.
fn clamp(span: Span, outer: Span) -> Span {
    let start = span.start.clamp(outer.start, outer.end);
    let end = span.end.clamp(start, outer.end);
    Span::new(start, end)
}

/// Declarations and premises of the exercise, with the goal frame opened.
pub fn init_state(doc: &ProblemDocument, env: &StepEnv) -> (ProofState, Vec<FeedbackItem>) {
    let mut state = ProofState::empty();
    let mut items = Vec::new();
    let mut goal = None;
    let mut goal_at = doc.goal_index.unwrap_or(0);
    for slot in doc.header() {
        let Ok(s) = &slot.parsed else { continue };
        match &s.kind {
            SentenceKind::Declare { .. } => {
                let (next, out) = apply_sentence(&state, s, env);
                state = next;
                items.extend(out.items);
            }
            SentenceKind::Assume { formula, let_form } => {
                let mut ctx = state.kb.ctx.clone();
                if *let_form {
                    for v in formula.int_vars() {
                        if !ctx.contains(&v) {
                            ctx.declare(&v, crate::logic::Sort::Integer).expect("fresh name");
                        }
                    }
                }
                match typecheck(formula, &ctx) {
                    Ok(_) => {
                        state.kb.ctx = ctx;
                        state.kb.push(formula.clone());
                    }
                    Err(e) => items.push(state::type_item(&e, s, env.source)),
                }
            }
            SentenceKind::GoalAnnounce { announcement: Announcement::Goal { formula } } if goal.is_none() => {
                goal_at = s.index;
                match typecheck(formula, &state.kb.ctx) {
                    Ok(_) => goal = Some(formula.clone()),
                    Err(e) => items.push(state::type_item(&e, s, env.source)),
                }
            }
            _ => items.push(
                FeedbackItem::new(Category::Textual, s.index, s.span, "This sentence belongs in the proof, after 'Proof:'.")
                    .warning(),
            ),
        }
    }
    state.open_goal(goal, goal_at);
    (state, items)
}

impl Engine {
    pub fn check_source(&self, source: &str) -> Report {
        self.check_document(&scan_document(source))
    }

    pub fn check_document(&self, doc: &ProblemDocument) -> Report {
        let env = StepEnv { prover: self.prover, catalog: &self.catalog, source: &doc.source };
        let mut items: Vec<FeedbackItem> = Vec::new();
        let mut verdicts: Vec<Option<StepVerdict>> = vec![None; doc.sentences.len()];

        for slot in &doc.sentences {
            if let Err(e) = &slot.parsed {
                items.push(parse_item(e, slot.index));
            }
        }
        for w in &doc.warnings {
            items.push(FeedbackItem::new(Category::Textual, w.sentence, w.span, capitalize_first(&w.message)).warning());
        }
        match doc.structural_error() {
            Some(DocumentError::MissingGoal) => {
                let (index, span) = doc.sentences.first().map_or((0, Span::new(0, 0)), |s| (s.index, s.span));
                items.push(
                    FeedbackItem::new(Category::Textual, index, Span::new(span.start, span.start), "The exercise does not say what is to be proved.")
                        .with_hint("State the claim, for example 'Prove: ...'."),
                );
            }
            Some(DocumentError::MissingProofBody) => {
                let last = doc.sentences.last().expect("a goal sentence exists");
                items.push(
                    FeedbackItem::new(Category::Textual, last.index, Span::new(last.span.end, last.span.end), "There is no proof.")
                        .with_hint("Start the proof with 'Proof:'."),
                );
            }
            None => {}
        }

        let (mut state, header_items) = init_state(doc, &env);
        items.extend(header_items);

        let mut last_body: Option<&SentenceAst> = None;
        for slot in doc.proof() {
            let Ok(s) = &slot.parsed else { continue };
            last_body = Some(s);
            let (next, out) = apply_sentence(&state, s, &env);
            state = next;
            verdicts[s.index] = out.verdict;
            let base = items.len();
            items.extend(out.items.into_iter().map(|mut i| {
                i.refines = i.refines.map(|r| r + base);
                i
            }));
        }
        if !state.finished && doc.proof_start.is_some() {
            let closing = last_body.cloned().or_else(|| {
                doc.proof().last().map(|slot| SentenceAst { index: slot.index, span: slot.span, cue: None, kind: SentenceKind::Qed })
            });
            if let Some(s) = closing {
                let at = Span::new(s.span.end, s.span.end);
                items.push(
                    FeedbackItem::new(Category::Textual, s.index, at, "The proof does not end with 'qed'.")
                        .with_hint("Finish the proof with 'qed.'"),
                );
                let base = items.len();
                let out = state::finish_without_qed(&mut state, &s, &env);
                items.extend(out.items.into_iter().map(|mut i| {
                    i.refines = i.refines.map(|r| r + base);
                    i
                }));
            }
        }

        for item in &mut items {
            if let Some(slot) = doc.sentences.get(item.sentence) {
                item.span = clamp(item.span, slot.span);
            }
        }
        // Stable order by sentence; keep `refines` pointing at the same items.
        let mut order: Vec<usize> = (0..items.len()).collect();
        order.sort_by_key(|&i| items[i].sentence);
        let mut position = vec![0; items.len()];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let items: Vec<FeedbackItem> = order
            .iter()
            .map(|&old| {
                let mut i = items[old].clone();
                i.refines = i.refines.map(|r| position[r]);
                i
            })
            .collect();

        let sentences = doc
            .sentences
            .iter()
            .map(|slot| {
                let mine = items.iter().filter(|i| i.sentence == slot.index);
                let mut mark = Mark::Ok;
                for i in mine {
                    if i.blocks_acceptance() {
                        mark = Mark::Error;
                    } else if mark == Mark::Ok && (i.severity == Severity::Warning || i.category == Category::ErrorPattern) {
                        mark = Mark::Warning;
                    }
                }
                SentenceReport {
                    index: slot.index,
                    span: slot.span,
                    section: slot.section,
                    kind: slot.parsed.as_ref().ok().map(|s| s.kind.name()),
                    mark,
                    verdict: verdicts[slot.index].clone(),
                }
            })
            .collect();

        let status = if items.iter().any(FeedbackItem::blocks_acceptance) {
            ReportStatus::RejectedWithFeedback
        } else {
            ReportStatus::Accepted
        };
        Report { status, items, sentences, goal: doc.goal.clone(), source: doc.source.clone() }
    }
}

fn capitalize_first(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(first) => first.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}
