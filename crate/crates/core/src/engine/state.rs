//! Proof state and the effect of one sentence on it.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cnl::{Announcement, Method, SentenceAst, SentenceKind};
use crate::diagnostics::{detect_patterns, Category, FeedbackItem, PatternCatalog};
use crate::logic::{typecheck, Formula, Sort, Term, TypeError};
use crate::prover::{check_exists, check_step, KnowledgeBase, ProverConfig, StepVerdict, VerdictStatus};
use crate::span::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrameMethod {
    Direct,
    Contraposition,
    Contradiction,
    /// A local assumption; the frame closes to `assumption → last statement`,
    /// which is how case distinctions are written.
    CaseSplit,
    SubsetElementArg,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", content = "formula", rename_all = "kebab-case")]
pub enum FrameOrigin {
    Goal,
    Remains,
    Assumption(Formula),
}

/// One open obligation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoalFrame {
    /// What the frame was opened to prove; `None` for assumption frames.
    pub statement: Option<Formula>,
    /// What remains to be shown after refining assumptions.
    pub target: Option<Formula>,
    pub method: FrameMethod,
    pub origin: FrameOrigin,
    pub opened_at: usize,
    pub refined: bool,
    pub announced: Option<Method>,
    /// Length of the knowledge base when the frame was opened.
    kb_len: usize,
    /// Most recent statement made while this frame was on top.
    last: Option<Formula>,
    /// A goal-status item was already issued for this frame.
    reported: bool,
}

impl GoalFrame {
    fn new(statement: Option<Formula>, origin: FrameOrigin, opened_at: usize, kb_len: usize) -> Self {
        let method = match origin {
            FrameOrigin::Assumption(_) => FrameMethod::CaseSplit,
            _ => FrameMethod::Direct,
        };
        GoalFrame {
            target: statement.clone(),
            statement,
            method,
            origin,
            opened_at,
            refined: false,
            announced: None,
            kb_len,
            last: None,
            reported: false,
        }
    }
}

/// Knowledge, declarations and open goals after a prefix of the proof.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProofState {
    pub kb: KnowledgeBase,
    pub frames: Vec<GoalFrame>,
    /// Existence claims made so far, as `(variable, condition)`.
    pub witnesses: Vec<(String, Formula)>,
    pub finished: bool,
}

/// Settings shared by all sentences of one check.
#[derive(Debug, Clone)]
pub struct StepEnv<'a> {
    pub prover: ProverConfig,
    pub catalog: &'a PatternCatalog,
    pub source: &'a str,
}

impl StepEnv<'_> {
    fn discharge_config(&self) -> ProverConfig {
        ProverConfig { depth_budget: 1, ..self.prover }
    }
}

/// What applying one sentence produced. `refines` indices in `items`
/// are relative to this list.
#[derive(Debug, Clone, Default)]
pub struct StepOutcome {
    pub items: Vec<FeedbackItem>,
    pub verdict: Option<StepVerdict>,
}

impl StepOutcome {
    fn push(&mut self, item: FeedbackItem) -> usize {
        self.items.push(item);
        self.items.len() - 1
    }
}

/// Span of the first whole-word occurrence of `word` inside `span`.
fn locate(source: &str, span: Span, word: &str) -> Span {
    let text = span.slice(source);
    let is_word_char = |c: char| c.is_alphanumeric() || c == '_';
    let mut from = 0;
    while let Some(pos) = text[from..].find(word) {
        let start = from + pos;
        let end = start + word.len();
        let before_ok = !text[..start].chars().next_back().is_some_and(is_word_char);
        let after_ok = !text[end..].chars().next().is_some_and(is_word_char);
        if before_ok && after_ok {
            return Span::new(span.start + start, span.start + end);
        }
        from = end;
    }
    span
}

pub(crate) fn type_item(err: &TypeError, s: &SentenceAst, source: &str) -> FeedbackItem {
    let span = err.name().map_or(s.span, |n| locate(source, s.span, n));
    let hint = match err {
        TypeError::UndeclaredVariable { name } => {
            Some(format!("Introduce {name} first, for example with 'Let {name} be an integer.'"))
        }
        TypeError::Redeclared { name } => Some(format!("Choose a name other than {name}.")),
        _ => None,
    };
    let item = FeedbackItem::new(Category::Type, s.index, span, format!("{}.", capitalize(&err.to_string())));
    match hint {
        Some(h) => item.with_hint(h),
        None => item,
    }
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(first) => first.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

fn quoted(f: &Formula) -> String {
    match f {
        Formula::False => "a contradiction".into(),
        other => format!("'{other}'"),
    }
}

impl ProofState {
    pub fn empty() -> Self {
        ProofState { kb: KnowledgeBase::default(), frames: Vec::new(), witnesses: Vec::new(), finished: false }
    }

    /// Open the root frame for the exercise's goal.
    pub fn open_goal(&mut self, goal: Option<Formula>, index: usize) {
        let frame = GoalFrame::new(goal, FrameOrigin::Goal, index, self.kb.len());
        self.frames.push(frame);
    }

    pub fn top(&self) -> Option<&GoalFrame> {
        self.frames.last()
    }

    /// Current target of the innermost frame that has one.
    pub fn current_target(&self) -> Option<&Formula> {
        self.frames.iter().rev().find_map(|f| f.target.as_ref())
    }

    fn note_statement(&mut self, f: Formula) {
        if let Some(top) = self.frames.last_mut() {
            top.last = Some(f);
        }
    }

    /// `a` and `b` say the same thing, by structure or by one short step
    /// in each direction.
    fn equivalent(&self, a: &Formula, b: &Formula, env: &StepEnv) -> bool {
        if a == b {
            return true;
        }
        let cfg = env.discharge_config();
        let one = |fact: &Formula, claim: &Formula| {
            let kb = KnowledgeBase::from_facts(self.kb.ctx.clone(), vec![fact.clone()]);
            check_step(claim, &kb, &cfg).is_verified()
        };
        // A target the checker proves from nothing is equivalent to every
        // other provable statement; that says nothing about the proof.
        let alone = KnowledgeBase::new(self.kb.ctx.clone());
        one(a, b) && one(b, a) && !check_step(b, &alone, &cfg).is_verified()
    }

    fn discharged(&self, target: &Formula, last: Option<&Formula>, env: &StepEnv) -> bool {
        if self.kb.contains(target) {
            return true;
        }
        match last {
            Some(l) if *target == Formula::False => *l == Formula::False,
            Some(l) => self.equivalent(l, target, env),
            None => false,
        }
    }

    /// Pop the top frame and record what it established in its parent.
    fn close_top(&mut self, at: &SentenceAst, env: &StepEnv, out: &mut StepOutcome) {
        let Some(frame) = self.frames.pop() else { return };
        let conclusion = match &frame.origin {
            FrameOrigin::Assumption(a) => {
                let last = frame.last.clone().unwrap_or_else(|| a.clone());
                Some(Formula::implies(a.clone(), last))
            }
            FrameOrigin::Goal | FrameOrigin::Remains => {
                if let Some(target) = &frame.target {
                    if !frame.reported && !self.discharged(target, frame.last.as_ref(), env) {
                        let msg = format!("The claim {} has not been established.", quoted(target));
                        let hint = format!("Before closing this part, state {}.", quoted(target));
                        out.push(FeedbackItem::new(Category::GoalStatus, at.index, at.span, msg).with_hint(hint));
                    }
                }
                frame.statement.clone()
            }
        };
        self.kb.truncate(frame.kb_len);
        if let Some(c) = conclusion {
            self.kb.push(c.clone());
            self.note_statement(c);
        }
    }

    /// The root check performed by `qed`.
    fn check_root(&mut self, at: &SentenceAst, env: &StepEnv, out: &mut StepOutcome) {
        let Some(root) = self.frames.last() else { return };
        let Some(target) = root.target.clone() else { return };
        if root.reported || self.discharged(&target, root.last.as_ref(), env) {
            return;
        }
        let msg = match &target {
            Formula::False => "Your last statement does not establish a contradiction.".to_string(),
            t => format!("Your last statement does not establish the goal '{t}'."),
        };
        let hint = match &target {
            Formula::False => "Derive two statements that contradict each other and say 'This is a contradiction.'".into(),
            t => format!("End the proof with a sentence stating '{t}', for example 'Hence {t}.'"),
        };
        out.push(FeedbackItem::new(Category::GoalStatus, at.index, at.span, msg).with_hint(hint));
        if let Some(root) = self.frames.last_mut() {
            root.reported = true;
        }
    }

    /// Try to use an assumption to refine the top frame's target.
    fn refine(&self, a: &Formula, env: &StepEnv) -> Option<(Formula, FrameMethod)> {
        let top = self.frames.last()?;
        if top.refined {
            return None;
        }
        let target = top.target.as_ref()?;
        let eq = |x: &Formula, y: &Formula| self.equivalent(x, y, env);
        if eq(a, &target.negated()) {
            return Some((Formula::False, FrameMethod::Contradiction));
        }
        match target {
            Formula::Implies(p, q) => {
                if eq(a, p) {
                    Some(((**q).clone(), FrameMethod::Direct))
                } else if eq(a, &q.negated()) {
                    Some((p.negated(), FrameMethod::Contraposition))
                } else if eq(a, &Formula::and((**p).clone(), q.negated())) {
                    Some((Formula::False, FrameMethod::Contradiction))
                } else {
                    None
                }
            }
            Formula::Not(p) if eq(a, p) => Some((Formula::False, FrameMethod::Contradiction)),
            Formula::Subset(s, u) => match a {
                Formula::In(t, s2) if s2 == s => Some((Formula::In(t.clone(), u.clone()), FrameMethod::SubsetElementArg)),
                _ => None,
            },
            _ => None,
        }
    }

    fn assume(&mut self, s: &SentenceAst, formula: &Formula, let_form: bool, env: &StepEnv, out: &mut StepOutcome) {
        let mut ctx = self.kb.ctx.clone();
        if let_form {
            for v in formula.int_vars() {
                if !ctx.contains(&v) {
                    ctx.declare(&v, Sort::Integer).expect("fresh name");
                }
            }
        }
        if let Err(e) = typecheck(formula, &ctx) {
            out.push(type_item(&e, s, env.source));
            return;
        }
        self.kb.ctx = ctx;
        match self.refine(formula, env) {
            Some((target, method)) => {
                let top = self.frames.last_mut().expect("refine needs a frame");
                top.target = Some(target);
                top.method = method;
                top.refined = true;
            }
            None => {
                let frame = GoalFrame::new(None, FrameOrigin::Assumption(formula.clone()), s.index, self.kb.len());
                self.frames.push(frame);
            }
        }
        self.kb.push(formula.clone());
    }

    fn exists_claim(&mut self, s: &SentenceAst, var: &str, formula: &Formula, env: &StepEnv, out: &mut StepOutcome) {
        let mut ctx = self.kb.ctx.clone();
        if !ctx.contains(var) {
            ctx.declare(var, Sort::Integer).expect("fresh name");
        }
        if let Err(e) = typecheck(formula, &ctx) {
            out.push(type_item(&e, s, env.source));
            return;
        }
        let kb = KnowledgeBase::from_facts(ctx, self.kb.facts().to_vec());
        let verdict = check_exists(var, formula, &kb, &env.prover);
        if !verdict.is_verified() {
            let msg = format!("It does not follow that there is an integer {var} such that {formula}.");
            let item = FeedbackItem::new(Category::UnverifiedStep, s.index, s.span, msg)
                .with_hint("Check which fact guarantees such an integer, for example the definition of 'even'.")
                .with_trace(verdict.trace.clone());
            out.push(item);
        }
        out.verdict = Some(verdict);
        self.witnesses.push((var.to_string(), formula.clone()));
    }

    fn pick(&mut self, s: &SentenceAst, var: &str, formula: &Formula, env: &StepEnv, out: &mut StepOutcome) {
        if let Err(e) = self.kb.ctx.declare(var, Sort::Integer) {
            out.push(type_item(&e, s, env.source));
            return;
        }
        if let Err(e) = typecheck(formula, &self.kb.ctx) {
            out.push(type_item(&e, s, env.source));
            return;
        }
        let justified = self.witnesses.iter().any(|(w, cond)| {
            let renamed = cond.substitute(&BTreeMap::from([(w.clone(), Term::var(var))]));
            renamed == *formula
        });
        let verdict = if justified {
            StepVerdict::verified(vec!["existence-claim".into()])
        } else {
            check_exists(var, formula, &self.kb, &env.prover)
        };
        if !verdict.is_verified() {
            let msg = format!("It has not been shown that there is an integer {var} such that {formula}.");
            let hint = format!("Say first why it exists: 'Then there is an integer {var} such that {formula}.'");
            out.push(FeedbackItem::new(Category::UnverifiedStep, s.index, s.span, msg).with_hint(hint));
        }
        out.verdict = Some(verdict);
        self.kb.push(formula.clone());
    }

    fn infer(&mut self, s: &SentenceAst, formula: &Formula, env: &StepEnv, out: &mut StepOutcome) {
        if let Err(e) = typecheck(formula, &self.kb.ctx) {
            out.push(type_item(&e, s, env.source));
            return;
        }
        let verdict = check_step(formula, &self.kb, &env.prover);
        if !verdict.is_verified() {
            let model = verdict.countermodel().cloned();
            let (msg, hint) = match verdict.status {
                VerdictStatus::Refuted(_) => (
                    "This does not follow from what has been established so far.",
                    None,
                ),
                _ => (
                    "This step could not be verified from what has been established so far.",
                    Some("Try to split the step into smaller ones."),
                ),
            };
            let mut item = FeedbackItem::new(Category::UnverifiedStep, s.index, s.span, msg)
                .with_countermodel(model.clone())
                .with_trace(verdict.trace.clone());
            item.hint = hint.map(String::from);
            let base = out.push(item);
            for m in detect_patterns(formula, &self.kb, env.catalog) {
                let mut item = FeedbackItem::new(Category::ErrorPattern, s.index, s.span, m.message)
                    .with_countermodel(model.clone());
                item.pattern_id = Some(m.id);
                item.refines = Some(base);
                out.push(item);
            }
        }
        out.verdict = Some(verdict);
        self.kb.push(formula.clone());
        self.note_statement(formula.clone());
    }

    fn announce(&mut self, s: &SentenceAst, a: &Announcement, env: &StepEnv, out: &mut StepOutcome) {
        match a {
            Announcement::Goal { formula } | Announcement::Remains { formula } => {
                if let Err(e) = typecheck(formula, &self.kb.ctx) {
                    out.push(type_item(&e, s, env.source));
                    return;
                }
                let frame = GoalFrame::new(Some(formula.clone()), FrameOrigin::Remains, s.index, self.kb.len());
                self.frames.push(frame);
            }
            Announcement::Method { method } => {
                if let Some(top) = self.frames.last_mut() {
                    top.announced = Some(*method);
                }
            }
        }
    }

    fn finish(&mut self, s: &SentenceAst, env: &StepEnv, out: &mut StepOutcome) {
        while self.frames.len() > 1 {
            self.close_top(s, env, out);
        }
        self.check_root(s, env, out);
        self.finished = true;
    }
}

/// Apply one proof sentence, returning the new state and its feedback.
pub fn apply_sentence(state: &ProofState, s: &SentenceAst, env: &StepEnv) -> (ProofState, StepOutcome) {
    let mut next = state.clone();
    let mut out = StepOutcome::default();
    if next.finished {
        let item = FeedbackItem::new(Category::Textual, s.index, s.span, "This sentence comes after the end of the proof.")
            .with_hint("Remove it or move 'qed' to the end.");
        out.push(item);
        return (next, out);
    }
    match &s.kind {
        SentenceKind::Declare { vars, sort } => {
            for v in vars {
                if let Err(e) = next.kb.ctx.declare(v, *sort) {
                    out.push(type_item(&e, s, env.source));
                }
            }
        }
        SentenceKind::Assume { formula, let_form } => next.assume(s, formula, *let_form, env, &mut out),
        SentenceKind::ExistsClaim { var, formula } => next.exists_claim(s, var, formula, env, &mut out),
        SentenceKind::Pick { var, formula } => next.pick(s, var, formula, env, &mut out),
        SentenceKind::GoalAnnounce { announcement } => next.announce(s, announcement, env, &mut out),
        SentenceKind::Infer { formula } => next.infer(s, formula, env, &mut out),
        SentenceKind::SubproofClose => {
            if next.frames.len() > 1 {
                next.close_top(s, env, &mut out);
            } else {
                next.check_root(s, env, &mut out);
            }
        }
        SentenceKind::Qed => next.finish(s, env, &mut out),
    }
    (next, out)
}

/// Close the proof at `s` when the text ends without `qed`.
pub(crate) fn finish_without_qed(state: &mut ProofState, s: &SentenceAst, env: &StepEnv) -> StepOutcome {
    let mut out = StepOutcome::default();
    state.finish(s, env, &mut out);
    out
}
