//! Classification of single sentences into the fixed sentence kinds.

use serde::Serialize;

use super::formula::{parse_formula, parse_term, FormulaError, FORMULA_WORDS};
use super::token::{Token, TokenKind};
use crate::logic::{Formula, Sort};
use crate::span::Span;

/// A classified sentence of a proof text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SentenceAst {
    pub index: usize,
    pub span: Span,
    /// Lowercased discourse marker, e.g. `"hence"` or `"it follows that"`.
    pub cue: Option<String>,
    pub kind: SentenceKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Contraposition,
    Contradiction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Announcement {
    /// `Prove: F`, `We show: F`.
    Goal { formula: Formula },
    /// `It remains to show: F`.
    Remains { formula: Formula },
    /// `We prove the contraposition.`
    Method { method: Method },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum SentenceKind {
    Declare { vars: Vec<String>, sort: Sort },
    /// `let_form` marks `Let x be even.` and `Let x ∈ A.`, which may introduce
    /// the element variables they mention.
    Assume { formula: Formula, let_form: bool },
    ExistsClaim { var: String, formula: Formula },
    Pick { var: String, formula: Formula },
    GoalAnnounce { announcement: Announcement },
    Infer { formula: Formula },
    SubproofClose,
    Qed,
}

impl SentenceKind {
    pub fn name(&self) -> &'static str {
        match self {
            SentenceKind::Declare { .. } => "Declare",
            SentenceKind::Assume { .. } => "Assume",
            SentenceKind::ExistsClaim { .. } => "ExistsClaim",
            SentenceKind::Pick { .. } => "Pick",
            SentenceKind::GoalAnnounce { .. } => "GoalAnnounce",
            SentenceKind::Infer { .. } => "Infer",
            SentenceKind::SubproofClose => "SubproofClose",
            SentenceKind::Qed => "Qed",
        }
    }

    /// The formula the sentence states, if any.
    pub fn formula(&self) -> Option<&Formula> {
        match self {
            SentenceKind::Assume { formula, .. }
            | SentenceKind::ExistsClaim { formula, .. }
            | SentenceKind::Pick { formula, .. }
            | SentenceKind::Infer { formula } => Some(formula),
            SentenceKind::GoalAnnounce {
                announcement: Announcement::Goal { formula } | Announcement::Remains { formula },
            } => Some(formula),
            _ => None,
        }
    }
}

/// Why a sentence could not be classified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, thiserror::Error)]
#[serde(tag = "error", rename_all = "kebab-case")]
pub enum SentenceError {
    #[error("unknown symbol {text:?}")]
    UnknownSymbol { span: Span, text: String },
    #[error("malformed formula: expected {expected}")]
    MalformedFormula { span: Span, expected: String },
    #[error("sentence could not be processed")]
    Nonprocessable { span: Span },
    #[error("a term was used where a statement is required")]
    NonProposition { span: Span },
}

impl SentenceError {
    pub fn span(&self) -> Span {
        match self {
            SentenceError::UnknownSymbol { span, .. }
            | SentenceError::MalformedFormula { span, .. }
            | SentenceError::Nonprocessable { span }
            | SentenceError::NonProposition { span } => *span,
        }
    }
}

const CUES: &[&[&str]] = &[
    &["it", "follows", "that"],
    &["we", "conclude", "that"],
    &["then"],
    &["hence"],
    &["thus"],
    &["therefore"],
    &["so"],
    &["consequently"],
    &["also"],
];

const INFER_PREFIXES: &[&[&str]] = &[
    &["it", "holds", "that"],
    &["we", "have"],
    &["we", "get"],
    &["we", "obtain"],
    &["we", "conclude", "that"],
    &["it", "follows", "that"],
];

const CLOSINGS: &[&[&str]] = &[
    &["this", "proves", "the", "claim"],
    &["this", "shows", "the", "claim"],
    &["this", "completes", "the", "subproof"],
];

const CONTRADICTION_FORMS: &[&[&str]] = &[
    &["this", "is", "a", "contradiction"],
    &["a", "contradiction"],
    &["contradiction"],
];

/// Every word the sentence grammar knows, besides formula words.
const SENTENCE_WORDS: &[&str] = &[
    "let", "be", "an", "integer", "integers", "set", "sets", "proposition", "propositions",
    "statement", "statements", "assume", "suppose", "that", "there", "exists", "exist", "such",
    "with", "pick", "choose", "take", "fix", "prove", "show", "we", "it", "remains", "to", "the",
    "contraposition", "contrapositive", "argue", "contradiction", "this", "proves", "shows",
    "completes", "claim", "subproof", "follows", "conclude", "hence", "thus", "therefore", "so",
    "consequently", "also", "holds", "have", "get", "obtain", "qed", "proof",
];

/// Like [`Token::is_word`], but also accepts the article `a`, which lexes
/// as a one-letter identifier.
fn word_matches(t: &Token, w: &str) -> bool {
    t.is_word(w) || (w == "a" && t.kind == TokenKind::Identifier && t.text.eq_ignore_ascii_case(w))
}

struct Cursor<'t> {
    tokens: &'t [Token],
    pos: usize,
}

impl<'t> Cursor<'t> {
    fn new(tokens: &'t [Token]) -> Self {
        Cursor { tokens, pos: 0 }
    }

    fn rest(&self) -> &'t [Token] {
        &self.tokens[self.pos..]
    }

    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.pos)
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if self.peek().is_some_and(|t| word_matches(t, w)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_any_word(&mut self, ws: &[&str]) -> bool {
        ws.iter().any(|w| self.eat_word(w))
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.peek().is_some_and(|t| t.is_punct(p)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// Match a fixed word sequence; on failure nothing is consumed.
    fn eat_phrase(&mut self, phrase: &[&str]) -> bool {
        let ok = phrase.len() <= self.rest().len()
            && phrase.iter().zip(self.rest()).all(|(w, t)| word_matches(t, w));
        if ok {
            self.pos += phrase.len();
        }
        ok
    }

    fn eat_first_phrase(&mut self, phrases: &[&[&str]]) -> Option<String> {
        phrases
            .iter()
            .find(|p| self.eat_phrase(p))
            .map(|p| p.join(" "))
    }

    fn is_exactly(&self, phrase: &[&str]) -> bool {
        self.rest().len() == phrase.len() && phrase.iter().zip(self.rest()).all(|(w, t)| word_matches(t, w))
    }

    fn identifier(&mut self) -> Option<String> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Identifier => {
                self.pos += 1;
                Some(t.text.clone())
            }
            _ => None,
        }
    }
}

fn region_span(tokens: &[Token]) -> Span {
    match (tokens.first(), tokens.last()) {
        (Some(a), Some(b)) => a.span.join(b.span),
        _ => Span::default(),
    }
}

fn is_qed(tokens: &[Token]) -> bool {
    match tokens {
        [t] => t.is_word("qed"),
        [q, d1, e, d2, d] => {
            let letter = |t: &Token, c: &str| t.kind == TokenKind::Identifier && t.text.eq_ignore_ascii_case(c);
            letter(q, "q") && d1.is_punct(".") && letter(e, "e") && d2.is_punct(".") && letter(d, "d")
        }
        [rest @ .., last] if rest.len() == 5 && last.is_punct(".") => is_qed(rest),
        _ => false,
    }
}

/// Classify the tokens of one sentence (without its final period).
pub fn classify(tokens: &[Token], index: usize) -> Result<SentenceAst, SentenceError> {
    let span = region_span(tokens);
    let make = |cue: Option<String>, kind: SentenceKind| SentenceAst { index, span, cue, kind };
    if tokens.is_empty() {
        return Err(SentenceError::Nonprocessable { span });
    }
    if is_qed(tokens) {
        return Ok(make(None, SentenceKind::Qed));
    }
    let mut c = Cursor::new(tokens);
    if CLOSINGS.iter().any(|p| c.is_exactly(p)) {
        return Ok(make(None, SentenceKind::SubproofClose));
    }
    if let Some(kind) = announcement(&mut c)? {
        return Ok(make(None, kind));
    }
    c.pos = 0;
    if c.eat_word("let") {
        return let_sentence(&mut c, span).map(|k| make(None, k));
    }
    if c.eat_any_word(&["assume", "suppose"]) {
        c.eat_punct(",");
        c.eat_word("that");
        let formula = statement(c.rest(), span)?;
        return Ok(make(None, SentenceKind::Assume { formula, let_form: false }));
    }
    if c.eat_any_word(&["pick", "choose", "take", "fix"]) {
        let (var, formula) = witness_tail(&mut c, span)?;
        return Ok(make(None, SentenceKind::Pick { var, formula }));
    }

    let cue = c.eat_first_phrase(CUES);
    c.eat_punct(",");
    if c.eat_phrase(&["there", "is"]) || c.eat_phrase(&["there", "exists"]) {
        let (var, formula) = witness_tail(&mut c, span)?;
        return Ok(make(cue, SentenceKind::ExistsClaim { var, formula }));
    }
    if CONTRADICTION_FORMS.iter().any(|p| c.is_exactly(p)) {
        return Ok(make(cue, SentenceKind::Infer { formula: Formula::False }));
    }
    c.eat_first_phrase(INFER_PREFIXES);
    if c.eat_phrase(&["there", "is"]) || c.eat_phrase(&["there", "exists"]) {
        let (var, formula) = witness_tail(&mut c, span)?;
        return Ok(make(cue, SentenceKind::ExistsClaim { var, formula }));
    }
    if CONTRADICTION_FORMS.iter().any(|p| c.is_exactly(p)) {
        return Ok(make(cue, SentenceKind::Infer { formula: Formula::False }));
    }
    let formula = statement(c.rest(), span)?;
    Ok(make(cue, SentenceKind::Infer { formula }))
}

fn announcement(c: &mut Cursor<'_>) -> Result<Option<SentenceKind>, SentenceError> {
    let span = region_span(c.tokens);
    let method = |m| Ok(Some(SentenceKind::GoalAnnounce { announcement: Announcement::Method { method: m } }));
    if c.is_exactly(&["we", "prove", "the", "contraposition"])
        || c.is_exactly(&["we", "prove", "the", "contrapositive"])
        || c.is_exactly(&["we", "show", "the", "contraposition"])
        || c.is_exactly(&["we", "show", "the", "contrapositive"])
    {
        return method(Method::Contraposition);
    }
    if c.is_exactly(&["we", "argue", "by", "contradiction"]) || c.is_exactly(&["we", "prove", "this", "by", "contradiction"]) {
        return method(Method::Contradiction);
    }
    let remains = if c.eat_phrase(&["it", "remains", "to", "show"]) {
        true
    } else if c.eat_phrase(&["we", "show"]) || c.eat_phrase(&["we", "prove"]) || c.eat_any_word(&["prove", "show"]) {
        false
    } else {
        return Ok(None);
    };
    if !c.eat_punct(":") && !c.eat_word("that") {
        return Err(SentenceError::Nonprocessable { span });
    }
    let formula = statement(c.rest(), span)?;
    let announcement = if remains { Announcement::Remains { formula } } else { Announcement::Goal { formula } };
    Ok(Some(SentenceKind::GoalAnnounce { announcement }))
}

fn sort_word(c: &mut Cursor<'_>, plural: bool) -> Option<Sort> {
    let table: &[(&str, &str, Sort)] = &[
        ("integer", "integers", Sort::Integer),
        ("set", "sets", Sort::Set),
        ("proposition", "propositions", Sort::Proposition),
        ("statement", "statements", Sort::Proposition),
    ];
    for (singular, plural_form, sort) in table {
        let w = if plural { plural_form } else { singular };
        if c.eat_word(w) {
            return Some(*sort);
        }
    }
    None
}

fn let_sentence(c: &mut Cursor<'_>, span: Span) -> Result<SentenceKind, SentenceError> {
    let start = c.pos;
    let mut vars = Vec::new();
    while let Some(v) = c.identifier() {
        vars.push(v);
        if !(c.eat_punct(",") || c.eat_word("and")) {
            break;
        }
    }
    if !vars.is_empty() && c.eat_word("be") {
        let article = c.eat_word("an") || c.eat_word("a");
        if vars.len() == 1 && !article && c.is_exactly(&["even"]) {
            return Ok(SentenceKind::Assume { formula: Formula::Even(crate::logic::Term::var(&vars[0])), let_form: true });
        }
        if vars.len() == 1 && !article && c.is_exactly(&["odd"]) {
            return Ok(SentenceKind::Assume { formula: Formula::Odd(crate::logic::Term::var(&vars[0])), let_form: true });
        }
        let plural = vars.len() > 1;
        let Some(sort) = sort_word(c, plural) else {
            return Err(SentenceError::Nonprocessable { span });
        };
        if c.at_end() {
            return Ok(SentenceKind::Declare { vars, sort });
        }
        if vars.len() == 1 && sort == Sort::Integer && (c.eat_word("with") || c.eat_phrase(&["such", "that"])) {
            let formula = statement(c.rest(), span)?;
            return Ok(SentenceKind::Pick { var: vars.remove(0), formula });
        }
        return Err(SentenceError::Nonprocessable { span });
    }
    c.pos = start;
    let formula = statement(c.rest(), span)?;
    if matches!(formula, Formula::In(..)) {
        Ok(SentenceKind::Assume { formula, let_form: true })
    } else {
        Err(SentenceError::Nonprocessable { span })
    }
}

/// `[an] integer k such that F` / `with F`.
fn witness_tail(c: &mut Cursor<'_>, span: Span) -> Result<(String, Formula), SentenceError> {
    let _ = c.eat_word("an") || c.eat_word("a");
    if !c.eat_word("integer") {
        return Err(SentenceError::Nonprocessable { span });
    }
    let Some(var) = c.identifier() else { return Err(SentenceError::Nonprocessable { span }) };
    if !(c.eat_word("with") || c.eat_phrase(&["such", "that"])) {
        return Err(SentenceError::Nonprocessable { span });
    }
    let formula = statement(c.rest(), span)?;
    Ok((var, formula))
}

fn is_known_word(t: &Token) -> bool {
    let lower = t.text.to_ascii_lowercase();
    FORMULA_WORDS.contains(&lower.as_str()) || SENTENCE_WORDS.contains(&lower.as_str())
}

/// Parse the formula payload of a sentence.
fn statement(tokens: &[Token], sentence_span: Span) -> Result<Formula, SentenceError> {
    if tokens.is_empty() {
        return Err(SentenceError::Nonprocessable { span: sentence_span });
    }
    if tokens.iter().any(|t| t.kind == TokenKind::Word && !is_known_word(t)) {
        return Err(SentenceError::Nonprocessable { span: sentence_span });
    }
    match parse_formula(tokens) {
        Ok(f) => Ok(f),
        Err(FormulaError { span, expected }) => {
            if parse_term(tokens).is_ok() {
                Err(SentenceError::NonProposition { span: region_span(tokens) })
            } else {
                Err(SentenceError::MalformedFormula { span, expected })
            }
        }
    }
}
