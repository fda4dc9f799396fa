//! Splitting a submission into header and proof sentences.

use serde::Serialize;

use super::sentence::{classify, Announcement, SentenceAst, SentenceError, SentenceKind};
use super::token::{tokenize, Token, TokenKind};
use crate::logic::{Formula, Sort};
use crate::span::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Section {
    Header,
    Body,
}

/// One sentence of the document, classified or not.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SentenceSlot {
    pub index: usize,
    pub span: Span,
    pub section: Section,
    pub parsed: Result<SentenceAst, SentenceError>,
}

/// A tolerated irregularity, reported without rejecting the proof.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TextWarning {
    pub sentence: usize,
    pub span: Span,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, thiserror::Error)]
pub enum DocumentError {
    #[error("the exercise does not state what is to be proved")]
    MissingGoal,
    #[error("the text contains no proof")]
    MissingProofBody,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProblemDocument {
    pub source: String,
    pub sentences: Vec<SentenceSlot>,
    /// Index of the first proof sentence, if a `Proof` marker was seen.
    pub proof_start: Option<usize>,
    /// Index of the header sentence announcing the goal.
    pub goal_index: Option<usize>,
    pub goal: Option<Formula>,
    pub warnings: Vec<TextWarning>,
}

impl ProblemDocument {
    pub fn header(&self) -> impl Iterator<Item = &SentenceSlot> {
        self.sentences.iter().filter(|s| s.section == Section::Header)
    }

    pub fn proof(&self) -> impl Iterator<Item = &SentenceSlot> {
        self.sentences.iter().filter(|s| s.section == Section::Body)
    }

    /// Standing hypotheses of the exercise.
    pub fn premises(&self) -> Vec<&Formula> {
        self.header()
            .filter_map(|s| match &s.parsed {
                Ok(SentenceAst { kind: SentenceKind::Assume { formula, .. }, .. }) => Some(formula),
                _ => None,
            })
            .collect()
    }

    pub fn declarations(&self) -> Vec<(&str, Sort)> {
        self.header()
            .filter_map(|s| match &s.parsed {
                Ok(SentenceAst { kind: SentenceKind::Declare { vars, sort }, .. }) => Some((vars, *sort)),
                _ => None,
            })
            .flat_map(|(vars, sort)| vars.iter().map(move |v| (v.as_str(), sort)))
            .collect()
    }

    /// The fatal structural problem of the document, if any.
    pub fn structural_error(&self) -> Option<DocumentError> {
        if self.goal_index.is_none() {
            Some(DocumentError::MissingGoal)
        } else if self.proof_start.is_none() {
            Some(DocumentError::MissingProofBody)
        } else {
            None
        }
    }
}

/// A raw sentence region: byte range without the terminating period.
struct Region {
    start: usize,
    end: usize,
    terminated: bool,
}

fn split_regions(source: &str) -> Vec<Region> {
    let mut regions = Vec::new();
    let mut start: Option<usize> = None;
    let mut chars = source.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        if start.is_none() {
            if c.is_whitespace() {
                continue;
            }
            start = Some(i);
        }
        if c == '.' && chars.peek().is_none_or(|&(_, n)| n.is_whitespace()) {
            regions.push(Region { start: start.take().expect("open region"), end: i, terminated: true });
        }
    }
    if let Some(s) = start {
        let end = source.trim_end().len();
        if end > s {
            regions.push(Region { start: s, end, terminated: false });
        }
    }
    regions
}

fn starts_with_word(text: &str, word: &str) -> bool {
    text.get(..word.len()).is_some_and(|head| head.eq_ignore_ascii_case(word))
        && !text[word.len()..].starts_with(|c: char| c.is_ascii_alphanumeric())
}

fn announces_goal(text: &str) -> bool {
    let t = text.trim_start();
    ["prove", "show", "we show", "we prove"].iter().any(|w| starts_with_word(t, w))
        && !starts_with_word(t, "we prove the")
        && !starts_with_word(t, "we show the")
}

/// Split off a trailing `qed` that lacks its own period.
fn split_trailing_qed(tokens: &[Token]) -> Option<usize> {
    if tokens.len() < 2 {
        return None;
    }
    let last = tokens.last()?;
    if last.is_word("qed") {
        return Some(tokens.len() - 1);
    }
    let n = tokens.len();
    if n >= 6 {
        let tail = &tokens[n - 5..];
        let letter = |t: &Token, c: &str| t.kind == TokenKind::Identifier && t.text.eq_ignore_ascii_case(c);
        if letter(&tail[0], "q") && tail[1].is_punct(".") && letter(&tail[2], "e") && tail[3].is_punct(".") && letter(&tail[4], "d") {
            return Some(n - 5);
        }
    }
    None
}

/// Parse a submission, reporting only fatal structural problems as errors.
pub fn parse_document(source: &str) -> Result<ProblemDocument, DocumentError> {
    let doc = scan_document(source);
    match doc.structural_error() {
        Some(e) => Err(e),
        None => Ok(doc),
    }
}

/// Total version of [`parse_document`]: every sentence gets a slot.
pub fn scan_document(source: &str) -> ProblemDocument {
    let mut sentences: Vec<SentenceSlot> = Vec::new();
    let mut warnings = Vec::new();
    let mut proof_start = None;
    let mut goal_index = None;
    let mut goal = None;
    let mut section = Section::Header;

    for region in split_regions(source) {
        let mut start = region.start;
        let text = &source[start..region.end];
        if section == Section::Header && starts_with_word(text, "proof") {
            section = Section::Body;
            let after = &text["proof".len()..];
            let after_marker = after.trim_start().strip_prefix(':').unwrap_or(after);
            start = region.end - after_marker.trim_start().len();
            if start >= region.end {
                if proof_start.is_none() {
                    proof_start = Some(sentences.len());
                }
                continue;
            }
        }
        if section == Section::Body && proof_start.is_none() {
            proof_start = Some(sentences.len());
        }
        let text = &source[start..region.end];
        let index = sentences.len();
        let full_span = Span::new(start, region.end);

        if text.trim() == "□" {
            let ast = SentenceAst { index, span: full_span, cue: None, kind: SentenceKind::Qed };
            sentences.push(SentenceSlot { index, span: full_span, section, parsed: Ok(ast) });
            continue;
        }

        let tokens = match tokenize(text) {
            Ok(ts) => ts
                .into_iter()
                .map(|t| Token { span: t.span.shift(start), ..t })
                .collect::<Vec<_>>(),
            Err(e) => {
                let span = e.span().shift(start);
                let text = span.slice(source).to_string();
                sentences.push(SentenceSlot {
                    index,
                    span: full_span,
                    section,
                    parsed: Err(SentenceError::UnknownSymbol { span, text }),
                });
                continue;
            }
        };

        if section == Section::Header && goal_index.is_none() && announces_goal(text) {
            goal_index = Some(index);
        }

        let pieces: Vec<&[Token]> = match split_trailing_qed(&tokens) {
            Some(cut) if section == Section::Body => {
                warnings.push(TextWarning {
                    sentence: index,
                    span: Span::new(tokens[cut - 1].span.end, tokens[cut].span.start),
                    message: "missing period before 'qed'".into(),
                });
                vec![&tokens[..cut], &tokens[cut..]]
            }
            _ => vec![&tokens[..]],
        };
        for piece in pieces {
            let index = sentences.len();
            let span = if piece.len() == tokens.len() {
                full_span
            } else {
                piece[0].span.join(piece[piece.len() - 1].span)
            };
            let parsed = classify(piece, index).map(|mut ast| {
                ast.span = span;
                ast
            });
            if Some(index) == goal_index {
                if let Ok(SentenceAst {
                    kind: SentenceKind::GoalAnnounce { announcement: Announcement::Goal { formula } },
                    ..
                }) = &parsed
                {
                    goal = Some(formula.clone());
                }
            }
            sentences.push(SentenceSlot { index, span, section, parsed });
        }
        if !region.terminated && !text.trim_end().ends_with(['.', '□']) {
            warnings.push(TextWarning {
                sentence: sentences.len() - 1,
                span: Span::new(region.end, region.end),
                message: "missing period at the end of the text".into(),
            });
        }
    }

    ProblemDocument { source: source.to_string(), sentences, proof_start, goal_index, goal, warnings }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Term;

    const TEXT1: &str = "Let x be an integer. Prove: If x is even, then 2-3x is even.\n\
        Proof: Let x be even. Then there is an integer k such that x=2k. \
        Let k be an integer with x=2k. Then we have 2-3x=2-3*(2k)=2(1-3k). \
        Hence 2-3x is even. qed.";

    #[test]
    fn first_corpus_text() {
        let doc = parse_document(TEXT1).unwrap();
        assert_eq!(doc.sentences.len(), 8);
        assert_eq!(doc.proof_start, Some(2));
        assert_eq!(doc.declarations(), vec![("x", Sort::Integer)]);
        let expected_goal = Formula::implies(
            Formula::Even(Term::var("x")),
            Formula::Even(Term::sub(Term::int(2), Term::mul(Term::int(3), Term::var("x")))),
        );
        assert_eq!(doc.goal, Some(expected_goal));
        assert!(matches!(doc.sentences[7].parsed, Ok(SentenceAst { kind: SentenceKind::Qed, .. })));
        for s in &doc.sentences {
            assert!(s.parsed.is_ok(), "{:?}", s);
        }
        assert_eq!(doc.sentences[2].span.slice(TEXT1), "Let x be even");
    }

    #[test]
    fn empty_input_has_no_goal() {
        assert_eq!(parse_document("").unwrap_err(), DocumentError::MissingGoal);
        assert_eq!(parse_document("Let x be an integer. Prove: x = x.").unwrap_err(), DocumentError::MissingProofBody);
    }

    #[test]
    fn nonsense_sentence_is_isolated() {
        let text = TEXT1.replace("Hence 2-3x", "Then colorless ideas sleep. Hence 2-3x");
        let doc = parse_document(&text).unwrap();
        assert_eq!(doc.sentences.len(), 9);
        let bad: Vec<_> = doc.sentences.iter().filter(|s| s.parsed.is_err()).collect();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].index, 6);
        assert_eq!(bad[0].span.slice(&text), "Then colorless ideas sleep");
    }

    #[test]
    fn unknown_symbol_span() {
        let text = TEXT1.replace("Hence 2-3x is even.", "Hence x @@ y.");
        let doc = parse_document(&text).unwrap();
        let err = doc.sentences[6].parsed.clone().unwrap_err();
        assert_eq!(err.span().slice(&text), "@@");
    }

    #[test]
    fn missing_period_before_qed() {
        let text = TEXT1.replace("is even. qed.", "is even qed.");
        let doc = parse_document(&text).unwrap();
        assert_eq!(doc.sentences.len(), 8);
        assert_eq!(doc.warnings.len(), 1);
        assert!(doc.sentences.iter().all(|s| s.parsed.is_ok()));
    }

    #[test]
    fn proof_marker_with_period() {
        let text = "Let P be a proposition. Prove: P → P. Proof. Assume that P. Then P. qed.";
        let doc = parse_document(text).unwrap();
        assert_eq!(doc.sentences.len(), 5);
        assert_eq!(doc.proof_start, Some(2));
    }
}
