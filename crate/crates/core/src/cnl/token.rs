//! Lexical layer of the proof language.
//!
//! Alphabetic runs of two or more letters are words; a single letter
//! (optionally followed by digits) is an identifier. Unicode operators and
//! their ASCII fallbacks are symbols. Anything else is rejected.

use serde::Serialize;

use crate::span::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenKind {
    Word,
    Symbol,
    Number,
    Identifier,
    Punctuation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub span: Span,
}

impl Token {
    pub fn is_word(&self, w: &str) -> bool {
        self.kind == TokenKind::Word && self.text.eq_ignore_ascii_case(w)
    }

    pub fn is_punct(&self, p: &str) -> bool {
        self.kind == TokenKind::Punctuation && self.text == p
    }

    pub fn is_symbol(&self, s: &str) -> bool {
        self.kind == TokenKind::Symbol && self.text == s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LexError {
    #[error("unknown symbol {text:?}")]
    UnknownSymbol { text: String, span: Span },
}

impl LexError {
    pub fn span(&self) -> Span {
        match self {
            LexError::UnknownSymbol { span, .. } => *span,
        }
    }
}

/// Multi-character ASCII operators, longest first.
const ASCII_OPERATORS: &[&str] = &["->", "=>", "/\\", "\\/", "><"];

const SYMBOL_CHARS: &[char] = &[
    '+', '-', '\u{2212}', '*', '\u{b7}', '\u{22c5}', '^', '=', '(', ')', '\u{2208}', '\u{3b5}',
    '\u{ac}', '~', '!', '\u{2227}', '&', '\u{2228}', '\u{2229}', '\u{222a}', '\u{d7}', '\u{2282}',
    '\u{2286}', '\u{2192}', '\u{21d2}', '\u{22a5}', '|', '\u{2223}',
];

const PUNCTUATION_CHARS: &[char] = &['.', ',', ':', ';'];

fn is_known_start(c: char) -> bool {
    c.is_ascii_alphanumeric()
        || SYMBOL_CHARS.contains(&c)
        || PUNCTUATION_CHARS.contains(&c)
        || c == '/'
        || c == '\\'
        || c == '<'
        || c == '>'
}

/// Tokenize proof text. Schema metavariables (`?P`) are rejected.
pub fn tokenize(source: &str) -> Result<Vec<Token>, LexError> {
    lex(source, false)
}

/// Tokenize a pattern-catalog schema, where `?name` metavariables are identifiers.
pub fn tokenize_schema(source: &str) -> Result<Vec<Token>, LexError> {
    lex(source, true)
}

fn lex(source: &str, schema: bool) -> Result<Vec<Token>, LexError> {
    let mut tokens = Vec::new();
    let mut chars = source.char_indices().peekable();

    while let Some(&(start, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }

        if c.is_ascii_alphabetic() || (schema && c == '?') {
            let mut end = start + c.len_utf8();
            chars.next();
            let mut letters = usize::from(c != '?');
            while let Some(&(i, d)) = chars.peek() {
                if d.is_ascii_alphabetic() {
                    letters += 1;
                    end = i + d.len_utf8();
                    chars.next();
                } else {
                    break;
                }
            }
            let mut digits = false;
            if letters <= 1 {
                while let Some(&(i, d)) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits = true;
                        end = i + 1;
                        chars.next();
                    } else {
                        break;
                    }
                }
            }
            let text = &source[start..end];
            if c == '?' && letters == 0 {
                return Err(LexError::UnknownSymbol {
                    text: text.to_string(),
                    span: Span::new(start, end),
                });
            }
            let kind = if letters == 1 || digits || c == '?' {
                TokenKind::Identifier
            } else {
                TokenKind::Word
            };
            tokens.push(Token { kind, text: text.to_string(), span: Span::new(start, end) });
            continue;
        }

        if c.is_ascii_digit() {
            let mut end = start;
            while let Some(&(i, d)) = chars.peek() {
                if d.is_ascii_digit() {
                    end = i + 1;
                    chars.next();
                } else {
                    break;
                }
            }
            tokens.push(Token {
                kind: TokenKind::Number,
                text: source[start..end].to_string(),
                span: Span::new(start, end),
            });
            continue;
        }

        let rest = &source[start..];
        if let Some(op) = ASCII_OPERATORS.iter().find(|op| rest.starts_with(**op)) {
            for _ in 0..op.len() {
                chars.next();
            }
            tokens.push(Token {
                kind: TokenKind::Symbol,
                text: op.to_string(),
                span: Span::new(start, start + op.len()),
            });
            continue;
        }

        let end = start + c.len_utf8();
        if SYMBOL_CHARS.contains(&c) {
            chars.next();
            tokens.push(Token {
                kind: TokenKind::Symbol,
                text: c.to_string(),
                span: Span::new(start, end),
            });
            continue;
        }
        if PUNCTUATION_CHARS.contains(&c) {
            chars.next();
            tokens.push(Token {
                kind: TokenKind::Punctuation,
                text: c.to_string(),
                span: Span::new(start, end),
            });
            continue;
        }

        // Maximal run of characters outside the alphabet.
        let mut end = start;
        while let Some(&(i, d)) = chars.peek() {
            if d.is_whitespace() || is_known_start(d) {
                break;
            }
            end = i + d.len_utf8();
            chars.next();
        }
        if end == start {
            // A lone '/', '\\', '<' or '>' that did not form an operator.
            end = start + c.len_utf8();
        }
        return Err(LexError::UnknownSymbol {
            text: source[start..end].to_string(),
            span: Span::new(start, end),
        });
    }
    Ok(tokens)
}
