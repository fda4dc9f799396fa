//! Controlled natural language front end: tokens, formulas, sentences, documents.

pub mod document;
pub mod formula;
pub mod render;
pub mod sentence;
pub mod token;

pub use document::{parse_document, scan_document, DocumentError, ProblemDocument, Section, SentenceSlot, TextWarning};
pub use formula::{parse_formula, parse_set_term, parse_term, FormulaError};
pub use render::render_sentence;
pub use sentence::{classify, Announcement, Method, SentenceAst, SentenceError, SentenceKind};
pub use token::{tokenize, tokenize_schema, LexError, Token, TokenKind};
