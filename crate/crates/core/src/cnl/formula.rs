//! Recursive-descent parser for formulas and terms.
//!
//! Precedence, loosest first: `→`, `∨`, `∧`, `¬`, relations. Terms:
//! `+ -`, `* ·` (and juxtaposition `2k`), unary minus, `^`. Sets: `∪`, `∩`, `×`.
//! Alternatives are tried with backtracking; on failure the error that got
//! furthest into the input is reported.

use num_bigint::BigInt;

use super::token::{Token, TokenKind};
use crate::logic::{Formula, Term};
use crate::span::Span;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed formula: expected {expected}")]
pub struct FormulaError {
    pub span: Span,
    pub expected: String,
}

/// Words that may occur inside a formula.
pub const FORMULA_WORDS: &[&str] = &[
    "if", "then", "or", "and", "not", "implies", "is", "even", "odd", "divides", "divisible", "by",
    "in", "cap", "cup", "sub", "false",
];

#[derive(Debug)]
struct Failure {
    pos: usize,
    expected: String,
}

type PResult<T> = Result<T, Failure>;

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
}

/// Parse a complete formula from a token region.
pub fn parse_formula(tokens: &[Token]) -> Result<Formula, FormulaError> {
    let mut p = Parser { tokens, pos: 0 };
    let result = p.formula().and_then(|f| {
        if p.pos < tokens.len() {
            Err(Failure { pos: p.pos, expected: "end of formula".into() })
        } else {
            Ok(f)
        }
    });
    result.map_err(|f| p.to_error(f))
}

/// Parse a complete integer or pair term.
pub fn parse_term(tokens: &[Token]) -> Result<Term, FormulaError> {
    let mut p = Parser { tokens, pos: 0 };
    let result = p.term().and_then(|t| {
        if p.pos < tokens.len() {
            Err(Failure { pos: p.pos, expected: "end of term".into() })
        } else {
            Ok(t)
        }
    });
    result.map_err(|f| p.to_error(f))
}

/// Parse a complete set term.
pub fn parse_set_term(tokens: &[Token]) -> Result<Term, FormulaError> {
    let mut p = Parser { tokens, pos: 0 };
    let result = p.set_term().and_then(|t| {
        if p.pos < tokens.len() {
            Err(Failure { pos: p.pos, expected: "end of set term".into() })
        } else {
            Ok(t)
        }
    });
    result.map_err(|f| p.to_error(f))
}

fn furthest(a: Failure, b: Failure) -> Failure {
    if b.pos > a.pos {
        b
    } else {
        a
    }
}

impl<'t> Parser<'t> {
    fn to_error(&self, f: Failure) -> FormulaError {
        let span = match self.tokens.get(f.pos) {
            Some(t) => t.span,
            None => self
                .tokens
                .last()
                .map(|t| Span::new(t.span.end, t.span.end))
                .unwrap_or_default(),
        };
        FormulaError { span, expected: f.expected }
    }

    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.pos)
    }

    fn fail<T>(&self, expected: &str) -> PResult<T> {
        Err(Failure { pos: self.pos, expected: expected.to_string() })
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if self.peek().is_some_and(|t| t.is_word(w)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_symbol(&mut self, options: &[&str]) -> bool {
        if self
            .peek()
            .is_some_and(|t| t.kind == TokenKind::Symbol && options.contains(&t.text.as_str()))
        {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.peek().is_some_and(|t| t.is_punct(p)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// Try `f`; restore the position if it fails.
    fn attempt<T>(&mut self, f: impl FnOnce(&mut Self) -> PResult<T>) -> PResult<T> {
        let saved = self.pos;
        let r = f(self);
        if r.is_err() {
            self.pos = saved;
        }
        r
    }

    fn formula(&mut self) -> PResult<Formula> {
        if self.eat_word("if") {
            let antecedent = self.formula()?;
            if !self.eat_punct(",") && !self.peek().is_some_and(|t| t.is_word("then")) {
                return self.fail("',' or 'then'");
            }
            if !self.eat_word("then") {
                return self.fail("'then'");
            }
            let consequent = self.formula()?;
            return Ok(Formula::implies(antecedent, consequent));
        }
        let lhs = self.disjunction()?;
        if self.eat_symbol(&["→", "->", "=>", "⇒"]) || self.eat_word("implies") {
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn at_legacy_or(&self) -> bool {
        // `v` as disjunction only when separated by whitespace on both sides
        let Some(t) = self.peek() else { return false };
        if t.kind != TokenKind::Identifier || t.text != "v" || self.pos == 0 {
            return false;
        }
        let prev = &self.tokens[self.pos - 1];
        let next = self.tokens.get(self.pos + 1);
        prev.span.end < t.span.start && next.is_some_and(|n| t.span.end < n.span.start)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.conjunction()?;
        loop {
            if self.at_legacy_or() {
                self.pos += 1;
            } else if !(self.eat_symbol(&["∨", "\\/"]) || self.eat_word("or")) {
                break;
            }
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.unary()?;
        while self.eat_symbol(&["∧", "/\\", "&"]) || self.eat_word("and") {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Formula> {
        if self.eat_symbol(&["¬", "~", "!"]) || self.eat_word("not") {
            return Ok(Formula::not(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> PResult<Formula> {
        if self.eat_symbol(&["⊥"]) || self.eat_word("false") {
            return Ok(Formula::False);
        }
        let e1 = match self.attempt(|p| p.term_relation()) {
            Ok(f) => return Ok(f),
            Err(e) => e,
        };
        let e2 = match self.attempt(|p| p.set_relation()) {
            Ok(f) => return Ok(f),
            Err(e) => e,
        };
        let mut err = furthest(e1, e2);
        if self.peek().is_some_and(|t| t.is_symbol("(")) {
            match self.attempt(|p| {
                p.pos += 1;
                let f = p.formula()?;
                if !p.eat_symbol(&[")"]) {
                    return p.fail("')'");
                }
                Ok(f)
            }) {
                Ok(f) => return Ok(f),
                Err(e) => err = furthest(err, e),
            }
        }
        if let Some(t) = self.peek() {
            if t.kind == TokenKind::Identifier {
                let next_is_operand_continuation = self
                    .tokens
                    .get(self.pos + 1)
                    .is_some_and(|n| relation_start(n) || arithmetic_op(n) || set_op(n));
                if !next_is_operand_continuation {
                    self.pos += 1;
                    return Ok(Formula::PropVar(t.text.clone()));
                }
            }
        }
        if err.pos == self.pos {
            err.expected = "a statement".into();
        }
        Err(err)
    }

    fn term_relation(&mut self) -> PResult<Formula> {
        let lhs = self.term()?;
        if self.eat_symbol(&["="]) {
            let mut links = Vec::new();
            let mut prev = lhs;
            loop {
                let next = self.term()?;
                links.push(Formula::Eq(prev, next.clone()));
                prev = next;
                if !self.eat_symbol(&["="]) {
                    break;
                }
            }
            return Ok(Formula::conjoin(links).expect("at least one link"));
        }
        if self.eat_symbol(&["∈", "ε"]) || self.eat_word("in") {
            let set = self.set_term()?;
            return Ok(Formula::In(lhs, set));
        }
        if self.eat_word("is") {
            let negated = self.eat_word("not");
            let f = if self.eat_word("even") {
                Formula::Even(lhs)
            } else if self.eat_word("odd") {
                Formula::Odd(lhs)
            } else if self.eat_word("divisible") {
                if !self.eat_word("by") {
                    return self.fail("'by'");
                }
                let d = self.term()?;
                Formula::Divides(d, lhs)
            } else {
                return self.fail("'even', 'odd' or 'divisible by'");
            };
            return Ok(if negated { Formula::not(f) } else { f });
        }
        if self.eat_word("divides") || self.eat_symbol(&["|", "∣"]) {
            let rhs = self.term()?;
            return Ok(Formula::Divides(lhs, rhs));
        }
        self.fail("'=', '∈', 'is' or 'divides'")
    }

    fn set_relation(&mut self) -> PResult<Formula> {
        let lhs = self.set_term()?;
        if self.eat_symbol(&["⊂", "⊆"]) || self.eat_word("sub") {
            let rhs = self.set_term()?;
            return Ok(Formula::Subset(lhs, rhs));
        }
        self.fail("'⊂'")
    }

    // ---- integer and pair terms ----

    fn term(&mut self) -> PResult<Term> {
        let mut lhs = self.product()?;
        loop {
            if self.eat_symbol(&["+"]) {
                lhs = Term::add(lhs, self.product()?);
            } else if self.eat_symbol(&["-", "−"]) {
                lhs = Term::sub(lhs, self.product()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn implicit_product_follows(&self) -> bool {
        let (Some(prev), Some(next)) = (self.pos.checked_sub(1).map(|i| &self.tokens[i]), self.peek()) else {
            return false;
        };
        if prev.span.end != next.span.start {
            return false;
        }
        let prev_ok = matches!(prev.kind, TokenKind::Number | TokenKind::Identifier) || prev.is_symbol(")");
        let next_ok = next.kind == TokenKind::Identifier || next.is_symbol("(");
        prev_ok && next_ok
    }

    fn product(&mut self) -> PResult<Term> {
        let mut lhs = self.negation()?;
        loop {
            if self.eat_symbol(&["*", "·", "⋅"]) {
                lhs = Term::mul(lhs, self.negation()?);
            } else if self.implicit_product_follows() {
                lhs = Term::mul(lhs, self.power()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn negation(&mut self) -> PResult<Term> {
        if self.eat_symbol(&["-", "−"]) {
            return Ok(Term::neg(self.negation()?));
        }
        self.power()
    }

    fn power(&mut self) -> PResult<Term> {
        let base = self.primary()?;
        if self.eat_symbol(&["^"]) {
            let Some(t) = self.peek() else { return self.fail("an exponent") };
            let exponent = match t.kind {
                TokenKind::Number => Term::Const(t.text.parse::<BigInt>().expect("digits")),
                TokenKind::Identifier if t.text.starts_with('?') => Term::Var(t.text.clone()),
                _ => return self.fail("a number as exponent"),
            };
            self.pos += 1;
            return Ok(Term::Pow(Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> PResult<Term> {
        let Some(t) = self.peek() else { return self.fail("a term") };
        match t.kind {
            TokenKind::Number => {
                self.pos += 1;
                Ok(Term::Const(t.text.parse::<BigInt>().expect("digits")))
            }
            TokenKind::Identifier => {
                self.pos += 1;
                Ok(Term::Var(t.text.clone()))
            }
            TokenKind::Symbol if t.text == "(" => {
                self.pos += 1;
                let first = self.term()?;
                if self.eat_punct(",") {
                    let second = self.term()?;
                    if !self.eat_symbol(&[")"]) {
                        return self.fail("')'");
                    }
                    return Ok(Term::pair(first, second));
                }
                if !self.eat_symbol(&[")"]) {
                    return self.fail("')'");
                }
                Ok(first)
            }
            _ => self.fail("a term"),
        }
    }

    // ---- set terms ----

    fn set_term(&mut self) -> PResult<Term> {
        let mut lhs = self.set_intersection()?;
        while self.eat_symbol(&["∪"]) || self.eat_word("cup") {
            lhs = Term::union(lhs, self.set_intersection()?);
        }
        Ok(lhs)
    }

    fn set_intersection(&mut self) -> PResult<Term> {
        let mut lhs = self.set_product()?;
        while self.eat_symbol(&["∩"]) || self.eat_word("cap") {
            lhs = Term::inter(lhs, self.set_product()?);
        }
        Ok(lhs)
    }

    fn set_product(&mut self) -> PResult<Term> {
        let mut lhs = self.set_primary()?;
        while self.eat_symbol(&["×", "><"]) {
            lhs = Term::prod(lhs, self.set_primary()?);
        }
        Ok(lhs)
    }

    fn set_primary(&mut self) -> PResult<Term> {
        let Some(t) = self.peek() else { return self.fail("a set") };
        match t.kind {
            TokenKind::Identifier => {
                self.pos += 1;
                Ok(Term::SetVar(t.text.clone()))
            }
            TokenKind::Symbol if t.text == "(" => {
                self.pos += 1;
                let inner = self.set_term()?;
                if !self.eat_symbol(&[")"]) {
                    return self.fail("')'");
                }
                Ok(inner)
            }
            _ => self.fail("a set"),
        }
    }
}

fn relation_start(t: &Token) -> bool {
    (t.kind == TokenKind::Symbol && ["=", "∈", "ε", "⊂", "⊆", "|", "∣"].contains(&t.text.as_str()))
        || ["is", "in", "divides", "sub"].iter().any(|w| t.is_word(w))
}

fn arithmetic_op(t: &Token) -> bool {
    t.kind == TokenKind::Symbol && ["+", "-", "−", "*", "·", "⋅", "^"].contains(&t.text.as_str())
}

fn set_op(t: &Token) -> bool {
    (t.kind == TokenKind::Symbol && ["∩", "∪", "×", "><"].contains(&t.text.as_str()))
        || t.is_word("cap")
        || t.is_word("cup")
}
