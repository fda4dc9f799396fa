//! Canonical surface rendering. Output re-parses to the same AST.

use std::fmt::{self, Display, Formatter};

use super::ast::{Formula, Term};

fn term_level(t: &Term) -> u8 {
    match t {
        Term::Add(..) | Term::Sub(..) => 1,
        Term::Mul(..) => 2,
        Term::Neg(_) => 3,
        Term::Pow(..) => 4,
        Term::Union(..) => 11,
        Term::Inter(..) => 12,
        Term::Prod(..) => 13,
        Term::Const(c) if c.sign() == num_bigint::Sign::Minus => 3,
        Term::Const(_) | Term::Var(_) | Term::SetVar(_) | Term::Pair(..) => 20,
    }
}

fn write_operand(f: &mut Formatter<'_>, t: &Term, min_level: u8) -> fmt::Result {
    let paren = term_level(t) < min_level || term_level(t) == 3;
    if paren {
        write!(f, "({t})")
    } else {
        write!(f, "{t}")
    }
}

/// `2k`, `3n^2`, `2(1 - 3k)`: a constant factor written by juxtaposition.
fn juxtaposes(a: &Term, b: &Term) -> bool {
    if !matches!(a, Term::Const(_)) {
        return false;
    }
    match b {
        Term::Var(_) => true,
        Term::Pow(base, _) => matches!(**base, Term::Var(_)),
        Term::Add(..) | Term::Sub(..) | Term::Neg(_) | Term::Mul(..) => true,
        _ => false,
    }
}

impl Display for Term {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) => write!(f, "{c}"),
            Term::Var(n) | Term::SetVar(n) => f.write_str(n),
            Term::Neg(a) => {
                f.write_str("-")?;
                write_operand(f, a, 3)
            }
            Term::Add(a, b) => {
                write_operand(f, a, 1)?;
                f.write_str(" + ")?;
                write_operand(f, b, 2)
            }
            Term::Sub(a, b) => {
                write_operand(f, a, 1)?;
                f.write_str(" - ")?;
                write_operand(f, b, 2)
            }
            Term::Mul(a, b) => {
                write_operand(f, a, 2)?;
                if juxtaposes(a, b) {
                    // a parenthesised or bare factor directly after the constant
                    let paren = term_level(b) < 3 || matches!(**b, Term::Neg(_));
                    if paren {
                        write!(f, "({b})")
                    } else {
                        write!(f, "{b}")
                    }
                } else {
                    f.write_str("·")?;
                    write_operand(f, b, 3)
                }
            }
            Term::Pow(a, e) => {
                write_operand(f, a, 20)?;
                write!(f, "^{e}")
            }
            Term::Union(a, b) => {
                write_operand(f, a, 11)?;
                f.write_str(" ∪ ")?;
                write_operand(f, b, 12)
            }
            Term::Inter(a, b) => {
                write_operand(f, a, 12)?;
                f.write_str(" ∩ ")?;
                write_operand(f, b, 13)
            }
            Term::Prod(a, b) => {
                write_operand(f, a, 13)?;
                f.write_str(" × ")?;
                write_operand(f, b, 14)
            }
            Term::Pair(a, b) => write!(f, "({a}, {b})"),
        }
    }
}

fn formula_level(x: &Formula) -> u8 {
    match x {
        Formula::Implies(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        Formula::Not(inner) if matches!(**inner, Formula::Even(_) | Formula::Odd(_)) => 5,
        Formula::Not(_) => 4,
        _ => 5,
    }
}

fn write_sub(f: &mut Formatter<'_>, x: &Formula, min_level: u8) -> fmt::Result {
    if formula_level(x) < min_level {
        write!(f, "({x})")
    } else {
        write!(f, "{x}")
    }
}

impl Display for Formula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Formula::PropVar(n) => f.write_str(n),
            Formula::False => f.write_str("⊥"),
            Formula::Not(inner) => match &**inner {
                Formula::Even(t) => write!(f, "{t} is not even"),
                Formula::Odd(t) => write!(f, "{t} is not odd"),
                other => {
                    f.write_str("¬")?;
                    write_sub(f, other, 4)
                }
            },
            Formula::And(a, b) => {
                write_sub(f, a, 3)?;
                f.write_str(" ∧ ")?;
                write_sub(f, b, 4)
            }
            Formula::Or(a, b) => {
                write_sub(f, a, 2)?;
                f.write_str(" ∨ ")?;
                write_sub(f, b, 3)
            }
            Formula::Implies(a, b) => {
                write_sub(f, a, 2)?;
                f.write_str(" → ")?;
                write_sub(f, b, 1)
            }
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::In(a, b) => write!(f, "{a} ∈ {b}"),
            Formula::Subset(a, b) => write!(f, "{a} ⊂ {b}"),
            Formula::Even(t) => write!(f, "{t} is even"),
            Formula::Odd(t) => write!(f, "{t} is odd"),
            Formula::Divides(d, t) => write!(f, "{d} divides {t}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_corpus_shapes() {
        let t = Term::sub(Term::int(2), Term::mul(Term::int(3), Term::var("x")));
        assert_eq!(t.to_string(), "2 - 3x");
        let t = Term::mul(Term::int(2), Term::sub(Term::int(1), Term::mul(Term::int(3), Term::var("k"))));
        assert_eq!(t.to_string(), "2(1 - 3k)");
        let s = Formula::Subset(
            Term::prod(Term::inter(Term::set("A"), Term::set("B")), Term::set("C")),
            Term::prod(Term::set("A"), Term::union(Term::set("B"), Term::set("C"))),
        );
        assert_eq!(s.to_string(), "(A ∩ B) × C ⊂ A × (B ∪ C)");
        let g = Formula::implies(Formula::Even(Term::var("x")), Formula::Even(t));
        assert_eq!(g.to_string(), "x is even → 2(1 - 3k) is even");
    }

    #[test]
    fn negated_parity_reads_naturally() {
        let f = Formula::not(Formula::Odd(Term::add(Term::pow(Term::var("x"), 2), Term::int(2))));
        assert_eq!(f.to_string(), "x^2 + 2 is not odd");
    }
}
