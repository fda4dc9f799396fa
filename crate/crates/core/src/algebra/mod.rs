//! Canonical polynomial forms for integer terms, used to check equation
//! chains, parity and divisibility claims.

mod polynomial;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

pub use polynomial::{Monomial, Polynomial};

use crate::logic::Term;

pub const DEFAULT_MAX_EXPONENT: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, Serialize)]
pub enum AlgebraError {
    #[error("exponent {exponent} exceeds the bound {bound}")]
    ExponentTooLarge { exponent: String, bound: u32 },
    #[error("{0} is not an integer term")]
    NotAnIntegerTerm(String),
    #[error("exponent {0} is not a constant")]
    NonConstantExponent(String),
    #[error("the equations for {0} refer to each other in a cycle")]
    SubstitutionCycle(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormalizeConfig {
    pub max_exponent: u32,
}

impl Default for NormalizeConfig {
    fn default() -> Self {
        NormalizeConfig { max_exponent: DEFAULT_MAX_EXPONENT }
    }
}

/// Canonical form of an integer term with the default exponent bound.
pub fn normalize(term: &Term) -> Result<Polynomial, AlgebraError> {
    normalize_with(term, NormalizeConfig::default())
}

pub fn normalize_with(term: &Term, config: NormalizeConfig) -> Result<Polynomial, AlgebraError> {
    Ok(match term {
        Term::Const(c) => Polynomial::constant(c.clone()),
        Term::Var(n) => Polynomial::var(n),
        Term::Neg(a) => normalize_with(a, config)?.neg(),
        Term::Add(a, b) => normalize_with(a, config)?.add(&normalize_with(b, config)?),
        Term::Sub(a, b) => normalize_with(a, config)?.sub(&normalize_with(b, config)?),
        Term::Mul(a, b) => normalize_with(a, config)?.mul(&normalize_with(b, config)?),
        Term::Pow(a, e) => {
            let exponent = match &**e {
                Term::Const(c) if !c.is_negative() => c,
                other => return Err(AlgebraError::NonConstantExponent(other.to_string())),
            };
            let small = exponent
                .to_u32()
                .filter(|e| *e <= config.max_exponent)
                .ok_or_else(|| AlgebraError::ExponentTooLarge {
                    exponent: exponent.to_string(),
                    bound: config.max_exponent,
                })?;
            normalize_with(a, config)?.pow(small)
        }
        other => return Err(AlgebraError::NotAnIntegerTerm(other.to_string())),
    })
}

/// An oriented equality `var = value`, used as a rewrite from left to right.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Equation {
    pub var: String,
    pub value: Term,
}

impl Equation {
    pub fn new(var: &str, value: Term) -> Self {
        Equation { var: var.to_string(), value }
    }
}

/// Apply the equations to `term` until no defined variable remains.
///
/// Only the first equation for a given variable is used. At most
/// `equations.len() + 1` rounds are performed; a defined variable still
/// present afterwards means the equations are cyclic.
pub fn resolve(equations: &[Equation], term: &Term) -> Result<Term, AlgebraError> {
    let mut map: BTreeMap<String, Term> = BTreeMap::new();
    for eq in equations {
        map.entry(eq.var.clone()).or_insert_with(|| eq.value.clone());
    }
    let mut current = term.clone();
    for _ in 0..=equations.len() {
        let remaining: Vec<_> = current.int_vars().into_iter().filter(|v| map.contains_key(v)).collect();
        if remaining.is_empty() {
            return Ok(current);
        }
        current = current.substitute(&map);
    }
    match current.int_vars().into_iter().find(|v| map.contains_key(v)) {
        Some(v) => Err(AlgebraError::SubstitutionCycle(v)),
        None => Ok(current),
    }
}

/// The longest usable sub-list: first definition per variable, skipping any
/// equation that would close a cycle.
pub fn acyclic_equations(equations: &[Equation]) -> Vec<Equation> {
    let mut kept: Vec<Equation> = Vec::new();
    for eq in equations {
        if kept.iter().any(|k| k.var == eq.var) {
            continue;
        }
        let mut candidate = kept.clone();
        candidate.push(eq.clone());
        if resolve(&candidate, &Term::Var(eq.var.clone())).is_ok() {
            kept = candidate;
        }
    }
    kept
}

/// Normal form of `term` after rewriting with `equations`.
pub fn normalize_under(equations: &[Equation], term: &Term) -> Result<Polynomial, AlgebraError> {
    normalize(&resolve(equations, term)?)
}

/// Whether `lhs` and `rhs` have the same canonical form once the oriented
/// equations have been applied to a fixpoint.
pub fn equal_under(equations: &[Equation], lhs: &Term, rhs: &Term) -> Result<bool, AlgebraError> {
    Ok(normalize_under(equations, lhs)? == normalize_under(equations, rhs)?)
}

/// Quotient `q` with `term = d·q` when every coefficient of the rewritten
/// normal form is divisible by `d`.
pub fn divisibility_certificate(d: &BigInt, term: &Term, equations: &[Equation]) -> Option<Polynomial> {
    if !d.is_positive() {
        return None;
    }
    normalize_under(equations, term).ok()?.exact_div_int(d)
}

/// Representations `p = (v + a)(v + a + 1)·q` for a variable `v` of `p` and a
/// small shift `a`. The product of two consecutive integers is even.
pub fn consecutive_factorizations(p: &Polynomial) -> Vec<(String, i64, Polynomial)> {
    let mut out = Vec::new();
    if p.is_zero() {
        return out;
    }
    for var in p.vars() {
        if p.degree_in(&var) < 2 {
            continue;
        }
        for shift in -3i64..=3 {
            // roots of (v + a)(v + a + 1) are -a and -a - 1
            let r1 = BigInt::from(-shift);
            let r2 = BigInt::from(-shift - 1);
            if let Some(q) = p.div_linear(&var, &r1).and_then(|q| q.div_linear(&var, &r2)) {
                out.push((var.clone(), shift, q));
            }
        }
    }
    out
}

/// `d | p` via `p = c·u(u+1)·r` with `d | 2c`.
pub fn parity_product_certificate(d: &BigInt, p: &Polynomial) -> Option<(String, i64, BigInt)> {
    if !d.is_positive() {
        return None;
    }
    let two = BigInt::from(2);
    consecutive_factorizations(p).into_iter().find_map(|(var, shift, q)| {
        let c = q.content();
        ((&two * &c) % d).is_zero().then_some((var, shift, c))
    })
}

/// Splits `p` as `alpha·var + beta` where `alpha` is an integer constant and
/// `beta` does not mention `var`.
pub fn linear_in(p: &Polynomial, var: &str) -> Option<(BigInt, Polynomial)> {
    if p.degree_in(var) != 1 {
        return None;
    }
    let coeffs = p.coefficients_in(var);
    let alpha = coeffs[1].as_constant()?;
    if alpha.is_zero() {
        return None;
    }
    Some((alpha, coeffs[0].clone()))
}

pub fn is_unit(c: &BigInt) -> bool {
    c.abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> Term {
        Term::var("k")
    }

    fn poly(entries: &[(&[(&str, u32)], i64)]) -> Polynomial {
        Polynomial::from_terms(entries.iter().map(|(vars, c)| {
            let mut m = Polynomial::constant(1);
            for (v, e) in vars.iter() {
                m = m.mul(&Polynomial::var(v).pow(*e));
            }
            let (mono, _) = m.terms().next().map(|(m, c)| (m.clone(), c.clone())).unwrap();
            (mono, BigInt::from(*c))
        }))
    }

    #[test]
    fn square_of_double_plus_two() {
        let t = Term::add(Term::pow(Term::mul(Term::int(2), k()), 2), Term::int(2));
        assert_eq!(normalize(&t).unwrap(), poly(&[(&[("k", 2)], 4), (&[], 2)]));
    }

    #[test]
    fn self_difference_is_zero() {
        let t = Term::sub(Term::var("x"), Term::var("x"));
        assert!(normalize(&t).unwrap().is_zero());
    }

    #[test]
    fn factored_linear_form() {
        let t = Term::mul(Term::int(2), Term::sub(Term::int(1), Term::mul(Term::int(3), k())));
        assert_eq!(normalize(&t).unwrap(), poly(&[(&[("k", 1)], -6), (&[], 2)]));
    }

    #[test]
    fn exponent_bound() {
        let t = Term::pow(Term::var("x"), 17);
        assert!(matches!(normalize(&t), Err(AlgebraError::ExponentTooLarge { .. })));
        let cfg = NormalizeConfig { max_exponent: 20 };
        assert!(normalize_with(&t, cfg).is_ok());
    }

    #[test]
    fn set_terms_are_rejected() {
        assert!(matches!(normalize(&Term::set("A")), Err(AlgebraError::NotAnIntegerTerm(_))));
    }

    #[test]
    fn chain_link_under_definition() {
        let eqs = [Equation::new("x", Term::mul(Term::int(2), k()))];
        let lhs = Term::sub(Term::int(2), Term::mul(Term::int(3), Term::var("x")));
        let rhs = Term::mul(Term::int(2), Term::sub(Term::int(1), Term::mul(Term::int(3), k())));
        assert_eq!(equal_under(&eqs, &lhs, &rhs), Ok(true));
    }

    #[test]
    fn freshman_square_differs() {
        let a = Term::var("A");
        let b = Term::var("B");
        let lhs = Term::pow(Term::add(a.clone(), b.clone()), 2);
        let rhs = Term::add(Term::pow(a, 2), Term::pow(b, 2));
        assert_eq!(equal_under(&[], &lhs, &rhs), Ok(false));
    }

    #[test]
    fn reflexive_without_equations() {
        let t = Term::pow(Term::sub(Term::var("y"), Term::int(7)), 3);
        assert_eq!(equal_under(&[], &t, &t), Ok(true));
    }

    #[test]
    fn cycles_are_detected() {
        let eqs = [
            Equation::new("x", Term::add(Term::var("y"), Term::int(1))),
            Equation::new("y", Term::sub(Term::var("x"), Term::int(1))),
        ];
        assert!(matches!(
            equal_under(&eqs, &Term::var("x"), &Term::var("y")),
            Err(AlgebraError::SubstitutionCycle(_))
        ));
        assert_eq!(acyclic_equations(&eqs).len(), 1);
    }

    #[test]
    fn chained_definitions_resolve() {
        let eqs = [
            Equation::new("x", Term::add(Term::var("y"), Term::int(1))),
            Equation::new("y", Term::mul(Term::int(2), Term::var("m"))),
        ];
        assert_eq!(
            equal_under(&eqs, &Term::var("x"), &Term::add(Term::mul(Term::int(2), Term::var("m")), Term::int(1))),
            Ok(true)
        );
    }

    #[test]
    fn certificate_for_three_n_squared() {
        let eqs = [Equation::new("n", Term::mul(Term::int(2), Term::var("m")))];
        let t = Term::mul(Term::int(3), Term::pow(Term::var("n"), 2));
        let q = divisibility_certificate(&BigInt::from(4), &t, &eqs).unwrap();
        assert_eq!(q, poly(&[(&[("m", 2)], 3)]));
    }

    #[test]
    fn unit_divisor_returns_normal_form() {
        let t = Term::add(Term::mul(Term::int(2), k()), Term::int(1));
        assert_eq!(divisibility_certificate(&BigInt::from(1), &t, &[]), Some(normalize(&t).unwrap()));
    }

    #[test]
    fn odd_constant_blocks_certificate() {
        let t = Term::add(Term::mul(Term::int(2), k()), Term::int(1));
        assert_eq!(divisibility_certificate(&BigInt::from(2), &t, &[]), None);
    }

    #[test]
    fn consecutive_product_found() {
        // (2n - 1)^2 - 1 = 4n^2 - 4n = 4 (n - 1) n
        let t = Term::sub(
            Term::pow(Term::sub(Term::mul(Term::int(2), Term::var("n")), Term::int(1)), 2),
            Term::int(1),
        );
        let p = normalize(&t).unwrap();
        let (var, shift, c) = parity_product_certificate(&BigInt::from(8), &p).unwrap();
        assert_eq!((var.as_str(), shift, c), ("n", -1, BigInt::from(4)));
        assert!(parity_product_certificate(&BigInt::from(16), &p).is_none());
    }

    #[test]
    fn linear_witness_split() {
        let p = normalize(&Term::sub(Term::var("x"), Term::mul(Term::int(2), k()))).unwrap();
        let (alpha, beta) = linear_in(&p, "k").unwrap();
        assert_eq!(alpha, BigInt::from(-2));
        assert_eq!(beta, Polynomial::var("x"));
    }
}
