use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::ast::{Formula, Term};

/// Direct evaluation of an integer term at an integer point.
///
/// Returns `None` for set terms, pairs, unbound variables and non-constant
/// or oversized exponents.
pub fn eval_term(t: &Term, env: &BTreeMap<String, BigInt>) -> Option<BigInt> {
    Some(match t {
        Term::Const(c) => c.clone(),
        Term::Var(n) => env.get(n)?.clone(),
        Term::Neg(a) => -eval_term(a, env)?,
        Term::Add(a, b) => eval_term(a, env)? + eval_term(b, env)?,
        Term::Sub(a, b) => eval_term(a, env)? - eval_term(b, env)?,
        Term::Mul(a, b) => eval_term(a, env)? * eval_term(b, env)?,
        Term::Pow(a, e) => {
            let base = eval_term(a, env)?;
            let exp = match &**e {
                Term::Const(c) => c.to_u32()?,
                _ => return None,
            };
            num_traits::pow(base, exp as usize)
        }
        _ => return None,
    })
}

/// Truth of an arithmetic formula (no sets, no propositional variables).
pub fn eval_arith(f: &Formula, env: &BTreeMap<String, BigInt>) -> Option<bool> {
    Some(match f {
        Formula::False => false,
        Formula::Not(a) => !eval_arith(a, env)?,
        Formula::And(a, b) => eval_arith(a, env)? && eval_arith(b, env)?,
        Formula::Or(a, b) => eval_arith(a, env)? || eval_arith(b, env)?,
        Formula::Implies(a, b) => !eval_arith(a, env)? || eval_arith(b, env)?,
        Formula::Eq(a, b) => eval_term(a, env)? == eval_term(b, env)?,
        Formula::Even(t) => (eval_term(t, env)? % 2u32).is_zero(),
        Formula::Odd(t) => !(eval_term(t, env)? % 2u32).is_zero(),
        Formula::Divides(d, t) => {
            let d = eval_term(d, env)?;
            if d.is_zero() {
                return None;
            }
            (eval_term(t, env)? % d).is_zero()
        }
        Formula::PropVar(_) | Formula::In(..) | Formula::Subset(..) => return None,
    })
}
