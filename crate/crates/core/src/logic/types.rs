use std::collections::BTreeMap;

use indexmap::IndexMap;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::ast::{is_meta, Formula, Sort, Term};

/// Declared names and their sorts, in declaration order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TypeContext {
    bindings: IndexMap<String, Sort>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, Serialize)]
pub enum TypeError {
    #[error("variable {name} was not declared")]
    UndeclaredVariable { name: String },
    #[error("{name} is declared as {declared} but used as {required}")]
    TypeMismatch { name: String, declared: Sort, required: Sort },
    #[error("{name} is a term, not a statement")]
    AssumedNonProposition { name: String },
    #[error("{name} is already declared")]
    Redeclared { name: String },
    #[error("{detail}")]
    IllFormed { detail: String },
}

impl TypeError {
    /// The variable the error is about, if any.
    pub fn name(&self) -> Option<&str> {
        match self {
            TypeError::UndeclaredVariable { name }
            | TypeError::TypeMismatch { name, .. }
            | TypeError::AssumedNonProposition { name }
            | TypeError::Redeclared { name } => Some(name),
            TypeError::IllFormed { .. } => None,
        }
    }
}

impl TypeContext {
    pub fn new() -> Self {
        Self::default()
    }

    /// Bind a fresh name; shadowing is forbidden.
    pub fn declare(&mut self, name: &str, sort: Sort) -> Result<(), TypeError> {
        if self.bindings.contains_key(name) {
            return Err(TypeError::Redeclared { name: name.to_string() });
        }
        self.bindings.insert(name.to_string(), sort);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<Sort> {
        self.bindings.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.bindings.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Sort)> {
        self.bindings.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn with(&self, name: &str, sort: Sort) -> Result<TypeContext, TypeError> {
        let mut c = self.clone();
        c.declare(name, sort)?;
        Ok(c)
    }

    fn expect(&self, name: &str, required: Sort) -> Result<(), TypeError> {
        match self.get(name) {
            None => Err(TypeError::UndeclaredVariable { name: name.to_string() }),
            Some(s) if s == required => Ok(()),
            Some(declared) => Err(TypeError::TypeMismatch {
                name: name.to_string(),
                declared,
                required,
            }),
        }
    }
}

/// A formula whose every variable occurrence resolved to the sort its
/// operator requires.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypedFormula {
    pub formula: Formula,
    pub sorts: BTreeMap<String, Sort>,
}

impl TypedFormula {
    pub fn formula(&self) -> &Formula {
        &self.formula
    }
}

/// Check `formula` against `ctx`.
pub fn typecheck(formula: &Formula, ctx: &TypeContext) -> Result<TypedFormula, TypeError> {
    let mut sorts = BTreeMap::new();
    check_formula(formula, ctx, &mut sorts)?;
    Ok(TypedFormula { formula: formula.clone(), sorts })
}

fn record(sorts: &mut BTreeMap<String, Sort>, name: &str, sort: Sort) {
    sorts.insert(name.to_string(), sort);
}

fn check_formula(
    f: &Formula,
    ctx: &TypeContext,
    sorts: &mut BTreeMap<String, Sort>,
) -> Result<(), TypeError> {
    match f {
        Formula::False => Ok(()),
        Formula::PropVar(n) => {
            if is_meta(n) {
                return Ok(());
            }
            match ctx.get(n) {
                Some(Sort::Proposition) => {
                    record(sorts, n, Sort::Proposition);
                    Ok(())
                }
                Some(_) => Err(TypeError::AssumedNonProposition { name: n.clone() }),
                None => Err(TypeError::UndeclaredVariable { name: n.clone() }),
            }
        }
        Formula::Not(a) => check_formula(a, ctx, sorts),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            check_formula(a, ctx, sorts)?;
            check_formula(b, ctx, sorts)
        }
        Formula::Eq(a, b) => {
            let sa = check_term(a, ctx, sorts)?;
            let sb = check_term(b, ctx, sorts)?;
            if sa != sb {
                return Err(TypeError::IllFormed {
                    detail: format!("cannot compare {sa} {a} with {sb} {b}"),
                });
            }
            if sa == Sort::Set {
                return Err(TypeError::IllFormed {
                    detail: "equality of sets is not supported; use ⊂ in both directions".into(),
                });
            }
            Ok(())
        }
        Formula::In(elem, set) => {
            let se = check_term(elem, ctx, sorts)?;
            let ss = check_term(set, ctx, sorts)?;
            if ss != Sort::Set {
                return Err(mismatch_or_ill(set, Sort::Set, format!("{set} is not a set")));
            }
            if se == Sort::Set {
                return Err(mismatch_or_ill(
                    elem,
                    Sort::Integer,
                    format!("sets cannot be elements of sets ({elem})"),
                ));
            }
            if se == Sort::Integer && matches!(set, Term::Prod(..)) {
                return Err(TypeError::IllFormed {
                    detail: format!("{set} contains pairs, but {elem} is not a pair"),
                });
            }
            Ok(())
        }
        Formula::Subset(a, b) => {
            for side in [a, b] {
                if check_term(side, ctx, sorts)? != Sort::Set {
                    return Err(mismatch_or_ill(side, Sort::Set, format!("{side} is not a set")));
                }
            }
            Ok(())
        }
        Formula::Even(t) | Formula::Odd(t) => expect_integer(t, ctx, sorts),
        Formula::Divides(d, t) => {
            match d {
                Term::Const(c) if c.is_zero() || c.is_negative() => {
                    return Err(TypeError::IllFormed {
                        detail: "the divisor must be a nonzero constant or an integer variable".into(),
                    })
                }
                Term::Const(_) => {}
                Term::Var(n) => {
                    if !is_meta(n) {
                        ctx.expect(n, Sort::Integer)?;
                        record(sorts, n, Sort::Integer);
                    }
                }
                _ => {
                    return Err(TypeError::IllFormed {
                        detail: format!("the divisor {d} must be a constant or a variable"),
                    })
                }
            }
            expect_integer(t, ctx, sorts)
        }
    }
}

fn mismatch_or_ill(t: &Term, required: Sort, detail: String) -> TypeError {
    match t {
        Term::Var(n) | Term::SetVar(n) => TypeError::TypeMismatch {
            name: n.clone(),
            declared: if required == Sort::Set { Sort::Integer } else { Sort::Set },
            required,
        },
        _ => TypeError::IllFormed { detail },
    }
}

fn expect_integer(
    t: &Term,
    ctx: &TypeContext,
    sorts: &mut BTreeMap<String, Sort>,
) -> Result<(), TypeError> {
    match check_term(t, ctx, sorts)? {
        Sort::Integer => Ok(()),
        other => Err(TypeError::IllFormed {
            detail: format!("{t} is a {other}, not an integer"),
        }),
    }
}

fn check_term(
    t: &Term,
    ctx: &TypeContext,
    sorts: &mut BTreeMap<String, Sort>,
) -> Result<Sort, TypeError> {
    match t {
        Term::Const(_) => Ok(Sort::Integer),
        Term::Var(n) => {
            if is_meta(n) {
                return Ok(Sort::Integer);
            }
            ctx.expect(n, Sort::Integer)?;
            record(sorts, n, Sort::Integer);
            Ok(Sort::Integer)
        }
        Term::SetVar(n) => {
            if is_meta(n) {
                return Ok(Sort::Set);
            }
            ctx.expect(n, Sort::Set)?;
            record(sorts, n, Sort::Set);
            Ok(Sort::Set)
        }
        Term::Neg(a) => {
            expect_integer(a, ctx, sorts)?;
            Ok(Sort::Integer)
        }
        Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => {
            expect_integer(a, ctx, sorts)?;
            expect_integer(b, ctx, sorts)?;
            Ok(Sort::Integer)
        }
        Term::Pow(a, e) => {
            expect_integer(a, ctx, sorts)?;
            match &**e {
                Term::Const(c) if !c.is_negative() => Ok(Sort::Integer),
                Term::Var(n) if is_meta(n) => Ok(Sort::Integer),
                _ => Err(TypeError::IllFormed {
                    detail: format!("the exponent {e} must be a non-negative number"),
                }),
            }
        }
        Term::Inter(a, b) | Term::Union(a, b) | Term::Prod(a, b) => {
            for side in [a, b] {
                if check_term(side, ctx, sorts)? != Sort::Set {
                    return Err(TypeError::IllFormed {
                        detail: format!("{side} is not a set"),
                    });
                }
            }
            Ok(Sort::Set)
        }
        Term::Pair(a, b) => {
            for side in [a, b] {
                match check_term(side, ctx, sorts)? {
                    Sort::Integer | Sort::Pair => {}
                    other => {
                        return Err(TypeError::IllFormed {
                            detail: format!("a {other} cannot be a pair component"),
                        })
                    }
                }
            }
            Ok(Sort::Pair)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(entries: &[(&str, Sort)]) -> TypeContext {
        let mut c = TypeContext::new();
        for (n, s) in entries {
            c.declare(n, *s).unwrap();
        }
        c
    }

    #[test]
    fn definitional_equation_is_well_typed() {
        let f = Formula::Eq(Term::var("x"), Term::mul(Term::int(2), Term::var("k")));
        let typed = typecheck(&f, &ctx(&[("x", Sort::Integer), ("k", Sort::Integer)])).unwrap();
        assert_eq!(typed.sorts.len(), 2);
    }

    #[test]
    fn missing_element_binding() {
        let f = Formula::In(Term::var("x"), Term::inter(Term::set("A"), Term::set("B")));
        let err = typecheck(&f, &ctx(&[("A", Sort::Set), ("B", Sort::Set)])).unwrap_err();
        assert_eq!(err, TypeError::UndeclaredVariable { name: "x".into() });
    }

    #[test]
    fn adding_a_proposition() {
        let f = Formula::Eq(Term::add(Term::var("P"), Term::int(1)), Term::int(0));
        let err = typecheck(&f, &ctx(&[("P", Sort::Proposition)])).unwrap_err();
        assert_eq!(
            err,
            TypeError::TypeMismatch {
                name: "P".into(),
                declared: Sort::Proposition,
                required: Sort::Integer
            }
        );
    }

    #[test]
    fn assuming_a_number() {
        let err = typecheck(&Formula::prop("x"), &ctx(&[("x", Sort::Integer)])).unwrap_err();
        assert_eq!(err, TypeError::AssumedNonProposition { name: "x".into() });
    }

    #[test]
    fn shadowing_is_rejected() {
        let mut c = ctx(&[("x", Sort::Integer)]);
        assert_eq!(c.declare("x", Sort::Integer), Err(TypeError::Redeclared { name: "x".into() }));
    }

    #[test]
    fn integer_in_product_is_ill_typed() {
        let f = Formula::In(Term::var("x"), Term::prod(Term::set("A"), Term::set("B")));
        let c = ctx(&[("x", Sort::Integer), ("A", Sort::Set), ("B", Sort::Set)]);
        assert!(typecheck(&f, &c).is_err());
        let pair = Formula::In(
            Term::pair(Term::var("x"), Term::var("y")),
            Term::prod(Term::set("A"), Term::set("B")),
        );
        let c = c.with("y", Sort::Integer).unwrap();
        assert!(typecheck(&pair, &c).is_ok());
    }

    #[test]
    fn divisor_must_be_constant_or_variable() {
        let c = ctx(&[("n", Sort::Integer)]);
        let ok = Formula::Divides(Term::int(8), Term::var("n"));
        assert!(typecheck(&ok, &c).is_ok());
        let zero = Formula::Divides(Term::int(0), Term::var("n"));
        assert!(typecheck(&zero, &c).is_err());
        let compound = Formula::Divides(Term::add(Term::var("n"), Term::int(1)), Term::var("n"));
        assert!(typecheck(&compound, &c).is_err());
    }

    #[test]
    fn extension_preserves_typing() {
        let f = Formula::Even(Term::var("x"));
        let c = ctx(&[("x", Sort::Integer)]);
        assert!(typecheck(&f, &c).is_ok());
        let bigger = c.with("A", Sort::Set).unwrap().with("P", Sort::Proposition).unwrap();
        assert!(typecheck(&f, &bigger).is_ok());
    }
}
