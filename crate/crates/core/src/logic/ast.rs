use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::Serialize;

/// Integer, set and pair terms.
///
/// The sort of a variable is fixed by its syntactic position: `Var` occurs
/// in arithmetic and element positions, `SetVar` wherever a set is expected.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Term {
    Const(BigInt),
    Var(String),
    Neg(Box<Term>),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    /// Exponent is a `Const` in proof text; schemas may use a metavariable.
    Pow(Box<Term>, Box<Term>),
    SetVar(String),
    Inter(Box<Term>, Box<Term>),
    Union(Box<Term>, Box<Term>),
    Prod(Box<Term>, Box<Term>),
    Pair(Box<Term>, Box<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Formula {
    PropVar(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Eq(Term, Term),
    In(Term, Term),
    Subset(Term, Term),
    Even(Term),
    Odd(Term),
    Divides(Term, Term),
    False,
}

/// Semantic sorts of declared names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Sort {
    Integer,
    Set,
    Proposition,
    /// Derived sort of `(s, t)`; never bound to a name.
    Pair,
}

impl std::fmt::Display for Sort {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sort::Integer => "integer",
            Sort::Set => "set",
            Sort::Proposition => "proposition",
            Sort::Pair => "pair",
        })
    }
}

/// Metavariables of the pattern catalog are written `?name`.
pub fn is_meta(name: &str) -> bool {
    name.starts_with('?')
}

impl Term {
    pub fn int(v: i64) -> Term {
        Term::Const(BigInt::from(v))
    }
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }
    pub fn set(name: &str) -> Term {
        Term::SetVar(name.to_string())
    }
    #[allow(clippy::should_implement_trait)]
    pub fn add(a: Term, b: Term) -> Term {
        Term::Add(Box::new(a), Box::new(b))
    }
    #[allow(clippy::should_implement_trait)]
    pub fn sub(a: Term, b: Term) -> Term {
        Term::Sub(Box::new(a), Box::new(b))
    }
    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: Term, b: Term) -> Term {
        Term::Mul(Box::new(a), Box::new(b))
    }
    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: Term) -> Term {
        Term::Neg(Box::new(a))
    }
    pub fn pow(a: Term, e: u32) -> Term {
        Term::Pow(Box::new(a), Box::new(Term::Const(BigInt::from(e))))
    }
    pub fn inter(a: Term, b: Term) -> Term {
        Term::Inter(Box::new(a), Box::new(b))
    }
    pub fn union(a: Term, b: Term) -> Term {
        Term::Union(Box::new(a), Box::new(b))
    }
    pub fn prod(a: Term, b: Term) -> Term {
        Term::Prod(Box::new(a), Box::new(b))
    }
    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Box::new(a), Box::new(b))
    }

    pub fn is_set_term(&self) -> bool {
        matches!(self, Term::SetVar(_) | Term::Inter(..) | Term::Union(..) | Term::Prod(..))
    }

    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Const(_) | Term::Var(_) | Term::SetVar(_) => vec![],
            Term::Neg(a) => vec![a],
            Term::Add(a, b)
            | Term::Sub(a, b)
            | Term::Mul(a, b)
            | Term::Pow(a, b)
            | Term::Inter(a, b)
            | Term::Union(a, b)
            | Term::Prod(a, b)
            | Term::Pair(a, b) => vec![a, b],
        }
    }

    /// Rebuild with children replaced, preserving the constructor.
    pub fn map_children(&self, mut f: impl FnMut(&Term) -> Term) -> Term {
        let b = |t: &Term, f: &mut dyn FnMut(&Term) -> Term| Box::new(f(t));
        match self {
            Term::Const(_) | Term::Var(_) | Term::SetVar(_) => self.clone(),
            Term::Neg(a) => Term::Neg(b(a, &mut f)),
            Term::Add(x, y) => Term::Add(b(x, &mut f), b(y, &mut f)),
            Term::Sub(x, y) => Term::Sub(b(x, &mut f), b(y, &mut f)),
            Term::Mul(x, y) => Term::Mul(b(x, &mut f), b(y, &mut f)),
            Term::Pow(x, y) => Term::Pow(b(x, &mut f), b(y, &mut f)),
            Term::Inter(x, y) => Term::Inter(b(x, &mut f), b(y, &mut f)),
            Term::Union(x, y) => Term::Union(b(x, &mut f), b(y, &mut f)),
            Term::Prod(x, y) => Term::Prod(b(x, &mut f), b(y, &mut f)),
            Term::Pair(x, y) => Term::Pair(b(x, &mut f), b(y, &mut f)),
        }
    }

    /// Names of `Var`s occurring in the term (sets excluded).
    pub fn int_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out, &mut BTreeSet::new());
        out
    }

    pub fn set_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut BTreeSet::new(), &mut out);
        out
    }

    fn collect_vars(&self, ints: &mut BTreeSet<String>, sets: &mut BTreeSet<String>) {
        match self {
            Term::Var(n) => {
                ints.insert(n.clone());
            }
            Term::SetVar(n) => {
                sets.insert(n.clone());
            }
            _ => {
                for c in self.children() {
                    c.collect_vars(ints, sets);
                }
            }
        }
    }

    /// Simultaneous replacement of integer variables.
    pub fn substitute(&self, map: &BTreeMap<String, Term>) -> Term {
        match self {
            Term::Var(n) => map.get(n).cloned().unwrap_or_else(|| self.clone()),
            _ => self.map_children(|c| c.substitute(map)),
        }
    }

    /// Every subterm, pre-order, including `self`.
    pub fn subterms(&self) -> Vec<&Term> {
        let mut out = vec![self];
        for c in self.children() {
            out.extend(c.subterms());
        }
        out
    }
}

impl Formula {
    pub fn prop(name: &str) -> Formula {
        Formula::PropVar(name.to_string())
    }
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// Split nested conjunctions into their conjuncts, left to right.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        match self {
            Formula::And(a, b) => {
                let mut v = a.conjuncts();
                v.extend(b.conjuncts());
                v
            }
            _ => vec![self],
        }
    }

    pub fn conjoin(mut parts: Vec<Formula>) -> Option<Formula> {
        let last = parts.pop()?;
        Some(parts.into_iter().rev().fold(last, |acc, f| Formula::and(f, acc)))
    }

    /// Negation with double negation removed.
    pub fn negated(&self) -> Formula {
        match self {
            Formula::Not(inner) => (**inner).clone(),
            other => Formula::not(other.clone()),
        }
    }

    /// All terms directly under atoms.
    pub fn atom_terms(&self) -> Vec<&Term> {
        match self {
            Formula::PropVar(_) | Formula::False => vec![],
            Formula::Not(a) => a.atom_terms(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                let mut v = a.atom_terms();
                v.extend(b.atom_terms());
                v
            }
            Formula::Eq(a, b) | Formula::In(a, b) | Formula::Subset(a, b) | Formula::Divides(a, b) => {
                vec![a, b]
            }
            Formula::Even(t) | Formula::Odd(t) => vec![t],
        }
    }

    pub fn prop_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let Formula::PropVar(n) = f {
                out.insert(n.clone());
            }
        });
        out
    }

    pub fn int_vars(&self) -> BTreeSet<String> {
        self.atom_terms().into_iter().flat_map(Term::int_vars).collect()
    }

    pub fn set_vars(&self) -> BTreeSet<String> {
        self.atom_terms().into_iter().flat_map(Term::set_vars).collect()
    }

    /// Pre-order traversal over subformulas.
    pub fn walk(&self, visit: &mut dyn FnMut(&Formula)) {
        visit(self);
        match self {
            Formula::Not(a) => a.walk(visit),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.walk(visit);
                b.walk(visit);
            }
            _ => {}
        }
    }

    pub fn map_terms(&self, f: &mut dyn FnMut(&Term) -> Term) -> Formula {
        match self {
            Formula::PropVar(_) | Formula::False => self.clone(),
            Formula::Not(a) => Formula::not(a.map_terms(f)),
            Formula::And(a, b) => Formula::and(a.map_terms(f), b.map_terms(f)),
            Formula::Or(a, b) => Formula::or(a.map_terms(f), b.map_terms(f)),
            Formula::Implies(a, b) => Formula::implies(a.map_terms(f), b.map_terms(f)),
            Formula::Eq(a, b) => Formula::Eq(f(a), f(b)),
            Formula::In(a, b) => Formula::In(f(a), f(b)),
            Formula::Subset(a, b) => Formula::Subset(f(a), f(b)),
            Formula::Divides(a, b) => Formula::Divides(f(a), f(b)),
            Formula::Even(t) => Formula::Even(f(t)),
            Formula::Odd(t) => Formula::Odd(f(t)),
        }
    }

    pub fn substitute(&self, map: &BTreeMap<String, Term>) -> Formula {
        self.map_terms(&mut |t| t.substitute(map))
    }

    /// True if built only from propositional variables, connectives,
    /// membership, inclusion and falsity.
    pub fn is_prop_or_set(&self) -> bool {
        match self {
            Formula::PropVar(_) | Formula::False | Formula::In(..) | Formula::Subset(..) => true,
            Formula::Not(a) => a.is_prop_or_set(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_prop_or_set() && b.is_prop_or_set()
            }
            _ => false,
        }
    }

    pub fn is_arithmetic_atom(&self) -> bool {
        matches!(self, Formula::Eq(..) | Formula::Even(_) | Formula::Odd(_) | Formula::Divides(..))
    }
}
