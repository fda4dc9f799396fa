//! Truth-table entailment for propositional and Boolean set-theoretic claims.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{ProverError, StepVerdict};
use crate::logic::{Formula, Term};

pub const DEFAULT_MAX_ATOMS: usize = 20;

/// A membership statement `element ∈ set` in a scenario.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Membership {
    pub element: String,
    pub set: String,
    pub member: bool,
}

/// A situation in which all premises hold and the claim fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Countermodel {
    Propositional { assignment: BTreeMap<String, bool> },
    SetScenario {
        memberships: Vec<Membership>,
        propositions: BTreeMap<String, bool>,
        /// Elements are assumed pairwise distinct.
        distinct: Vec<String>,
    },
}

impl Countermodel {
    /// Truth value of a membership `element ∈ set` (absent means false).
    pub fn member(&self, element: &str, set: &str) -> bool {
        match self {
            Countermodel::Propositional { .. } => false,
            Countermodel::SetScenario { memberships, .. } => memberships
                .iter()
                .any(|m| m.member && m.element == element && m.set == set),
        }
    }

    pub fn proposition(&self, name: &str) -> bool {
        match self {
            Countermodel::Propositional { assignment } => assignment.get(name).copied().unwrap_or(false),
            Countermodel::SetScenario { propositions, .. } => propositions.get(name).copied().unwrap_or(false),
        }
    }

    fn elements(&self) -> Vec<String> {
        match self {
            Countermodel::Propositional { .. } => Vec::new(),
            Countermodel::SetScenario { memberships, distinct, .. } => {
                let mut out: BTreeSet<String> = distinct.iter().cloned().collect();
                out.extend(memberships.iter().map(|m| m.element.clone()));
                out.into_iter().collect()
            }
        }
    }

    /// Evaluate a propositional or set-theoretic formula in this model.
    /// Returns `None` for formulas outside the fragment.
    pub fn eval(&self, f: &Formula) -> Option<bool> {
        Some(match f {
            Formula::PropVar(p) => self.proposition(p),
            Formula::False => false,
            Formula::Not(a) => !self.eval(a)?,
            Formula::And(a, b) => self.eval(a)? & self.eval(b)?,
            Formula::Or(a, b) => self.eval(a)? | self.eval(b)?,
            Formula::Implies(a, b) => !self.eval(a)? | self.eval(b)?,
            Formula::In(t, s) => self.eval_member(t, s)?,
            Formula::Subset(x, y) => {
                let mut all = true;
                for e in self.elements() {
                    let t = element_term(&e);
                    if self.eval_member(&t, x)? && !self.eval_member(&t, y)? {
                        all = false;
                    }
                }
                all
            }
            _ => return None,
        })
    }

    fn eval_member(&self, t: &Term, s: &Term) -> Option<bool> {
        Some(match s {
            Term::SetVar(name) => self.member(&t.to_string(), name),
            Term::Inter(a, b) => self.eval_member(t, a)? && self.eval_member(t, b)?,
            Term::Union(a, b) => self.eval_member(t, a)? || self.eval_member(t, b)?,
            Term::Prod(a, b) => match t {
                Term::Pair(x, y) => self.eval_member(x, a)? && self.eval_member(y, b)?,
                _ => false,
            },
            _ => return None,
        })
    }
}

/// Re-read an element name produced by `Term::to_string` for evaluation.
/// Only used to look memberships up again, so an opaque variable suffices
/// unless the element is a pair.
fn element_term(name: &str) -> Term {
    if let Some(inner) = name.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
        if let Some((a, b)) = split_top_comma(inner) {
            return Term::pair(element_term(a.trim()), element_term(b.trim()));
        }
    }
    Term::Var(name.to_string())
}

fn split_top_comma(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Atom {
    Prop(String),
    Member { element: String, set: String },
}

impl Atom {
    fn name(&self) -> String {
        match self {
            Atom::Prop(p) => p.clone(),
            Atom::Member { element, set } => format!("{element} ∈ {set}"),
        }
    }
}

#[derive(Debug, Clone)]
enum BExpr {
    Const(bool),
    Atom(usize),
    Not(Box<BExpr>),
    And(Box<BExpr>, Box<BExpr>),
    Or(Box<BExpr>, Box<BExpr>),
    Implies(Box<BExpr>, Box<BExpr>),
}

impl BExpr {
    fn eval(&self, bits: &[bool]) -> bool {
        match self {
            BExpr::Const(b) => *b,
            BExpr::Atom(i) => bits[*i],
            BExpr::Not(a) => !a.eval(bits),
            BExpr::And(a, b) => a.eval(bits) && b.eval(bits),
            BExpr::Or(a, b) => a.eval(bits) || b.eval(bits),
            BExpr::Implies(a, b) => !a.eval(bits) || b.eval(bits),
        }
    }

    fn and(a: BExpr, b: BExpr) -> BExpr {
        BExpr::And(Box::new(a), Box::new(b))
    }

    fn or(a: BExpr, b: BExpr) -> BExpr {
        BExpr::Or(Box::new(a), Box::new(b))
    }
}

#[derive(Default)]
struct AtomTable {
    atoms: Vec<Atom>,
    index: BTreeMap<Atom, usize>,
}

impl AtomTable {
    fn intern(&mut self, a: Atom) -> usize {
        if let Some(i) = self.index.get(&a) {
            return *i;
        }
        self.atoms.push(a.clone());
        self.index.insert(a, self.atoms.len() - 1);
        self.atoms.len() - 1
    }
}

/// Element terms a formula talks about, including pair components.
fn collect_elements(f: &Formula, out: &mut BTreeSet<Term>) {
    f.walk(&mut |g| {
        if let Formula::In(t, _) = g {
            let mut stack = vec![t.clone()];
            while let Some(e) = stack.pop() {
                if let Term::Pair(a, b) = &e {
                    stack.push((**a).clone());
                    stack.push((**b).clone());
                }
                out.insert(e);
            }
        }
    });
}

struct Reducer<'u> {
    table: AtomTable,
    universe: &'u BTreeSet<Term>,
    allow_sets: bool,
}

fn mentions_subset(f: &Formula) -> bool {
    let mut found = false;
    f.walk(&mut |g| found |= matches!(g, Formula::Subset(..)));
    found
}

impl Reducer<'_> {
    fn formula(&mut self, f: &Formula) -> Result<BExpr, ProverError> {
        Ok(match f {
            Formula::PropVar(p) => BExpr::Atom(self.table.intern(Atom::Prop(p.clone()))),
            Formula::False => BExpr::Const(false),
            Formula::Not(a) => BExpr::Not(Box::new(self.formula(a)?)),
            Formula::And(a, b) => BExpr::and(self.formula(a)?, self.formula(b)?),
            Formula::Or(a, b) => BExpr::or(self.formula(a)?, self.formula(b)?),
            Formula::Implies(a, b) => BExpr::Implies(Box::new(self.formula(a)?), Box::new(self.formula(b)?)),
            Formula::In(t, s) if self.allow_sets => self.member(t, s)?,
            other => return Err(ProverError::NonReducible { formula: other.to_string() }),
        })
    }

    /// A premise; inclusions are only instantiable as top-level conjuncts,
    /// where they hold for every element.
    fn premise(&mut self, f: &Formula) -> Result<BExpr, ProverError> {
        let mut acc = BExpr::Const(true);
        for part in f.conjuncts() {
            let reduced = match part {
                Formula::Subset(x, y) if self.allow_sets => {
                    let mut rules = BExpr::Const(true);
                    for e in self.universe {
                        let rule = BExpr::Implies(Box::new(self.member(e, x)?), Box::new(self.member(e, y)?));
                        rules = BExpr::and(rules, rule);
                    }
                    rules
                }
                other => self.formula(other)?,
            };
            acc = BExpr::and(acc, reduced);
        }
        Ok(acc)
    }

    fn member(&mut self, t: &Term, s: &Term) -> Result<BExpr, ProverError> {
        Ok(match s {
            Term::SetVar(name) => {
                BExpr::Atom(self.table.intern(Atom::Member { element: t.to_string(), set: name.clone() }))
            }
            Term::Inter(a, b) => BExpr::and(self.member(t, a)?, self.member(t, b)?),
            Term::Union(a, b) => BExpr::or(self.member(t, a)?, self.member(t, b)?),
            Term::Prod(a, b) => match t {
                Term::Pair(x, y) => BExpr::and(self.member(x, a)?, self.member(y, b)?),
                _ => BExpr::Const(false),
            },
            other => return Err(ProverError::NonReducible { formula: format!("{t} ∈ {other}") }),
        })
    }
}

/// Premises ⊨ claim for purely propositional formulas.
pub fn entails_prop(premises: &[Formula], claim: &Formula) -> Result<StepVerdict, ProverError> {
    entails(premises, claim, false, DEFAULT_MAX_ATOMS)
}

/// Premises ⊨ claim over membership statements, after reducing `∩`, `∪`,
/// `×` element-wise and instantiating subset premises.
pub fn entails_set(premises: &[Formula], claim: &Formula) -> Result<StepVerdict, ProverError> {
    entails(premises, claim, true, DEFAULT_MAX_ATOMS)
}

pub(crate) fn entails(
    premises: &[Formula],
    claim: &Formula,
    allow_sets: bool,
    max_atoms: usize,
) -> Result<StepVerdict, ProverError> {
    if mentions_subset(claim) {
        return Err(ProverError::NonReducible { formula: claim.to_string() });
    }
    let mut universe = BTreeSet::new();
    for f in premises.iter().chain(std::iter::once(claim)) {
        collect_elements(f, &mut universe);
    }
    let mut r = Reducer { table: AtomTable::default(), universe: &universe, allow_sets };
    let reduced_premises = premises.iter().map(|p| r.premise(p)).collect::<Result<Vec<_>, _>>()?;
    let reduced_claim = r.formula(claim)?;
    let n = r.table.atoms.len();
    if n > max_atoms {
        return Err(ProverError::TooManyAtoms { count: n, limit: max_atoms });
    }

    // Enumerate assignments in lexicographic order of atom names, false < true.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| r.table.atoms[i].name());
    let mut bits = vec![false; n];
    for code in 0u64..(1u64 << n) {
        for (rank, &atom) in order.iter().enumerate() {
            bits[atom] = (code >> (n - 1 - rank)) & 1 == 1;
        }
        if reduced_premises.iter().all(|p| p.eval(&bits)) && !reduced_claim.eval(&bits) {
            let model = build_model(&r.table.atoms, &bits, &universe);
            let valid = premises.iter().all(|p| model.eval(p) == Some(true)) && model.eval(claim) == Some(false);
            if !valid {
                return Ok(StepVerdict::unknown(vec!["countermodel-check-failed".into()]));
            }
            return Ok(StepVerdict::refuted(model, vec!["truth-table".into()]));
        }
    }
    let rule = if r.table.atoms.iter().any(|a| matches!(a, Atom::Member { .. })) {
        "set-membership-table"
    } else {
        "truth-table"
    };
    Ok(StepVerdict::verified(vec![rule.into()]))
}

fn build_model(atoms: &[Atom], bits: &[bool], universe: &BTreeSet<Term>) -> Countermodel {
    let has_members = atoms.iter().any(|a| matches!(a, Atom::Member { .. }));
    let mut props = BTreeMap::new();
    let mut memberships = Vec::new();
    for (a, &b) in atoms.iter().zip(bits) {
        match a {
            Atom::Prop(p) => {
                props.insert(p.clone(), b);
            }
            Atom::Member { element, set } => memberships.push(Membership {
                element: element.clone(),
                set: set.clone(),
                member: b,
            }),
        }
    }
    if !has_members && universe.is_empty() {
        return Countermodel::Propositional { assignment: props };
    }
    memberships.sort();
    let distinct = universe
        .iter()
        .filter(|t| !matches!(t, Term::Pair(..)))
        .map(|t| t.to_string())
        .collect();
    Countermodel::SetScenario { memberships, propositions: props, distinct }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prover::VerdictStatus;

    fn p(n: &str) -> Formula {
        Formula::prop(n)
    }

    fn member(e: &str, s: Term) -> Formula {
        Formula::In(Term::var(e), s)
    }

    #[test]
    fn denying_the_antecedent_is_refuted() {
        let v = entails_prop(&[Formula::implies(p("A"), p("B")), Formula::not(p("A"))], &Formula::not(p("B"))).unwrap();
        let VerdictStatus::Refuted(Countermodel::Propositional { assignment }) = v.status else { panic!("{v:?}") };
        assert_eq!(assignment, BTreeMap::from([("A".to_string(), false), ("B".to_string(), true)]));
    }

    #[test]
    fn modus_ponens_and_tautology() {
        let v = entails_prop(&[Formula::implies(p("A"), p("B")), p("A")], &p("B")).unwrap();
        assert_eq!(v.status, VerdictStatus::Verified);
        let v = entails_prop(&[], &Formula::or(p("A"), Formula::not(p("A")))).unwrap();
        assert_eq!(v.status, VerdictStatus::Verified);
    }

    #[test]
    fn too_many_atoms() {
        let big = (0..21).map(|i| p(&format!("P{i}"))).reduce(Formula::and).unwrap();
        assert!(matches!(entails_prop(&[], &big), Err(ProverError::TooManyAtoms { count: 21, .. })));
    }

    #[test]
    fn pair_in_product() {
        let (a, b, c) = (Term::set("A"), Term::set("B"), Term::set("C"));
        let premise = Formula::In(Term::pair(Term::var("x"), Term::var("y")), Term::prod(Term::inter(a.clone(), b.clone()), c.clone()));
        let claim = Formula::and(member("x", Term::inter(a, b)), member("y", c));
        assert_eq!(entails_set(&[premise], &claim).unwrap().status, VerdictStatus::Verified);
    }

    #[test]
    fn membership_scenario() {
        let (a, b, c) = (Term::set("A"), Term::set("B"), Term::set("C"));
        let v = entails_set(&[member("x", a.clone()), member("x", b.clone())], &member("y", Term::union(b, c))).unwrap();
        let VerdictStatus::Refuted(Countermodel::SetScenario { memberships, distinct, .. }) = v.status else { panic!() };
        let shown: Vec<_> = memberships.iter().map(|m| (m.element.as_str(), m.set.as_str(), m.member)).collect();
        assert_eq!(shown, vec![("x", "A", true), ("x", "B", true), ("y", "B", false), ("y", "C", false)]);
        assert_eq!(distinct, vec!["x".to_string(), "y".to_string()]);
    }

    #[test]
    fn union_introduction() {
        let v = entails_set(&[member("x", Term::set("A"))], &member("x", Term::union(Term::set("A"), Term::set("B")))).unwrap();
        assert_eq!(v.status, VerdictStatus::Verified);
    }

    #[test]
    fn subset_premises_propagate_membership() {
        let sub = Formula::Subset(Term::set("A"), Term::set("B"));
        let v = entails_set(&[sub.clone(), member("x", Term::set("A"))], &member("x", Term::set("B"))).unwrap();
        assert_eq!(v.status, VerdictStatus::Verified);
        let v = entails_set(&[sub, member("x", Term::set("B"))], &member("x", Term::set("A"))).unwrap();
        assert!(matches!(v.status, VerdictStatus::Refuted(_)));
    }

    #[test]
    fn subset_claims_are_not_decided_here() {
        let claim = Formula::Subset(Term::set("A"), Term::set("A"));
        assert!(matches!(entails_set(&[], &claim), Err(ProverError::NonReducible { .. })));
    }
}
