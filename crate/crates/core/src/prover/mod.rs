//! The step checker: decides whether one claimed statement follows
//! elementarily from the facts established so far.

mod arith;
pub mod boolean;

use std::collections::BTreeSet;

use serde::Serialize;

pub use boolean::{entails_prop, entails_set, Countermodel, Membership, DEFAULT_MAX_ATOMS};

use crate::algebra::{acyclic_equations, equal_under, Equation};
use crate::logic::{eval_arith, Formula, Term, TypeContext};
use arith::{ArithContext, Parity, Search};

pub const DEFAULT_DEPTH_BUDGET: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, thiserror::Error)]
pub enum ProverError {
    #[error("{count} atoms exceed the limit of {limit}")]
    TooManyAtoms { count: usize, limit: usize },
    #[error("{formula} is outside the decidable fragment")]
    NonReducible { formula: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "countermodel", rename_all = "lowercase")]
pub enum VerdictStatus {
    Verified,
    Refuted(Countermodel),
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepVerdict {
    #[serde(flatten)]
    pub status: VerdictStatus,
    pub trace: Vec<String>,
}

impl StepVerdict {
    pub fn verified(trace: Vec<String>) -> Self {
        StepVerdict { status: VerdictStatus::Verified, trace }
    }

    pub fn refuted(model: Countermodel, trace: Vec<String>) -> Self {
        StepVerdict { status: VerdictStatus::Refuted(model), trace }
    }

    pub fn unknown(trace: Vec<String>) -> Self {
        StepVerdict { status: VerdictStatus::Unknown, trace }
    }

    pub fn is_verified(&self) -> bool {
        self.status == VerdictStatus::Verified
    }

    pub fn countermodel(&self) -> Option<&Countermodel> {
        match &self.status {
            VerdictStatus::Refuted(m) => Some(m),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProverConfig {
    pub depth_budget: u32,
    pub max_atoms: usize,
}

impl Default for ProverConfig {
    fn default() -> Self {
        ProverConfig { depth_budget: DEFAULT_DEPTH_BUDGET, max_atoms: DEFAULT_MAX_ATOMS }
    }
}

/// Established facts, in the order they were asserted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct KnowledgeBase {
    pub ctx: TypeContext,
    facts: Vec<Formula>,
}

impl KnowledgeBase {
    pub fn new(ctx: TypeContext) -> Self {
        KnowledgeBase { ctx, facts: Vec::new() }
    }

    pub fn from_facts(ctx: TypeContext, facts: Vec<Formula>) -> Self {
        KnowledgeBase { ctx, facts }
    }

    pub fn facts(&self) -> &[Formula] {
        &self.facts
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn push(&mut self, fact: Formula) {
        self.facts.push(fact);
    }

    pub fn truncate(&mut self, len: usize) {
        self.facts.truncate(len);
    }

    pub fn with_fact(&self, fact: Formula) -> KnowledgeBase {
        let mut out = self.clone();
        out.push(fact);
        out
    }

    /// Facts with conjunctions split into their conjuncts.
    pub fn literals(&self) -> Vec<Formula> {
        self.facts.iter().flat_map(|f| f.conjuncts().into_iter().cloned()).collect()
    }

    /// Equalities `v = t` with a variable on the left, in assertion order.
    pub fn equations(&self) -> Vec<Equation> {
        self.literals()
            .into_iter()
            .filter_map(|f| match f {
                Formula::Eq(Term::Var(v), value) if !value.int_vars().contains(&v) => Some(Equation { var: v, value }),
                _ => None,
            })
            .collect()
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.facts.contains(f) || self.literals().contains(f)
    }
}

/// Check one claim against the knowledge base.
pub fn check_step(claim: &Formula, kb: &KnowledgeBase, config: &ProverConfig) -> StepVerdict {
    let literals = kb.literals();
    if literals.contains(claim) || kb.facts().contains(claim) {
        return StepVerdict::verified(vec!["fact".into()]);
    }
    let equations = acyclic_equations(&kb.equations());
    let arith = ArithContext { equations: &equations, facts: &literals };
    let checker = Checker { kb, config, arith, literals: &literals };
    checker.check(claim)
}

/// Check an existence claim `∃var. formula`.
pub fn check_exists(var: &str, formula: &Formula, kb: &KnowledgeBase, config: &ProverConfig) -> StepVerdict {
    let literals = kb.literals();
    let equations = acyclic_equations(&kb.equations());
    let arith = ArithContext { equations: &equations, facts: &literals };
    from_search(arith.prove_witness(var, formula, config.depth_budget))
}

fn from_search(s: Search) -> StepVerdict {
    match s.trace {
        Some(trace) => StepVerdict::verified(trace),
        None if s.depth_exceeded => StepVerdict::unknown(vec!["depth-exceeded".into()]),
        None => StepVerdict::unknown(Vec::new()),
    }
}

fn prefixed(rule: &str, mut v: StepVerdict) -> StepVerdict {
    v.trace.insert(0, rule.to_string());
    v
}

struct Checker<'a> {
    kb: &'a KnowledgeBase,
    config: &'a ProverConfig,
    arith: ArithContext<'a>,
    literals: &'a [Formula],
}

impl Checker<'_> {
    fn check(&self, claim: &Formula) -> StepVerdict {
        if *claim == Formula::False {
            return self.contradiction();
        }
        if claim.is_prop_or_set() && !matches!(claim, Formula::Subset(..)) {
            return self.boolean(claim);
        }
        let budget = self.config.depth_budget;
        match claim {
            Formula::Eq(a, b) if !a.is_set_term() && !b.is_set_term() => match equal_under(self.arith.equations, a, b) {
                Ok(true) => StepVerdict::verified(vec!["polynomial-identity".into()]),
                _ => StepVerdict::unknown(Vec::new()),
            },
            Formula::Even(t) => from_search(self.arith.prove_parity(t, Parity::Even, budget)),
            Formula::Odd(t) => from_search(self.arith.prove_parity(t, Parity::Odd, budget)),
            Formula::Divides(d, t) => from_search(self.arith.prove_divides(d, t, budget)),
            Formula::Not(inner) => match &**inner {
                Formula::Even(t) => {
                    prefixed("even-odd-exclusion", from_search(self.arith.prove_parity(t, Parity::Odd, budget)))
                        .only_if_verified()
                }
                Formula::Odd(t) => {
                    prefixed("even-odd-exclusion", from_search(self.arith.prove_parity(t, Parity::Even, budget)))
                        .only_if_verified()
                }
                Formula::Not(f) => self.check(f),
                _ => self.ground(claim),
            },
            Formula::And(..) => {
                let mut trace = Vec::new();
                for part in claim.conjuncts() {
                    let v = check_step(part, self.kb, self.config);
                    if !v.is_verified() {
                        return StepVerdict::unknown(v.trace);
                    }
                    trace.extend(v.trace);
                }
                StepVerdict::verified(trace)
            }
            Formula::Or(a, b) => {
                for part in [a, b] {
                    let v = check_step(part, self.kb, self.config);
                    if v.is_verified() {
                        return prefixed("or-intro", v);
                    }
                }
                StepVerdict::unknown(Vec::new())
            }
            Formula::Implies(a, b) => {
                let extended = self.kb.with_fact((**a).clone());
                let v = check_step(b, &extended, self.config);
                if v.is_verified() {
                    prefixed("implication-intro", v)
                } else {
                    StepVerdict::unknown(v.trace)
                }
            }
            _ => self.ground(claim),
        }
    }

    fn ground(&self, claim: &Formula) -> StepVerdict {
        if claim.int_vars().is_empty() && eval_arith(claim, &Default::default()) == Some(true) {
            return StepVerdict::verified(vec!["evaluation".into()]);
        }
        StepVerdict::unknown(Vec::new())
    }

    /// Facts usable by the truth-table procedure, and whether some fact
    /// that shares variables with the claim had to be left out.
    fn boolean_premises(&self, claim: &Formula) -> (Vec<Formula>, bool) {
        let mut relevant: BTreeSet<String> = claim.int_vars();
        for f in self.literals {
            if f.is_prop_or_set() {
                relevant.extend(f.int_vars());
            }
        }
        let mut premises = Vec::new();
        let mut skipped_relevant = false;
        for f in self.kb.facts() {
            if f.is_prop_or_set() {
                premises.push(f.clone());
            } else {
                for part in f.conjuncts() {
                    if part.is_prop_or_set() {
                        premises.push(part.clone());
                    } else if !part.int_vars().is_disjoint(&relevant) {
                        skipped_relevant = true;
                    }
                }
            }
        }
        (premises, skipped_relevant)
    }

    fn boolean(&self, claim: &Formula) -> StepVerdict {
        let (premises, skipped) = self.boolean_premises(claim);
        let full = boolean::entails(&premises, claim, true, self.config.max_atoms);
        let verdict = match full {
            Ok(v) => v,
            Err(ProverError::TooManyAtoms { .. }) => {
                let cone = cone_of_influence(&premises, claim);
                match boolean::entails(&cone, claim, true, self.config.max_atoms) {
                    Ok(v) if v.is_verified() => prefixed("cone-of-influence", v),
                    Ok(_) | Err(_) => StepVerdict::unknown(vec!["too-many-atoms".into()]),
                }
            }
            Err(ProverError::NonReducible { .. }) => StepVerdict::unknown(vec!["non-reducible".into()]),
        };
        if skipped && verdict.countermodel().is_some() {
            return StepVerdict::unknown(verdict.trace);
        }
        verdict
    }

    fn contradiction(&self) -> StepVerdict {
        let v = self.boolean(&Formula::False);
        if v.is_verified() {
            return v;
        }
        for f in self.literals {
            if !f.is_arithmetic_atom() && !matches!(f, Formula::Not(inner) if inner.is_arithmetic_atom()) {
                continue;
            }
            let negation = match f {
                Formula::Not(inner) => (**inner).clone(),
                other => Formula::not(other.clone()),
            };
            let rest: Vec<Formula> = self.literals.iter().filter(|g| *g != f).cloned().collect();
            let kb = KnowledgeBase::from_facts(self.kb.ctx.clone(), rest);
            let v = check_step(&negation, &kb, self.config);
            if v.is_verified() {
                return prefixed("contradiction", v);
            }
        }
        StepVerdict::unknown(Vec::new())
    }
}

impl StepVerdict {
    fn only_if_verified(self) -> StepVerdict {
        if self.is_verified() {
            self
        } else {
            let trace = self.trace.into_iter().filter(|r| r == "depth-exceeded").collect();
            StepVerdict::unknown(trace)
        }
    }
}

/// Premises connected to the claim through shared atoms.
fn cone_of_influence(premises: &[Formula], claim: &Formula) -> Vec<Formula> {
    let atoms = |f: &Formula| -> BTreeSet<String> {
        let mut s = f.prop_vars();
        s.extend(f.set_vars());
        s.extend(f.int_vars());
        s
    };
    let mut reached = atoms(claim);
    let mut taken = vec![false; premises.len()];
    loop {
        let mut changed = false;
        for (i, p) in premises.iter().enumerate() {
            if taken[i] {
                continue;
            }
            let a = atoms(p);
            if !a.is_disjoint(&reached) {
                reached.extend(a);
                taken[i] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    premises.iter().zip(taken).filter(|(_, t)| *t).map(|(p, _)| p.clone()).collect()
}
