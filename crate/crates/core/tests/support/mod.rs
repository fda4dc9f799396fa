//! Independent reference implementations and random inputs for tests.
//! Nothing here calls into the checker's own evaluation code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use cnlcheck_core::logic::{Formula, Term};
use cnlcheck_core::prover::Countermodel;
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn read_corpus(name: &str) -> String {
    std::fs::read_to_string(corpus_dir().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

// ---------------------------------------------------------------- integers

pub fn eval_int(t: &Term, env: &BTreeMap<String, BigInt>) -> BigInt {
    match t {
        Term::Const(c) => c.clone(),
        Term::Var(v) => env[v].clone(),
        Term::Neg(a) => -eval_int(a, env),
        Term::Add(a, b) => eval_int(a, env) + eval_int(b, env),
        Term::Sub(a, b) => eval_int(a, env) - eval_int(b, env),
        Term::Mul(a, b) => eval_int(a, env) * eval_int(b, env),
        Term::Pow(a, e) => {
            let Term::Const(e) = &**e else { panic!("symbolic exponent") };
            let e: u32 = e.try_into().expect("small exponent");
            let base = eval_int(a, env);
            (0..e).fold(BigInt::from(1), |acc, _| acc * &base)
        }
        other => panic!("not an integer term: {other:?}"),
    }
}

pub const INT_VARS: [&str; 3] = ["x", "y", "z"];

pub fn random_term<R: Rng>(rng: &mut R, depth: u32) -> Term {
    if depth == 0 || rng.gen_ratio(1, 4) {
        return if rng.gen_bool(0.5) {
            // The parser reads `-3` as a negation, never as a negative literal.
            let c = rng.gen_range(-5..=5);
            if c < 0 {
                Term::neg(Term::int(-c))
            } else {
                Term::int(c)
            }
        } else {
            Term::var(INT_VARS.choose(rng).unwrap())
        };
    }
    let a = random_term(rng, depth - 1);
    match rng.gen_range(0..5) {
        0 => Term::add(a, random_term(rng, depth - 1)),
        1 => Term::sub(a, random_term(rng, depth - 1)),
        2 => Term::mul(a, random_term(rng, depth - 1)),
        3 => Term::neg(a),
        _ => Term::pow(a, rng.gen_range(0..=3)),
    }
}

/// A term equal to `t` as a polynomial, built by rewriting with ring laws.
pub fn scramble<R: Rng>(rng: &mut R, t: &Term) -> Term {
    let kids = |t: &Term, rng: &mut R| t.map_children(|c| scramble(rng, c));
    match t {
        Term::Add(a, b) if rng.gen_bool(0.5) => Term::add(scramble(rng, b), scramble(rng, a)),
        Term::Mul(a, b) if rng.gen_bool(0.5) => Term::mul(scramble(rng, b), scramble(rng, a)),
        Term::Mul(a, b) => match &**b {
            Term::Add(c, d) => Term::add(
                Term::mul(scramble(rng, a), scramble(rng, c)),
                Term::mul(scramble(rng, a), scramble(rng, d)),
            ),
            _ => kids(t, rng),
        },
        Term::Sub(a, b) if rng.gen_bool(0.5) => Term::add(scramble(rng, a), Term::neg(scramble(rng, b))),
        Term::Pow(a, e) if **e == Term::int(2) => Term::mul(scramble(rng, a), scramble(rng, a)),
        _ => kids(t, rng),
    }
}

pub fn random_env<R: Rng>(rng: &mut R) -> BTreeMap<String, BigInt> {
    INT_VARS
        .iter()
        .map(|v| (v.to_string(), BigInt::from(rng.gen_range(-1_000_000i64..=1_000_000))))
        .collect()
}

// ------------------------------------------------------- propositions, sets

/// Truth values of propositions and of `element ∈ set` for basic sets.
#[derive(Debug, Clone, Default)]
pub struct World {
    pub props: BTreeMap<String, bool>,
    pub members: BTreeSet<(String, String)>,
    pub elements: BTreeSet<String>,
}

impl World {
    pub fn from_countermodel(m: &Countermodel, elements: &BTreeSet<String>) -> World {
        let mut w = World { elements: elements.clone(), ..World::default() };
        match m {
            Countermodel::Propositional { assignment } => w.props = assignment.clone(),
            Countermodel::SetScenario { memberships, propositions, .. } => {
                w.props = propositions.clone();
                for x in memberships.iter().filter(|x| x.member) {
                    w.members.insert((x.element.clone(), x.set.clone()));
                }
            }
        }
        w
    }

    fn element_in(&self, e: &Term, s: &Term) -> bool {
        match s {
            Term::SetVar(name) => self.members.contains(&(e.to_string(), name.clone())),
            Term::Inter(a, b) => self.element_in(e, a) && self.element_in(e, b),
            Term::Union(a, b) => self.element_in(e, a) || self.element_in(e, b),
            Term::Prod(a, b) => match e {
                Term::Pair(x, y) => self.element_in(x, a) && self.element_in(y, b),
                _ => false,
            },
            other => panic!("not a set: {other:?}"),
        }
    }

    pub fn holds(&self, f: &Formula) -> bool {
        match f {
            Formula::PropVar(p) => self.props.get(p).copied().unwrap_or(false),
            Formula::False => false,
            Formula::Not(a) => !self.holds(a),
            Formula::And(a, b) => self.holds(a) && self.holds(b),
            Formula::Or(a, b) => self.holds(a) || self.holds(b),
            Formula::Implies(a, b) => !self.holds(a) || self.holds(b),
            Formula::In(e, s) => self.element_in(e, s),
            Formula::Subset(x, y) => self.elements.iter().all(|e| {
                let t = parse_element(e);
                !self.element_in(&t, x) || self.element_in(&t, y)
            }),
            other => panic!("outside the Boolean fragment: {other:?}"),
        }
    }
}

fn parse_element(name: &str) -> Term {
    if let Some(inner) = name.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
        if let Some((a, b)) = inner.split_once(", ") {
            return Term::pair(parse_element(a), parse_element(b));
        }
    }
    Term::var(name)
}

fn collect(f: &Formula, props: &mut BTreeSet<String>, sets: &mut BTreeSet<String>, elems: &mut BTreeSet<String>) {
    match f {
        Formula::PropVar(p) => {
            props.insert(p.clone());
        }
        Formula::Not(a) => collect(a, props, sets, elems),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect(a, props, sets, elems);
            collect(b, props, sets, elems);
        }
        Formula::In(e, s) => {
            let mut stack = vec![e.clone()];
            while let Some(t) = stack.pop() {
                if let Term::Pair(a, b) = &t {
                    stack.push((**a).clone());
                    stack.push((**b).clone());
                }
                elems.insert(t.to_string());
            }
            sets.extend(s.set_vars());
        }
        Formula::Subset(x, y) => {
            sets.extend(x.set_vars());
            sets.extend(y.set_vars());
        }
        _ => {}
    }
}

pub fn elements_of(fs: &[&Formula]) -> BTreeSet<String> {
    let (mut p, mut s, mut e) = (BTreeSet::new(), BTreeSet::new(), BTreeSet::new());
    for f in fs {
        collect(f, &mut p, &mut s, &mut e);
    }
    e
}

/// Brute force over all worlds built from the mentioned names: `None` if
/// the premises entail the claim, otherwise a world refuting it.
pub fn oracle_counterexample(premises: &[Formula], claim: &Formula) -> Option<World> {
    let (mut props, mut sets, mut elems) = (BTreeSet::new(), BTreeSet::new(), BTreeSet::new());
    for f in premises.iter().chain(std::iter::once(claim)) {
        collect(f, &mut props, &mut sets, &mut elems);
    }
    let props: Vec<String> = props.into_iter().collect();
    let pairs: Vec<(String, String)> = elems
        .iter()
        .flat_map(|e| sets.iter().map(move |s| (e.clone(), s.clone())))
        .collect();
    let n = props.len() + pairs.len();
    assert!(n <= 24, "oracle would enumerate 2^{n} worlds");
    for code in 0u64..(1u64 << n) {
        let mut w = World { elements: elems.clone(), ..World::default() };
        for (i, p) in props.iter().enumerate() {
            w.props.insert(p.clone(), code >> i & 1 == 1);
        }
        for (j, pair) in pairs.iter().enumerate() {
            if code >> (props.len() + j) & 1 == 1 {
                w.members.insert(pair.clone());
            }
        }
        if premises.iter().all(|p| w.holds(p)) && !w.holds(claim) {
            return Some(w);
        }
    }
    None
}

const PROPS: [&str; 4] = ["P", "Q", "R", "S"];
const SETS: [&str; 4] = ["A", "B", "C", "D"];
const ELEMS: [&str; 2] = ["x", "y"];

pub fn random_prop<R: Rng>(rng: &mut R, vars: &[&str], depth: u32) -> Formula {
    if depth == 0 || rng.gen_ratio(1, 3) {
        return Formula::prop(vars.choose(rng).unwrap());
    }
    let a = random_prop(rng, vars, depth - 1);
    match rng.gen_range(0..4) {
        0 => Formula::not(a),
        1 => Formula::and(a, random_prop(rng, vars, depth - 1)),
        2 => Formula::or(a, random_prop(rng, vars, depth - 1)),
        _ => Formula::implies(a, random_prop(rng, vars, depth - 1)),
    }
}

fn random_set<R: Rng>(rng: &mut R, sets: &[&str], depth: u32) -> Term {
    if depth == 0 || rng.gen_ratio(1, 2) {
        return Term::set(sets.choose(rng).unwrap());
    }
    let a = random_set(rng, sets, depth - 1);
    let b = random_set(rng, sets, depth - 1);
    if rng.gen_bool(0.5) {
        Term::inter(a, b)
    } else {
        Term::union(a, b)
    }
}

fn random_membership<R: Rng>(rng: &mut R, sets: &[&str], depth: u32) -> Formula {
    if depth == 0 || rng.gen_ratio(1, 2) {
        if rng.gen_ratio(1, 6) {
            let pair = Term::pair(Term::var("x"), Term::var("y"));
            let prod = Term::prod(random_set(rng, sets, 1), random_set(rng, sets, 1));
            return Formula::In(pair, prod);
        }
        return Formula::In(Term::var(ELEMS.choose(rng).unwrap()), random_set(rng, sets, 2));
    }
    let a = random_membership(rng, sets, depth - 1);
    match rng.gen_range(0..4) {
        0 => Formula::not(a),
        1 => Formula::and(a, random_membership(rng, sets, depth - 1)),
        2 => Formula::or(a, random_membership(rng, sets, depth - 1)),
        _ => Formula::implies(a, random_membership(rng, sets, depth - 1)),
    }
}

/// Premises and claim over at most four propositional variables.
pub fn random_prop_query<R: Rng>(rng: &mut R) -> (Vec<Formula>, Formula) {
    let k = rng.gen_range(1..=4);
    let vars = &PROPS[..k];
    let premises = (0..rng.gen_range(0..=3)).map(|_| random_prop(rng, vars, 3)).collect();
    (premises, random_prop(rng, vars, 3))
}

/// Premises and claim over at most four set variables and two elements;
/// inclusions appear as whole premises.
pub fn random_set_query<R: Rng>(rng: &mut R) -> (Vec<Formula>, Formula) {
    let k = rng.gen_range(1..=4);
    let sets = &SETS[..k];
    let mut premises: Vec<Formula> = (0..rng.gen_range(0..=3)).map(|_| random_membership(rng, sets, 2)).collect();
    if rng.gen_bool(0.4) {
        premises.push(Formula::Subset(random_set(rng, sets, 1), random_set(rng, sets, 1)));
    }
    (premises, random_membership(rng, sets, 2))
}
