//! Error patterns: schemas of invalid inferences students commonly make.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{acyclic_equations, equal_under, normalize, resolve};
use crate::cnl::{parse_formula, tokenize_schema};
use crate::logic::{is_meta, Formula, Term};
use crate::prover::{boolean, KnowledgeBase, VerdictStatus, DEFAULT_MAX_ATOMS};

const SHIPPED: &str = include_str!("../../catalog/default.patterns");

/// `premises ⊢ claim` is a mistake worth naming.
///
/// Rules without premises whose claim is an equation `L = R` describe a
/// wrong rewrite: the rule fires when replacing some instance of `L` by
/// `R` turns one side of the claimed equation into the other.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PatternRule {
    pub id: String,
    pub premises: Vec<Formula>,
    pub claim: Formula,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PatternCatalog {
    pub rules: Vec<PatternRule>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("line {line}: expected 'id | premises | claim | message'")]
    MissingField { line: usize },
    #[error("line {line}: pattern id must not be empty")]
    EmptyId { line: usize },
    #[error("line {line}: cannot read schema '{schema}': {detail}")]
    BadSchema { line: usize, schema: String, detail: String },
    #[error("line {line}: pattern '{id}' describes a valid inference")]
    ValidSchema { line: usize, id: String },
}

/// A rule that fired, with its message instantiated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PatternMatch {
    pub id: String,
    pub message: String,
}

pub fn default_catalog() -> PatternCatalog {
    PatternCatalog::parse(SHIPPED).expect("shipped catalog is well-formed")
}

impl PatternCatalog {
    /// Read a catalog, rejecting rules whose inference is actually valid.
    pub fn parse(text: &str) -> Result<PatternCatalog, CatalogError> {
        let mut rules = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.splitn(4, '|').map(str::trim).collect();
            let [id, premises, claim, message] = fields[..] else {
                return Err(CatalogError::MissingField { line });
            };
            if id.is_empty() {
                return Err(CatalogError::EmptyId { line });
            }
            let premises = premises
                .split(';')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| parse_schema(s, line))
                .collect::<Result<Vec<_>, _>>()?;
            let rule = PatternRule {
                id: id.to_string(),
                premises,
                claim: parse_schema(claim, line)?,
                message: message.to_string(),
            };
            if is_valid_inference(&rule) {
                return Err(CatalogError::ValidSchema { line, id: rule.id });
            }
            rules.push(rule);
        }
        Ok(PatternCatalog { rules })
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

fn parse_schema(text: &str, line: usize) -> Result<Formula, CatalogError> {
    let bad = |detail: String| CatalogError::BadSchema { line, schema: text.to_string(), detail };
    let tokens = tokenize_schema(text).map_err(|e| bad(e.to_string()))?;
    parse_formula(&tokens).map_err(|e| bad(format!("expected {}", e.expected)))
}

fn rewrite_sides(rule: &PatternRule) -> Option<(&Term, &Term)> {
    match (&rule.claim, rule.premises.is_empty()) {
        (Formula::Eq(l, r), true) => Some((l, r)),
        _ => None,
    }
}

/// Strip the `?` so metavariables become ordinary variables.
fn demeta_term(t: &Term) -> Term {
    match t {
        Term::Var(n) if is_meta(n) => Term::Var(n[1..].to_string()),
        Term::SetVar(n) if is_meta(n) => Term::SetVar(n[1..].to_string()),
        _ => t.map_children(demeta_term),
    }
}

/// Replace atoms outside the Boolean fragment by opaque propositions.
fn opaque(f: &Formula) -> Formula {
    match f {
        Formula::PropVar(p) => Formula::PropVar(p.trim_start_matches('?').to_string()),
        Formula::Not(a) => Formula::not(opaque(a)),
        Formula::And(a, b) => Formula::and(opaque(a), opaque(b)),
        Formula::Or(a, b) => Formula::or(opaque(a), opaque(b)),
        Formula::Implies(a, b) => Formula::implies(opaque(a), opaque(b)),
        Formula::False => Formula::False,
        Formula::In(t, s) => Formula::In(demeta_term(t), demeta_term(s)),
        Formula::Subset(x, y) => Formula::Subset(demeta_term(x), demeta_term(y)),
        other => Formula::PropVar(format!("[{}]", other.map_terms(&mut demeta_term))),
    }
}

fn is_valid_inference(rule: &PatternRule) -> bool {
    if let Some((l, r)) = rewrite_sides(rule) {
        // A rewrite is harmless if it is an identity for small exponents.
        return [2, 3].iter().all(|&n| {
            let sub = |t: &Term| {
                let mut map = BTreeMap::new();
                map.insert("?n".to_string(), Term::int(n));
                demeta_term(&t.substitute(&map))
            };
            matches!((normalize(&sub(l)), normalize(&sub(r))), (Ok(a), Ok(b)) if a == b)
        });
    }
    let premises: Vec<Formula> = rule.premises.iter().map(opaque).collect();
    let claim = match &rule.claim {
        Formula::Subset(..) => Formula::PropVar(format!("[{}]", rule.claim)),
        c => opaque(c),
    };
    matches!(
        boolean::entails(&premises, &claim, true, DEFAULT_MAX_ATOMS),
        Ok(v) if v.status == VerdictStatus::Verified
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Bound {
    Formula(Formula),
    Term(Term),
}

type Bindings = BTreeMap<String, Bound>;

fn bind(b: &mut Bindings, name: &str, value: Bound) -> bool {
    match b.get(name) {
        Some(old) => *old == value,
        None => {
            b.insert(name.to_string(), value);
            true
        }
    }
}

fn match_term(schema: &Term, target: &Term, b: &mut Bindings) -> bool {
    match (schema, target) {
        (Term::Var(m), _) if is_meta(m) => !target.is_set_term() && bind(b, m, Bound::Term(target.clone())),
        (Term::SetVar(m), _) if is_meta(m) => target.is_set_term() && bind(b, m, Bound::Term(target.clone())),
        (Term::Const(x), Term::Const(y)) => x == y,
        (Term::Var(x), Term::Var(y)) | (Term::SetVar(x), Term::SetVar(y)) => x == y,
        (Term::Neg(x), Term::Neg(y)) => match_term(x, y, b),
        (Term::Add(a, c), Term::Add(x, y))
        | (Term::Sub(a, c), Term::Sub(x, y))
        | (Term::Mul(a, c), Term::Mul(x, y))
        | (Term::Pow(a, c), Term::Pow(x, y))
        | (Term::Inter(a, c), Term::Inter(x, y))
        | (Term::Union(a, c), Term::Union(x, y))
        | (Term::Prod(a, c), Term::Prod(x, y))
        | (Term::Pair(a, c), Term::Pair(x, y)) => match_term(a, x, b) && match_term(c, y, b),
        _ => false,
    }
}

fn match_formula(schema: &Formula, target: &Formula, b: &mut Bindings) -> bool {
    match (schema, target) {
        (Formula::PropVar(m), _) if is_meta(m) => bind(b, m, Bound::Formula(target.clone())),
        (Formula::PropVar(x), Formula::PropVar(y)) => x == y,
        (Formula::False, Formula::False) => true,
        (Formula::Not(x), Formula::Not(y)) => match_formula(x, y, b),
        (Formula::And(a, c), Formula::And(x, y))
        | (Formula::Or(a, c), Formula::Or(x, y))
        | (Formula::Implies(a, c), Formula::Implies(x, y)) => match_formula(a, x, b) && match_formula(c, y, b),
        (Formula::Eq(a, c), Formula::Eq(x, y))
        | (Formula::In(a, c), Formula::In(x, y))
        | (Formula::Subset(a, c), Formula::Subset(x, y))
        | (Formula::Divides(a, c), Formula::Divides(x, y)) => match_term(a, x, b) && match_term(c, y, b),
        (Formula::Even(a), Formula::Even(x)) | (Formula::Odd(a), Formula::Odd(x)) => match_term(a, x, b),
        _ => false,
    }
}

fn instantiate_term(t: &Term, b: &Bindings) -> Term {
    match t {
        Term::Var(m) | Term::SetVar(m) if is_meta(m) => match b.get(m) {
            Some(Bound::Term(v)) => v.clone(),
            _ => t.clone(),
        },
        _ => t.map_children(|c| instantiate_term(c, b)),
    }
}

fn instantiate_message(message: &str, b: &Bindings) -> String {
    let mut out = message.to_string();
    for (name, value) in b {
        let key = format!("{{{name}}}");
        let mut rendered = String::new();
        let mut rest = out.as_str();
        while let Some(pos) = rest.find(&key) {
            rendered.push_str(&rest[..pos]);
            rest = &rest[pos + key.len()..];
            // A base of a power needs parentheses unless it is a single symbol.
            let as_base = rest.starts_with('^');
            rendered.push_str(&match value {
                Bound::Formula(f) => f.to_string(),
                Bound::Term(t) if is_simple(t, as_base) => t.to_string(),
                Bound::Term(t) => format!("({t})"),
            });
        }
        rendered.push_str(rest);
        out = rendered;
    }
    out
}

fn is_simple(t: &Term, as_base: bool) -> bool {
    match t {
        Term::Const(c) => c.sign() != num_bigint::Sign::Minus,
        Term::Var(_) | Term::SetVar(_) | Term::Pair(..) => true,
        Term::Pow(base, _) => !as_base && matches!(**base, Term::Var(_)),
        Term::Mul(c, v) => !as_base && matches!((&**c, &**v), (Term::Const(_), Term::Var(_))),
        _ => false,
    }
}

/// Match premise schemas against known facts, in any order, consistently
/// with the bindings obtained so far.
fn match_premises(schemas: &[Formula], facts: &[Formula], b: &Bindings) -> Option<Bindings> {
    let Some((first, rest)) = schemas.split_first() else {
        return Some(b.clone());
    };
    for fact in facts {
        let mut attempt = b.clone();
        if match_formula(first, fact, &mut attempt) {
            if let Some(done) = match_premises(rest, facts, &attempt) {
                return Some(done);
            }
        }
    }
    None
}

fn replace_subterm(t: &Term, from: &Term, to: &Term) -> Term {
    if t == from {
        return to.clone();
    }
    t.map_children(|c| replace_subterm(c, from, to))
}

fn match_rewrite(l: &Term, r: &Term, claim: &Formula, kb: &KnowledgeBase) -> Option<Bindings> {
    let eqs = acyclic_equations(&kb.equations());
    for part in claim.conjuncts() {
        let Formula::Eq(a, c) = part else { continue };
        for (side, other) in [(a, c), (c, a)] {
            let mut views = vec![side.clone()];
            if let Ok(resolved) = resolve(&eqs, side) {
                if resolved != *side {
                    views.push(resolved);
                }
            }
            for view in &views {
                for sub in view.subterms() {
                    let mut b = Bindings::new();
                    if !match_term(l, sub, &mut b) {
                        continue;
                    }
                    let replaced = replace_subterm(view, sub, &instantiate_term(r, &b));
                    if replaced != *view && equal_under(&eqs, &replaced, other) == Ok(true) {
                        return Some(b);
                    }
                }
            }
        }
    }
    None
}

/// All catalog rules the unverified `claim` instantiates, given the facts
/// in `kb`. Each rule id is reported once.
pub fn detect_patterns(claim: &Formula, kb: &KnowledgeBase, catalog: &PatternCatalog) -> Vec<PatternMatch> {
    let mut facts: Vec<Formula> = kb.literals();
    for f in kb.facts() {
        if !facts.contains(f) {
            facts.push(f.clone());
        }
    }
    let mut out: Vec<PatternMatch> = Vec::new();
    for rule in &catalog.rules {
        if out.iter().any(|m| m.id == rule.id) {
            continue;
        }
        let found = match rewrite_sides(rule) {
            Some((l, r)) => match_rewrite(l, r, claim, kb),
            None => {
                let mut b = Bindings::new();
                if match_formula(&rule.claim, claim, &mut b) {
                    match_premises(&rule.premises, &facts, &b)
                } else {
                    None
                }
            }
        };
        if let Some(b) = found {
            out.push(PatternMatch { id: rule.id.clone(), message: instantiate_message(&rule.message, &b) });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnl::{parse_formula, tokenize};
    use crate::logic::{Sort, TypeContext};

    fn f(s: &str) -> Formula {
        parse_formula(&tokenize(s).unwrap()).unwrap()
    }

    fn kb(facts: &[&str]) -> KnowledgeBase {
        let mut ctx = TypeContext::new();
        for v in ["x", "y", "z", "a", "b", "k", "t"] {
            ctx.declare(v, Sort::Integer).unwrap();
        }
        KnowledgeBase::from_facts(ctx, facts.iter().map(|s| f(s)).collect())
    }

    fn ids(claim: &str, facts: &[&str]) -> Vec<String> {
        detect_patterns(&f(claim), &kb(facts), &default_catalog()).into_iter().map(|m| m.id).collect()
    }

    #[test]
    fn shipped_catalog_loads() {
        assert!(default_catalog().len() >= 8);
    }

    #[test]
    fn denying_the_antecedent() {
        assert_eq!(ids("¬Q", &["P → Q", "¬P"]), vec!["denying-the-antecedent"]);
    }

    #[test]
    fn freshman_binomial_through_substitution() {
        assert_eq!(ids("x^2 = a^2 + b^2", &["x = a + b"]), vec!["freshman-binomial"]);
    }

    #[test]
    fn power_distribution_through_substitution() {
        assert_eq!(ids("y^3 = 2z^3", &["y = 2z"]), vec!["power-distribution"]);
        assert_eq!(ids("(2k)^2 + 2 = 2k^2 + 2", &[]), vec!["power-distribution"]);
    }

    #[test]
    fn set_patterns() {
        let m = ids("t ∈ A", &["t ∈ A ∪ B"]);
        assert_eq!(m, vec!["union-intersection-swap"]);
        assert_eq!(ids("t ∈ A", &["A ⊂ B", "t ∈ B"]), vec!["subset-direction-swap"]);
    }

    #[test]
    fn message_is_instantiated() {
        let m = detect_patterns(&f("¬Q"), &kb(&["P → Q", "¬P"]), &default_catalog());
        assert!(m[0].message.starts_with("From P → Q and ¬P"), "{}", m[0].message);
    }

    #[test]
    fn valid_schemas_are_rejected() {
        let err = PatternCatalog::parse("modus-ponens | ?P → ?Q; ?P | ?Q | fine\n").unwrap_err();
        assert_eq!(err, CatalogError::ValidSchema { line: 1, id: "modus-ponens".into() });
        let err = PatternCatalog::parse("# c\nsquare | | (?a * ?b)^?n = ?a^?n * ?b^?n | fine").unwrap_err();
        assert!(matches!(err, CatalogError::ValidSchema { line: 2, .. }));
        let err = PatternCatalog::parse("sub | ?X ⊂ ?Y; ?t ∈ ?X | ?t ∈ ?Y | fine").unwrap_err();
        assert!(matches!(err, CatalogError::ValidSchema { .. }));
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(PatternCatalog::parse("x | ?P"), Err(CatalogError::MissingField { line: 1 })));
        assert!(matches!(PatternCatalog::parse("x | | ?P ∧ | m"), Err(CatalogError::BadSchema { .. })));
        assert!(PatternCatalog::parse("").unwrap().is_empty());
    }
}
