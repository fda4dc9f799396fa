//! Parity and divisibility rules over polynomial normal forms.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::{
    divisibility_certificate, normalize_under, parity_product_certificate, Equation, Polynomial,
};
use crate::logic::{Formula, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

/// A parity literal from the knowledge base and the rule that yields it.
struct ParityFact {
    term: Term,
    parity: Parity,
    via_negation: bool,
}

pub(crate) struct ArithContext<'k> {
    pub equations: &'k [Equation],
    pub facts: &'k [Formula],
}

/// Outcome of a backward search: the rule trace on success, and whether the
/// depth budget cut off some branch.
#[derive(Debug, Default)]
pub(crate) struct Search {
    pub trace: Option<Vec<String>>,
    pub depth_exceeded: bool,
}

impl Search {
    fn found(rules: Vec<String>) -> Search {
        Search { trace: Some(rules), depth_exceeded: false }
    }

    fn found_with(rule: &str, mut sub: Vec<String>) -> Search {
        sub.insert(0, rule.to_string());
        Search::found(sub)
    }
}

fn two() -> BigInt {
    BigInt::from(2)
}

fn all_even(p: &Polynomial) -> bool {
    p.all_coefficients_divisible_by(&two())
}

impl ArithContext<'_> {
    fn poly(&self, t: &Term) -> Option<Polynomial> {
        normalize_under(self.equations, t).ok()
    }

    fn parity_facts(&self) -> Vec<ParityFact> {
        let mut out = Vec::new();
        for f in self.facts {
            let (term, parity, via_negation) = match f {
                Formula::Even(t) => (t, Parity::Even, false),
                Formula::Odd(t) => (t, Parity::Odd, false),
                Formula::Not(inner) => match &**inner {
                    Formula::Even(t) => (t, Parity::Odd, true),
                    Formula::Odd(t) => (t, Parity::Even, true),
                    _ => continue,
                },
                _ => continue,
            };
            out.push(ParityFact { term: term.clone(), parity, via_negation });
        }
        out
    }

    /// Prove that `t` has parity `want`.
    pub fn prove_parity(&self, t: &Term, want: Parity, depth: u32) -> Search {
        let Some(p) = self.poly(t) else { return Search::default() };
        match want {
            Parity::Even if all_even(&p) => return Search::found(vec!["even-from-2q".into()]),
            Parity::Odd if all_even(&p.sub(&Polynomial::constant(1))) => {
                return Search::found(vec!["odd-from-2q+1".into()])
            }
            _ => {}
        }

        for fact in self.parity_facts() {
            let Some(q) = self.poly(&fact.term) else { continue };
            let d = p.sub(&q);
            let implied = if all_even(&d) {
                fact.parity
            } else if all_even(&d.sub(&Polynomial::constant(1))) {
                fact.parity.flip()
            } else {
                continue;
            };
            if implied != want {
                continue;
            }
            let rule = match (d.is_zero(), fact.via_negation) {
                (true, false) => "fact",
                (true, true) => "parity-totality",
                (false, false) => "parity-shift",
                (false, true) => "parity-totality+shift",
            };
            return Search::found(vec![rule.into()]);
        }

        let target = match want {
            Parity::Even => p.clone(),
            Parity::Odd => p.sub(&Polynomial::constant(1)),
        };
        if parity_product_certificate(&two(), &target).is_some() {
            return Search::found(vec!["parity-product".into()]);
        }

        self.parity_by_structure(t, want, depth)
    }

    fn parity_by_structure(&self, t: &Term, want: Parity, depth: u32) -> Search {
        let structural = matches!(t, Term::Mul(..) | Term::Pow(..) | Term::Add(..) | Term::Sub(..) | Term::Neg(..));
        if !structural {
            return Search::default();
        }
        if depth == 0 {
            return Search { trace: None, depth_exceeded: true };
        }
        let d = depth - 1;
        let mut exceeded = false;
        let sub = |s: &Term, par: Parity, exceeded: &mut bool| -> Option<Vec<String>> {
            let r = self.prove_parity(s, par, d);
            *exceeded |= r.depth_exceeded;
            r.trace
        };
        let result = match (t, want) {
            (Term::Neg(a), _) => sub(a, want, &mut exceeded).map(|tr| ("negation-parity", tr)),
            (Term::Pow(a, e), _) if matches!(&**e, Term::Const(c) if c.is_positive()) => {
                sub(a, want, &mut exceeded).map(|tr| ("power-parity", tr))
            }
            (Term::Mul(a, b), Parity::Even) => sub(a, Parity::Even, &mut exceeded)
                .or_else(|| sub(b, Parity::Even, &mut exceeded))
                .map(|tr| ("even-factor", tr)),
            (Term::Mul(a, b), Parity::Odd) => sub(a, Parity::Odd, &mut exceeded)
                .and_then(|mut ta| sub(b, Parity::Odd, &mut exceeded).map(|tb| {
                    ta.extend(tb);
                    ta
                }))
                .map(|tr| ("odd-product", tr)),
            (Term::Add(a, b) | Term::Sub(a, b), _) => {
                let options = match want {
                    Parity::Even => [(Parity::Even, Parity::Even), (Parity::Odd, Parity::Odd)],
                    Parity::Odd => [(Parity::Even, Parity::Odd), (Parity::Odd, Parity::Even)],
                };
                options
                    .iter()
                    .find_map(|&(pa, pb)| {
                        let mut ta = sub(a, pa, &mut exceeded)?;
                        ta.extend(sub(b, pb, &mut exceeded)?);
                        Some(ta)
                    })
                    .map(|tr| ("sum-parity", tr))
            }
            _ => None,
        };
        match result {
            Some((rule, tr)) => Search::found_with(rule, tr),
            None => Search { trace: None, depth_exceeded: exceeded },
        }
    }

    /// Prove `d | t`.
    pub fn prove_divides(&self, d: &Term, t: &Term, depth: u32) -> Search {
        let Some(p) = self.poly(t) else { return Search::default() };
        let divisor = match d {
            Term::Const(c) if c.is_positive() => c.clone(),
            Term::Var(v) => return self.variable_divisor(v, d, &p),
            _ => return Search::default(),
        };
        if divisor.is_one() {
            return Search::found(vec!["unit-divisor".into()]);
        }
        if divisibility_certificate(&divisor, t, self.equations).is_some() {
            return Search::found(vec!["divisibility-certificate".into()]);
        }
        if parity_product_certificate(&divisor, &p).is_some() {
            return Search::found(vec!["parity-product".into()]);
        }
        for f in self.facts {
            let Formula::Divides(Term::Const(e), s) = f else { continue };
            if !e.is_positive() || !(e % &divisor).is_zero() {
                continue;
            }
            let Some(q) = self.poly(s) else { continue };
            let diff = p.sub(&q);
            if diff.is_zero() {
                return Search::found(vec![if *e == divisor { "fact" } else { "divisor-weakening" }.into()]);
            }
            if diff.all_coefficients_divisible_by(&divisor) {
                return Search::found(vec!["divisibility-shift".into()]);
            }
        }
        if divisor == two() {
            let r = self.prove_parity(t, Parity::Even, depth);
            if let Some(tr) = r.trace {
                return Search::found_with("two-divides-even", tr);
            }
            if r.depth_exceeded {
                return r;
            }
        }
        self.divides_by_structure(d, t, depth)
    }

    fn variable_divisor(&self, v: &str, d: &Term, p: &Polynomial) -> Search {
        if !p.is_zero() && p.terms().all(|(m, _)| m.degree_in(v) > 0) {
            return Search::found(vec!["variable-factor".into()]);
        }
        let fact = Formula::Divides(d.clone(), p.to_term());
        if self.facts.contains(&fact) {
            return Search::found(vec!["fact".into()]);
        }
        Search::default()
    }

    fn divides_by_structure(&self, d: &Term, t: &Term, depth: u32) -> Search {
        if !matches!(t, Term::Mul(..) | Term::Add(..) | Term::Sub(..) | Term::Neg(..)) {
            return Search::default();
        }
        if depth == 0 {
            return Search { trace: None, depth_exceeded: true };
        }
        let mut exceeded = false;
        let sub = |s: &Term, exceeded: &mut bool| {
            let r = self.prove_divides(d, s, depth - 1);
            *exceeded |= r.depth_exceeded;
            r.trace
        };
        let result = match t {
            Term::Neg(a) => sub(a, &mut exceeded).map(|tr| ("divides-negation", tr)),
            Term::Mul(a, b) => sub(a, &mut exceeded)
                .or_else(|| sub(b, &mut exceeded))
                .map(|tr| ("divides-factor", tr)),
            Term::Add(a, b) | Term::Sub(a, b) => sub(a, &mut exceeded)
                .and_then(|mut ta| sub(b, &mut exceeded).map(|tb| {
                    ta.extend(tb);
                    ta
                }))
                .map(|tr| ("divides-sum", tr)),
            _ => None,
        };
        match result {
            Some((rule, tr)) => Search::found_with(rule, tr),
            None => Search { trace: None, depth_exceeded: exceeded },
        }
    }

    /// `∃var. formula` for an equation linear in `var`: `α·var + β = 0` has an
    /// integer solution when `α | β`.
    pub fn prove_witness(&self, var: &str, formula: &Formula, depth: u32) -> Search {
        let Formula::Eq(lhs, rhs) = formula else { return Search::default() };
        let Some(diff) = self.poly(&Term::sub(lhs.clone(), rhs.clone())) else { return Search::default() };
        let Some((alpha, beta)) = crate::algebra::linear_in(&diff, var) else { return Search::default() };
        if alpha.abs().is_one() {
            return Search::found(vec!["witness-unit".into()]);
        }
        let divisor = Term::Const(alpha.abs());
        let r = if alpha.abs() == two() {
            self.prove_parity(&beta.to_term(), Parity::Even, depth)
        } else {
            self.prove_divides(&divisor, &beta.to_term(), depth)
        };
        match r.trace {
            Some(tr) => Search::found_with("witness-from-divisibility", tr),
            None => r,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx<'a>(eqs: &'a [Equation], facts: &'a [Formula]) -> ArithContext<'a> {
        ArithContext { equations: eqs, facts }
    }

    fn two_minus_three_x() -> Term {
        Term::sub(Term::int(2), Term::mul(Term::int(3), Term::var("x")))
    }

    #[test]
    fn even_from_definition() {
        let eqs = [Equation::new("x", Term::mul(Term::int(2), Term::var("k")))];
        let r = ctx(&eqs, &[]).prove_parity(&two_minus_three_x(), Parity::Even, 3);
        assert_eq!(r.trace, Some(vec!["even-from-2q".to_string()]));
    }

    #[test]
    fn no_claim_from_nothing() {
        let r = ctx(&[], &[]).prove_parity(&two_minus_three_x(), Parity::Even, 3);
        assert!(r.trace.is_none());
    }

    #[test]
    fn exclusion_does_not_prove_the_opposite() {
        let t = Term::add(Term::pow(Term::var("x"), 2), Term::int(2));
        let facts = [Formula::Even(t.clone())];
        assert!(ctx(&[], &facts).prove_parity(&t, Parity::Odd, 3).trace.is_none());
        assert!(ctx(&[], &facts).prove_parity(&t, Parity::Even, 3).trace.is_some());
    }

    #[test]
    fn totality_from_negated_fact() {
        let facts = [Formula::not(Formula::Odd(Term::var("x")))];
        let r = ctx(&[], &facts).prove_parity(&Term::var("x"), Parity::Even, 3);
        assert_eq!(r.trace, Some(vec!["parity-totality".to_string()]));
    }

    #[test]
    fn structural_parity_uses_budget() {
        let facts = [Formula::Even(Term::var("x"))];
        let t = Term::add(Term::pow(Term::var("x"), 2), Term::int(2));
        let c = ctx(&[], &facts);
        assert!(c.prove_parity(&t, Parity::Even, 3).trace.is_some());
        let r = c.prove_parity(&t, Parity::Even, 0);
        assert!(r.trace.is_none());
        assert!(r.depth_exceeded);
    }

    #[test]
    fn eight_divides_via_consecutive_product() {
        let n = || Term::var("n");
        let t = Term::sub(Term::pow(Term::sub(Term::mul(Term::int(2), n()), Term::int(1)), 2), Term::int(1));
        let r = ctx(&[], &[]).prove_divides(&Term::int(8), &t, 3);
        assert_eq!(r.trace, Some(vec!["parity-product".to_string()]));
    }

    #[test]
    fn four_divides_three_n_squared() {
        let eqs = [Equation::new("n", Term::mul(Term::int(2), Term::var("m")))];
        let t = Term::mul(Term::int(3), Term::pow(Term::var("n"), 2));
        let r = ctx(&eqs, &[]).prove_divides(&Term::int(4), &t, 3);
        assert_eq!(r.trace, Some(vec!["divisibility-certificate".to_string()]));
        assert!(ctx(&[], &[]).prove_divides(&Term::int(4), &t, 3).trace.is_none());
    }

    #[test]
    fn witnesses_for_even_and_odd() {
        let x2k = Formula::Eq(Term::var("x"), Term::mul(Term::int(2), Term::var("k")));
        let even = [Formula::Even(Term::var("x"))];
        assert!(ctx(&[], &even).prove_witness("k", &x2k, 3).trace.is_some());
        assert!(ctx(&[], &[]).prove_witness("k", &x2k, 3).trace.is_none());
        let x2k1 = Formula::Eq(Term::var("x"), Term::add(Term::mul(Term::int(2), Term::var("k")), Term::int(1)));
        let odd = [Formula::Odd(Term::var("x"))];
        assert!(ctx(&[], &odd).prove_witness("k", &x2k1, 3).trace.is_some());
        assert!(ctx(&[], &even).prove_witness("k", &x2k1, 3).trace.is_none());
    }
}
