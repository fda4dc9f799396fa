use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::logic::Term;

/// Product of variables with positive exponents; keys sorted by name.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(BTreeMap<String, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn var(name: &str) -> Self {
        Monomial([(name.to_string(), 1)].into_iter().collect())
    }

    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn degree_in(&self, var: &str) -> u32 {
        self.0.get(var).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = (&str, u32)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    fn times(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (v, e) in &other.0 {
            *out.entry(v.clone()).or_insert(0) += e;
        }
        Monomial(out)
    }

    fn without(&self, var: &str) -> Monomial {
        let mut out = self.0.clone();
        out.remove(var);
        Monomial(out)
    }

    fn with_power(&self, var: &str, e: u32) -> Monomial {
        let mut out = self.0.clone();
        if e == 0 {
            out.remove(var);
        } else {
            out.insert(var.to_string(), e);
        }
        Monomial(out)
    }
}

/// Multivariate polynomial over the integers in canonical form.
///
/// Zero coefficients are never stored, so structural equality coincides
/// with equality as polynomials.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c.into());
        p
    }

    pub fn var(name: &str) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::var(name), BigInt::one());
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coefficient(&Monomial::one())
    }

    /// The value if this polynomial has no variables.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn vars(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .terms
            .keys()
            .flat_map(|m| m.0.keys().cloned())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn degree_in(&self, var: &str) -> u32 {
        self.terms.keys().map(|m| m.degree_in(var)).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.times(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * k);
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::constant(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Non-negative gcd of all coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn all_coefficients_divisible_by(&self, d: &BigInt) -> bool {
        !d.is_zero() && self.terms.values().all(|c| (c % d).is_zero())
    }

    /// Divide every coefficient by `d`, if all are divisible.
    pub fn exact_div_int(&self, d: &BigInt) -> Option<Polynomial> {
        if !self.all_coefficients_divisible_by(d) {
            return None;
        }
        Some(Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c / d)).collect(),
        })
    }

    pub fn eval(&self, env: &BTreeMap<String, BigInt>) -> Option<BigInt> {
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (name, e) in &m.0 {
                v *= num_traits::pow(env.get(name)?.clone(), *e as usize);
            }
            total += v;
        }
        Some(total)
    }

    /// Replace `var` by the polynomial `value` everywhere.
    pub fn substitute(&self, var: &str, value: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.degree_in(var);
            let rest = Polynomial::from_terms([(m.without(var), c.clone())]);
            out = out.add(&rest.mul(&value.pow(e)));
        }
        out
    }

    /// Coefficients as a polynomial in `var`: index i holds the coefficient of `var^i`.
    pub fn coefficients_in(&self, var: &str) -> Vec<Polynomial> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![Polynomial::zero(); deg + 1];
        for (m, c) in &self.terms {
            let e = m.degree_in(var) as usize;
            out[e].add_term(m.without(var), c.clone());
        }
        out
    }

    fn from_coefficients_in(var: &str, coeffs: &[Polynomial]) -> Polynomial {
        let mut out = Polynomial::zero();
        for (i, p) in coeffs.iter().enumerate() {
            for (m, c) in &p.terms {
                out.add_term(m.with_power(var, i as u32), c.clone());
            }
        }
        out
    }

    /// Exact quotient by `(var - root)`, if the division leaves no remainder.
    pub fn div_linear(&self, var: &str, root: &BigInt) -> Option<Polynomial> {
        let a = self.coefficients_in(var);
        if a.len() == 1 {
            return if a[0].is_zero() { Some(Polynomial::zero()) } else { None };
        }
        let r = Polynomial::constant(root.clone());
        let n = a.len() - 1;
        let mut b = vec![Polynomial::zero(); n];
        b[n - 1] = a[n].clone();
        for i in (1..n).rev() {
            b[i - 1] = a[i].add(&r.mul(&b[i]));
        }
        let remainder = a[0].add(&r.mul(&b[0]));
        if !remainder.is_zero() {
            return None;
        }
        Some(Polynomial::from_coefficients_in(var, &b))
    }

    /// Back to a term, highest total degree first.
    pub fn to_term(&self) -> Term {
        let mut entries: Vec<_> = self.terms.iter().collect();
        entries.sort_by(|(m1, _), (m2, _)| m2.degree().cmp(&m1.degree()).then(m1.cmp(m2)));
        let mut acc: Option<Term> = None;
        for (m, c) in entries {
            let mut factors: Vec<Term> = m
                .0
                .iter()
                .map(|(v, e)| if *e == 1 { Term::var(v) } else { Term::pow(Term::var(v), *e) })
                .collect();
            let magnitude = c.abs();
            if !magnitude.is_one() || factors.is_empty() {
                factors.insert(0, Term::Const(magnitude));
            }
            let mono = factors.into_iter().reduce(Term::mul).expect("nonempty");
            acc = Some(match acc {
                None if c.is_negative() => Term::neg(mono),
                None => mono,
                Some(prev) if c.is_negative() => Term::sub(prev, mono),
                Some(prev) => Term::add(prev, mono),
            });
        }
        acc.unwrap_or_else(|| Term::int(0))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut entries: Vec<_> = self.terms.iter().collect();
        entries.sort_by(|(m1, _), (m2, _)| m2.degree().cmp(&m1.degree()).then(m1.cmp(m2)));
        for (i, (m, c)) in entries.into_iter().enumerate() {
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let magnitude = c.abs();
            if !magnitude.is_one() || m.is_one() {
                write!(f, "{magnitude}")?;
            }
            for (j, (v, e)) in m.0.iter().enumerate() {
                if j > 0 {
                    f.write_str("·")?;
                }
                f.write_str(v)?;
                if *e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
