//! Sparse multivariate polynomials over arbitrary-precision rationals.

use super::var::{Monomial, VarId};
use super::AlgebraError;
use crate::scalar::Ring;
use num_bigint::BigInt;
use num_rational::BigRational;
use std::collections::BTreeMap;
use std::fmt;

fn q_is_zero(c: &BigRational) -> bool {
    num_traits::Zero::is_zero(c)
}

fn q_one() -> BigRational {
    num_traits::One::one()
}

/// Exact multivariate polynomial: monomial -> nonzero rational coefficient.
/// The zero polynomial has an empty term map.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        MultiPoly::constant(q_one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q_is_zero(&c) {
            terms.insert(Monomial::unit(), c);
        }
        MultiPoly { terms }
    }

    pub fn from_int(n: i64) -> Self {
        MultiPoly::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn var(v: VarId) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(v), q_one());
        MultiPoly { terms }
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q_is_zero(&c) {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    fn insert_add(&mut self, m: Monomial, c: BigRational) {
        if q_is_zero(&c) {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if q_is_zero(&sum) {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.insert_add(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> MultiPoly {
        if q_is_zero(&c) {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut out = MultiPoly::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Exact partial derivative. The formal symbol `s` is rejected.
    pub fn partial(&self, v: VarId) -> Result<MultiPoly, AlgebraError> {
        if v == VarId::S {
            return Err(AlgebraError::FormalSymbolDerivative);
        }
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            if let Some((e, reduced)) = m.step_down(v) {
                out.insert_add(reduced, c * BigRational::from_integer(BigInt::from(e)));
            }
        }
        Ok(out)
    }

    /// Leading term under graded lex.
    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Multivariate division by `f`: `Some(q)` iff `self = q * f` exactly.
    /// Standard leading-term reduction; bails out at the first term that
    /// would land in the remainder.
    pub fn div_exact(&self, f: &MultiPoly) -> Option<MultiPoly> {
        assert!(!f.is_zero(), "division by zero polynomial");
        let (fm, fc) = f.leading().expect("nonzero divisor");
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero();
        while let Some((pm, pc)) = rem.leading() {
            if !fm.divides(pm) {
                return None;
            }
            let qm = fm.quotient_into(pm);
            let qc = pc / fc;
            let t = MultiPoly::monomial(qm, qc);
            rem = rem.sub(&t.mul(f));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Evaluate over any coefficient ring via a variable assignment.
    pub fn eval<R: Ring>(&self, assign: &impl Fn(VarId) -> R) -> R {
        let mut acc = R::zero();
        for (m, c) in &self.terms {
            let mut t = R::from_rational(c);
            for &(v, e) in m.pairs() {
                let x = assign(v);
                for _ in 0..e {
                    t = t.mul(&x);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Substitute a polynomial for one variable.
    pub fn substitute(&self, v: VarId, value: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            let rest: Vec<(VarId, u32)> = m
                .pairs()
                .iter()
                .copied()
                .filter(|&(w, _)| w != v)
                .collect();
            let mut t = MultiPoly::monomial(Monomial::from_pairs(rest), c.clone());
            if e > 0 {
                t = t.mul(&value.pow(e));
            }
            out = out.add(&t);
        }
        out
    }

    pub fn variables(&self) -> std::collections::BTreeSet<VarId> {
        self.terms.keys().flat_map(|m| m.variables()).collect()
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            if m.is_unit() {
                write!(f, "{c}")?;
            } else if num_traits::One::is_one(c) {
                write!(f, "{m}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}

impl Ring for MultiPoly {
    fn zero() -> Self {
        MultiPoly::zero()
    }
    fn one() -> Self {
        MultiPoly::one()
    }
    fn add(&self, rhs: &Self) -> Self {
        MultiPoly::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        MultiPoly::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        MultiPoly::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        MultiPoly::neg(self)
    }
    fn is_zero(&self) -> bool {
        MultiPoly::is_zero(self)
    }
    fn from_i64(n: i64) -> Self {
        MultiPoly::from_int(n)
    }
    fn div_int(&self, n: i64) -> Self {
        assert!(n != 0);
        self.scale(&BigRational::new(BigInt::from(1), BigInt::from(n)))
    }
    fn from_rational(q: &BigRational) -> Self {
        MultiPoly::constant(q.clone())
    }
}
