//! The `f^s` power module: finite sums `Σ_k p_k(x, s) · f^(s-k)` with a fixed
//! nonzero polynomial `f` and a formal symbol `s`. Differentiation keeps the
//! complex power formal, which is what makes Cayley-type identities checkable
//! as exact polynomial identities.

use super::poly::MultiPoly;
use super::var::VarId;
use super::AlgebraError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

/// Element `Σ_k p_k · f^(s-k)`, `k ≥ 0`, in canonical form: no zero `p_k`
/// stored, and `f` does not divide any stored `p_k` with `k > 0` (such a term
/// is folded into level `k-1`). The all-zero element is canonical zero
/// regardless of base.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PowerElem {
    base: MultiPoly,
    terms: BTreeMap<u32, MultiPoly>,
}

impl PowerElem {
    /// The bare power `f^s`.
    pub fn power_of(base: MultiPoly) -> Result<Self, AlgebraError> {
        PowerElem::new(base, [(0, MultiPoly::one())].into_iter().collect())
    }

    pub fn new(base: MultiPoly, terms: BTreeMap<u32, MultiPoly>) -> Result<Self, AlgebraError> {
        if base.is_zero() {
            return Err(AlgebraError::ZeroBase);
        }
        let mut e = PowerElem { base, terms };
        e.canonicalize();
        Ok(e)
    }

    pub fn zero(base: MultiPoly) -> Result<Self, AlgebraError> {
        PowerElem::new(base, BTreeMap::new())
    }

    pub fn base(&self) -> &MultiPoly {
        &self.base
    }

    pub fn term(&self, k: u32) -> Option<&MultiPoly> {
        self.terms.get(&k)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &MultiPoly)> {
        self.terms.iter().map(|(&k, p)| (k, p))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn depth(&self) -> u32 {
        self.terms.keys().next_back().copied().unwrap_or(0)
    }

    /// Fold `f`-divisible coefficients downward and drop zeros. A single
    /// descending pass suffices: whatever moves into level `k-1` is processed
    /// when the pass reaches it.
    fn canonicalize(&mut self) {
        let max_k = self.depth();
        let mut k = max_k;
        while k > 0 {
            if let Some(p) = self.terms.get(&k) {
                if let Some(q) = p.div_exact(&self.base) {
                    self.terms.remove(&k);
                    let lower = self.terms.entry(k - 1).or_insert_with(MultiPoly::zero);
                    *lower = lower.add(&q);
                }
            }
            k -= 1;
        }
        self.terms.retain(|_, p| !p.is_zero());
    }

    pub fn add(&self, other: &PowerElem) -> Result<PowerElem, AlgebraError> {
        if self.base != other.base {
            return Err(AlgebraError::BaseMismatch);
        }
        let mut terms = self.terms.clone();
        for (&k, p) in &other.terms {
            let slot = terms.entry(k).or_insert_with(MultiPoly::zero);
            *slot = slot.add(p);
        }
        PowerElem::new(self.base.clone(), terms)
    }

    pub fn mul_poly(&self, p: &MultiPoly) -> PowerElem {
        let terms = self.terms.iter().map(|(&k, q)| (k, q.mul(p))).collect();
        PowerElem::new(self.base.clone(), terms).expect("base unchanged")
    }

    pub fn scale(&self, c: &BigRational) -> PowerElem {
        self.mul_poly(&MultiPoly::constant(c.clone()))
    }

    pub fn neg(&self) -> PowerElem {
        self.scale(&BigRational::from_integer(BigInt::from(-1)))
    }

    /// Leibniz differentiation through the formal power:
    /// `∂_v (p·f^(s-k)) = (∂_v p)·f^(s-k) + p·(s-k)·(∂_v f)·f^(s-k-1)`.
    pub fn differentiate(&self, v: VarId) -> Result<PowerElem, AlgebraError> {
        if v == VarId::S {
            return Err(AlgebraError::FormalSymbolDerivative);
        }
        let df = self.base.partial(v)?;
        let s_poly = MultiPoly::var(VarId::S);
        let mut terms: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (&k, p) in &self.terms {
            let dp = p.partial(v)?;
            if !dp.is_zero() {
                let slot = terms.entry(k).or_insert_with(MultiPoly::zero);
                *slot = slot.add(&dp);
            }
            if !df.is_zero() {
                let s_minus_k = s_poly.sub(&MultiPoly::from_int(k as i64));
                let t = p.mul(&s_minus_k).mul(&df);
                if !t.is_zero() {
                    let slot = terms.entry(k + 1).or_insert_with(MultiPoly::zero);
                    *slot = slot.add(&t);
                }
            }
        }
        PowerElem::new(self.base.clone(), terms)
    }

    /// Equality as formal expressions: cross-multiply to the common depth `K`
    /// and compare `Σ p_k f^(K-k)` as plain polynomials.
    pub fn equals(&self, other: &PowerElem) -> Result<bool, AlgebraError> {
        if self.base != other.base {
            return Err(AlgebraError::BaseMismatch);
        }
        let k_max = self.depth().max(other.depth());
        Ok(self.flatten(k_max) == other.flatten(k_max))
    }

    /// `Σ p_k f^(K-k)` as a plain polynomial (the `f^(s-K)` prefactor dropped).
    pub fn flatten(&self, k_max: u32) -> MultiPoly {
        let mut acc = MultiPoly::zero();
        for (&k, p) in &self.terms {
            debug_assert!(k <= k_max);
            acc = acc.add(&p.mul(&self.base.pow(k_max - k)));
        }
        acc
    }

    /// Numeric evaluation at an integer value of `s` and a concrete rational
    /// assignment; requires `f` nonzero at the point.
    pub fn eval_rational(
        &self,
        assign: &impl Fn(VarId) -> BigRational,
        s_value: i64,
    ) -> Option<BigRational> {
        let full_assign = |v: VarId| {
            if v == VarId::S {
                BigRational::from_integer(BigInt::from(s_value))
            } else {
                assign(v)
            }
        };
        let f_val = self.base.eval(&full_assign);
        if f_val.is_zero() {
            return None;
        }
        let mut acc = BigRational::zero();
        for (&k, p) in &self.terms {
            let e = s_value - k as i64;
            let pv = p.eval(&full_assign);
            acc += pv * rational_int_pow(&f_val, e);
        }
        Some(acc)
    }
}

fn rational_int_pow(x: &BigRational, e: i64) -> BigRational {
    let mut acc = BigRational::from_integer(BigInt::from(1));
    for _ in 0..e.unsigned_abs() {
        acc *= x;
    }
    if e < 0 {
        acc.recip()
    } else {
        acc
    }
}

impl fmt::Display for PowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (k, p)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({p})*f^(s-{k})")?;
        }
        Ok(())
    }
}
