//! Normal-ordered differential operators with polynomial coefficients,
//! column determinants of operator matrices, and the executable Capelli and
//! Cayley identities.
//!
//! An operator is stored as `Σ c · x^a · ∂^b` with every derivative to the
//! right. Multiplication commutes derivatives past coefficients with the
//! exact Weyl-algebra rule, so the stored form is always the normal form and
//! operator equality is equality of term maps.

use crate::exact_algebra::{AlgebraError, Monomial, MultiPoly, PowerElem, VarId};
use crate::matrix::Mat;
use crate::perm::for_each_permutation;
use crate::report::{Guards, GuardError, ReportBuilder, VerificationReport};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Normal-ordered element of the Weyl algebra: map from
/// `(coefficient monomial, derivative multi-index)` to a rational coefficient.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct WeylOp {
    terms: BTreeMap<(Monomial, Monomial), BigRational>,
}

impl WeylOp {
    pub fn zero() -> Self {
        WeylOp { terms: BTreeMap::new() }
    }

    /// The identity operator.
    pub fn one() -> Self {
        WeylOp::from_poly(&MultiPoly::one())
    }

    /// Multiplication operator by a polynomial.
    pub fn from_poly(p: &MultiPoly) -> Self {
        let mut terms = BTreeMap::new();
        for (m, c) in p.terms() {
            terms.insert((m.clone(), Monomial::unit()), c.clone());
        }
        WeylOp { terms }
    }

    /// The derivation `∂_v`. The formal symbol is rejected.
    pub fn partial(v: VarId) -> Result<Self, AlgebraError> {
        if v == VarId::S {
            return Err(AlgebraError::FormalSymbolDerivative);
        }
        let mut terms = BTreeMap::new();
        terms.insert((Monomial::unit(), Monomial::var(v)), BigRational::one());
        Ok(WeylOp { terms })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Monomial, Monomial), &BigRational)> {
        self.terms.iter()
    }

    fn insert_add(&mut self, key: (Monomial, Monomial), c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &WeylOp) -> WeylOp {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert_add(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &WeylOp) -> WeylOp {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert_add(k.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> WeylOp {
        WeylOp {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> WeylOp {
        if c.is_zero() {
            return WeylOp::zero();
        }
        WeylOp {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn add_scalar(&self, c: &BigRational) -> WeylOp {
        let mut out = self.clone();
        out.insert_add((Monomial::unit(), Monomial::unit()), c.clone());
        out
    }

    /// Normal-ordered product. Applying the result to a polynomial equals
    /// applying `other` first and then `self`.
    pub fn mul(&self, other: &WeylOp) -> WeylOp {
        let mut out = WeylOp::zero();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                // Commute ∂^{b1} past x^{a2}:
                //   ∂^{b1} x^{a2} = Σ_γ Π_v C(b1_v,γ_v) (a2_v)_γ_v · x^{a2-γ} ∂^{b1-γ}
                let coeff = c1 * c2;
                let common: Vec<(VarId, u32, u32)> = b1
                    .pairs()
                    .iter()
                    .filter_map(|&(v, e1)| {
                        let e2 = a2.exponent(v);
                        if e2 > 0 {
                            Some((v, e1, e2))
                        } else {
                            None
                        }
                    })
                    .collect();
                for_each_gamma(&common, |gamma, factor| {
                    let gamma_mon = Monomial::from_pairs(
                        common
                            .iter()
                            .zip(gamma)
                            .map(|(&(v, _, _), &g)| (v, g))
                            .collect(),
                    );
                    let x_part = a1.mul(&gamma_mon.quotient_into(a2));
                    let d_part = gamma_mon.quotient_into(b1).mul(b2);
                    out.insert_add(
                        (x_part, d_part),
                        &coeff * BigRational::from_integer(factor.clone()),
                    );
                });
            }
        }
        out
    }

    /// Exact action on a polynomial.
    pub fn apply_poly(&self, p: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for ((a, b), c) in &self.terms {
            let mut q = p.clone();
            for &(v, e) in b.pairs() {
                for _ in 0..e {
                    q = q.partial(v).expect("derivative variables exclude s");
                    if q.is_zero() {
                        break;
                    }
                }
                if q.is_zero() {
                    break;
                }
            }
            if q.is_zero() {
                continue;
            }
            out = out.add(&q.mul(&MultiPoly::monomial(a.clone(), c.clone())));
        }
        out
    }

    /// Exact action on a power element `Σ p_k f^(s-k)`.
    pub fn apply_power(&self, e: &PowerElem) -> Result<PowerElem, AlgebraError> {
        let mut out = PowerElem::zero(e.base().clone())?;
        for ((a, b), c) in &self.terms {
            let mut q = e.clone();
            for &(v, exp) in b.pairs() {
                for _ in 0..exp {
                    q = q.differentiate(v)?;
                    if q.is_zero() {
                        break;
                    }
                }
                if q.is_zero() {
                    break;
                }
            }
            if q.is_zero() {
                continue;
            }
            out = out.add(&q.mul_poly(&MultiPoly::monomial(a.clone(), c.clone())))?;
        }
        Ok(out)
    }

    /// Action on a formal exponential `exp(g)` with `∂_v g = twist(v)` and
    /// all twists constant in the differentiated variables: returns `P` with
    /// `op · exp(g) = P · exp(g)`.
    pub fn apply_to_exponential(&self, twist: &impl Fn(VarId) -> MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for ((a, b), c) in &self.terms {
            let mut g = MultiPoly::one();
            for &(v, e) in b.pairs() {
                let t = twist(v);
                for _ in 0..e {
                    g = g.partial(v).expect("derivative variables exclude s").add(&g.mul(&t));
                }
            }
            out = out.add(&g.mul(&MultiPoly::monomial(a.clone(), c.clone())));
        }
        out
    }
}

/// Enumerates exponent tuples `0 ≤ γ_v ≤ min(b1_v, a2_v)` together with
/// `Π_v C(b1_v, γ_v) · falling(a2_v, γ_v)`.
fn for_each_gamma(limits: &[(VarId, u32, u32)], mut f: impl FnMut(&[u32], &BigInt)) {
    let mut gamma = vec![0u32; limits.len()];
    loop {
        let mut factor = BigInt::one();
        for (idx, &g) in gamma.iter().enumerate() {
            let (_, e1, e2) = limits[idx];
            factor *= binomial(e1, g) * falling(e2, g);
        }
        f(&gamma, &factor);
        // Odometer increment.
        let mut pos = 0;
        loop {
            if pos == limits.len() {
                return;
            }
            let cap = limits[pos].1.min(limits[pos].2);
            if gamma[pos] < cap {
                gamma[pos] += 1;
                break;
            }
            gamma[pos] = 0;
            pos += 1;
        }
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for t in 0..k {
        num *= BigInt::from(n - t);
        den *= BigInt::from(t + 1);
    }
    num / den
}

fn falling(n: u32, k: u32) -> BigInt {
    let mut out = BigInt::one();
    for t in 0..k {
        out *= BigInt::from(n - t);
    }
    out
}

impl fmt::Display for WeylOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, ((a, b), c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            if !a.is_unit() {
                write!(f, "*{a}")?;
            }
            if !b.is_unit() {
                write!(f, "*D[{b}]")?;
            }
        }
        Ok(())
    }
}

/// Square matrix of operators with the column-determinant convention.
#[derive(Clone, Debug)]
pub struct OpMatrix {
    n: usize,
    entries: Vec<WeylOp>,
}

impl OpMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> WeylOp) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        OpMatrix { n, entries }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &WeylOp {
        &self.entries[i * self.n + j]
    }

    /// Column determinant: `Σ_σ sgn(σ) a_{σ(1),1} a_{σ(2),2} ··· a_{σ(n),n}`,
    /// factors multiplied left to right in column order.
    pub fn column_det(&self) -> WeylOp {
        let mut acc = WeylOp::zero();
        for_each_permutation(self.n, |perm, sign| {
            let mut prod = self.entry(perm[0], 0).clone();
            for c in 1..self.n {
                prod = prod.mul(self.entry(perm[c], c));
            }
            if sign < 0 {
                prod = prod.neg();
            }
            acc = acc.add(&prod);
        });
        acc
    }

    /// Row-order expansion `Σ_σ sgn(σ) a_{1,σ(1)} ··· a_{n,σ(n)}`; agrees with
    /// the column determinant when all entries commute.
    pub fn row_det(&self) -> WeylOp {
        let mut acc = WeylOp::zero();
        for_each_permutation(self.n, |perm, sign| {
            let mut prod = self.entry(0, perm[0]).clone();
            for r in 1..self.n {
                prod = prod.mul(self.entry(r, perm[r]));
            }
            if sign < 0 {
                prod = prod.neg();
            }
            acc = acc.add(&prod);
        });
        acc
    }
}

fn xvar(i: usize, j: usize) -> VarId {
    VarId::X { i: i as u8, j: j as u8 }
}

/// The left-invariant vector field `E'_{i,j} = Σ_a x_{a,i} ∂_{a,j}` on the
/// r×r matrix space (0-based indices).
pub fn e_prime(i: usize, j: usize, r: usize) -> WeylOp {
    let mut op = WeylOp::zero();
    for a in 0..r {
        let term = WeylOp::from_poly(&MultiPoly::var(xvar(a, i)))
            .mul(&WeylOp::partial(xvar(a, j)).expect("x variable"));
        op = op.add(&term);
    }
    op
}

/// `det(x_{i,j})` as a polynomial.
pub fn det_x(r: usize) -> MultiPoly {
    Mat::from_fn(r, r, |i, j| MultiPoly::var(xvar(i, j))).det()
}

/// `det(∂_{i,j})` as a normal-ordered operator (entries commute).
pub fn det_partials(r: usize) -> WeylOp {
    OpMatrix::from_fn(r, |i, j| WeylOp::partial(xvar(i, j)).expect("x variable")).column_det()
}

/// Left side of the Capelli identity: the column determinant of
/// `E'_{i,j} + (r-j)δ_{i,j}` (1-based j; `diag_delta` perturbs every diagonal
/// shift and serves as a negative control).
pub fn capelli_lhs(r: usize, diag_delta: i64, guards: &Guards) -> Result<WeylOp, GuardError> {
    if r == 0 || r > guards.max_capelli_r {
        return Err(GuardError(format!(
            "capelli guard: r={r} outside 1..={}",
            guards.max_capelli_r
        )));
    }
    let m = OpMatrix::from_fn(r, |i, j| {
        let op = e_prime(i, j, r);
        if i == j {
            let shift = (r - 1 - j) as i64 + diag_delta;
            op.add_scalar(&BigRational::from_integer(BigInt::from(shift)))
        } else {
            op
        }
    });
    Ok(m.column_det())
}

/// Capelli identity as an executable check: the normal form of the shifted
/// column determinant must equal `det(x) · det(∂)`.
pub fn capelli_check(r: usize, diag_delta: i64, guards: &Guards) -> Result<VerificationReport, GuardError> {
    let rb = ReportBuilder::new("capelli")
        .param("r", r)
        .param("diag_delta", diag_delta);
    let lhs = capelli_lhs(r, diag_delta, guards)?;
    let rhs = WeylOp::from_poly(&det_x(r)).mul(&det_partials(r));
    Ok(rb.exact(lhs == rhs))
}

/// `b(s) = s(s+1)···(s+r-1)` evaluated at `s + shift`, as a polynomial in the
/// formal symbol.
pub fn b_function(r: usize, shift: i64) -> MultiPoly {
    let s = MultiPoly::var(VarId::S);
    let mut out = MultiPoly::one();
    for k in 0..r {
        out = out.mul(&s.add(&MultiPoly::from_int(shift + k as i64)));
    }
    out
}

/// `b` evaluated at a complex argument: `Π_{k<r} (s0 + k)`.
pub fn b_eval(r: usize, s0: Complex64) -> Complex64 {
    (0..r).fold(Complex64::new(1.0, 0.0), |acc, k| acc * (s0 + k as f64))
}

/// Cayley's formula as an executable check:
/// `det(∂) f^s = b(s) f^(s-1)` for `f = det(x)`. `b_offset` perturbs the
/// b-function additively (negative control).
pub fn cayley_check(r: usize, b_offset: i64, guards: &Guards) -> Result<VerificationReport, GuardError> {
    if r == 0 || r > guards.max_capelli_r {
        return Err(GuardError(format!(
            "cayley guard: r={r} outside 1..={}",
            guards.max_capelli_r
        )));
    }
    let rb = ReportBuilder::new("cayley").param("r", r).param("b_offset", b_offset);
    let f = det_x(r);
    let fs = PowerElem::power_of(f.clone()).map_err(|e| GuardError(e.to_string()))?;
    let lhs = det_partials(r).apply_power(&fs).map_err(|e| GuardError(e.to_string()))?;
    let b = b_function(r, 0).add(&MultiPoly::from_int(b_offset));
    let rhs = PowerElem::new(f, [(1u32, b)].into_iter().collect())
        .map_err(|e| GuardError(e.to_string()))?;
    let ok = lhs.equals(&rhs).map_err(|e| GuardError(e.to_string()))?;
    Ok(rb.exact(ok))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> VarId {
        xvar(0, 0)
    }

    fn op_x() -> WeylOp {
        WeylOp::from_poly(&MultiPoly::var(x()))
    }

    fn op_d() -> WeylOp {
        WeylOp::partial(x()).unwrap()
    }

    #[test]
    fn canonical_commutation_relation() {
        // ∂x = x∂ + 1
        let dx = op_d().mul(&op_x());
        let expect = op_x().mul(&op_d()).add_scalar(&BigRational::one());
        assert_eq!(dx, expect);
        // x∂ is already normal ordered
        assert_eq!(op_x().mul(&op_d()).num_terms(), 1);
    }

    #[test]
    fn euler_operator_square() {
        // (x∂)(x∂) = x²∂² + x∂
        let e = op_x().mul(&op_d());
        let sq = e.mul(&e);
        let x2d2 = op_x().mul(&op_x()).mul(&op_d()).mul(&op_d());
        assert_eq!(sq, x2d2.add(&e));
    }

    #[test]
    fn product_action_is_composition() {
        // Check (x∂)(x∂) against application to monomials x^n, n ≤ 3.
        let e = op_x().mul(&op_d());
        let sq = e.mul(&e);
        for n in 0..=3u32 {
            let p = MultiPoly::var(x()).pow(n);
            let via_product = sq.apply_poly(&p);
            let via_composition = e.apply_poly(&e.apply_poly(&p));
            assert_eq!(via_product, via_composition, "n={n}");
        }
    }

    #[test]
    fn column_det_noncommuting_entries() {
        // det [[x, x], [∂, ∂]] in column order = x∂ - ∂x = -1
        let m = OpMatrix::from_fn(2, |i, _| if i == 0 { op_x() } else { op_d() });
        let d = m.column_det();
        assert_eq!(d, WeylOp::zero().add_scalar(&-BigRational::one()));
    }

    #[test]
    fn column_det_of_scalars_is_ordinary_det() {
        let vals = [[2i64, 3], [5, 7]];
        let m = OpMatrix::from_fn(2, |i, j| {
            WeylOp::from_poly(&MultiPoly::from_int(vals[i][j]))
        });
        assert_eq!(
            m.column_det(),
            WeylOp::from_poly(&MultiPoly::from_int(2 * 7 - 3 * 5))
        );
        assert_eq!(m.column_det(), m.row_det());
    }

    #[test]
    fn one_by_one_column_det_is_entry() {
        let m = OpMatrix::from_fn(1, |_, _| e_prime(0, 0, 1));
        assert_eq!(m.column_det(), e_prime(0, 0, 1));
    }

    #[test]
    fn capelli_r1_lhs() {
        let lhs = capelli_lhs(1, 0, &Guards::default()).unwrap();
        assert_eq!(lhs, op_x().mul(&op_d()));
    }

    #[test]
    fn capelli_r2_expansion() {
        // (E'_11 + 1) E'_22 - E'_21 E'_12, normal ordered (0-based: indices
        // shifted down by one, shift on first diagonal entry is r-1 = 1).
        let lhs = capelli_lhs(2, 0, &Guards::default()).unwrap();
        let manual = e_prime(0, 0, 2)
            .add_scalar(&BigRational::one())
            .mul(&e_prime(1, 1, 2))
            .sub(&e_prime(1, 0, 2).mul(&e_prime(0, 1, 2)));
        assert_eq!(lhs, manual);
    }

    #[test]
    fn capelli_identity_small_ranks() {
        for r in 1..=3 {
            let rep = capelli_check(r, 0, &Guards::default()).unwrap();
            assert!(rep.passed(), "capelli failed at r={r}");
        }
    }

    #[test]
    fn capelli_guard_rejects_large_rank() {
        assert!(capelli_check(5, 0, &Guards::default()).is_err());
    }

    #[test]
    fn capelli_negative_control() {
        let rep = capelli_check(2, 1, &Guards::default()).unwrap();
        assert!(!rep.passed());
    }

    #[test]
    fn euler_fields_on_determinant_power() {
        // E'_{i,j} f^s = 0 for i≠j and s f^s for i=j (r ≤ 3).
        for r in 1..=3usize {
            let fs = PowerElem::power_of(det_x(r)).unwrap();
            for i in 0..r {
                for j in 0..r {
                    let got = e_prime(i, j, r).apply_power(&fs).unwrap();
                    if i == j {
                        let expect = PowerElem::new(
                            det_x(r),
                            [(0u32, MultiPoly::var(VarId::S))].into_iter().collect(),
                        )
                        .unwrap();
                        assert!(got.equals(&expect).unwrap(), "diagonal r={r} i={i}");
                    } else {
                        assert!(got.is_zero(), "off-diagonal r={r} i={i} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn cayley_formula_small_ranks() {
        for r in 1..=3 {
            let rep = cayley_check(r, 0, &Guards::default()).unwrap();
            assert!(rep.passed(), "cayley failed at r={r}");
        }
    }

    #[test]
    fn cayley_negative_control() {
        let rep = cayley_check(2, 1, &Guards::default()).unwrap();
        assert!(!rep.passed());
    }

    #[test]
    fn b_function_values() {
        // r=3: s(s+1)(s+2) = s³+3s²+2s
        let s = MultiPoly::var(VarId::S);
        let expect = s.pow(3).add(&s.pow(2).scale(&BigRational::from_integer(BigInt::from(3))))
            .add(&s.scale(&BigRational::from_integer(BigInt::from(2))));
        assert_eq!(b_function(3, 0), expect);
        // r=1 with shift k: s+k
        assert_eq!(b_function(1, 5), s.add(&MultiPoly::from_int(5)));
        // numeric: r=2 at s=3 -> 12
        assert_eq!(b_eval(2, Complex64::new(3.0, 0.0)).re, 12.0);
    }

    #[test]
    fn exponential_twist_matches_cayley_structure() {
        // ∂_v exp(v*u) = u exp(v*u) at r=1
        let v = VarId::V { a: 0, b: 0 };
        let u = MultiPoly::var(VarId::U { i: 0, j: 0 });
        let op = WeylOp::partial(v).unwrap();
        let got = op.apply_to_exponential(&|w| {
            assert_eq!(w, v);
            u.clone()
        });
        assert_eq!(got, u);
    }
}
