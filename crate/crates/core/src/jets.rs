//! Multilinear jets: truncated Taylor values in up to four infinitesimal
//! directions with `ε_k² = 0`. The coefficient of the full product
//! `ε_1···ε_d` of a function evaluated on jet inputs is exactly the mixed
//! directional derivative of order `d`, which is what the contiguity
//! operators need.
//!
//! The truncation is multilinear (multidegree ≤ (1,…,1)) rather than total
//! degree: the operators are determinants of first-order derivatives in
//! distinct direction slots, so only multilinear terms ever contribute, and
//! the cost is bounded by `2^d`.

use crate::scalar::{Analytic, Field, Ring};
use num_complex::Complex64;
use num_rational::BigRational;

/// Capacity in directions; desk-scale checks never need more.
pub const MAX_DIRS: usize = 4;
const LEN: usize = 1 << MAX_DIRS;

/// Jet over an analytic scalar `C`. Coefficients are indexed by direction
/// bitmask: `coeffs[m]` multiplies `Π_{k∈m} ε_k`.
#[derive(Clone, PartialEq, Debug)]
pub struct Jet<C: Analytic> {
    coeffs: Box<[C; LEN]>,
}

impl<C: Analytic> Jet<C> {
    pub fn constant(c: C) -> Self {
        let mut coeffs: Box<[C; LEN]> = Box::new(std::array::from_fn(|_| C::zero()));
        coeffs[0] = c;
        Jet { coeffs }
    }

    /// Constant plus the given first-order components: `c + Σ_k lin[k]·ε_k`.
    pub fn with_linear(c: C, lin: &[C]) -> Self {
        assert!(lin.len() <= MAX_DIRS, "at most {MAX_DIRS} directions");
        let mut jet = Jet::constant(c);
        for (k, v) in lin.iter().enumerate() {
            jet.coeffs[1 << k] = v.clone();
        }
        jet
    }

    pub fn coeff(&self, mask: usize) -> &C {
        &self.coeffs[mask]
    }

    pub fn constant_term(&self) -> &C {
        &self.coeffs[0]
    }

    /// Nilpotent part `self - constant`.
    fn nilpotent(&self) -> Jet<C> {
        let mut out = self.clone();
        out.coeffs[0] = C::zero();
        out
    }

    fn map(&self, f: impl Fn(&C) -> C) -> Jet<C> {
        Jet { coeffs: Box::new(std::array::from_fn(|i| f(&self.coeffs[i]))) }
    }

    /// `Σ_k c_k · n^k` for nilpotent `n` (n^(MAX_DIRS+1) = 0), used by the
    /// series for exp/log/inverse.
    fn nilpotent_series(n: &Jet<C>, series: &[C]) -> Jet<C> {
        let mut acc = Jet::constant(series[0].clone());
        let mut pow = Jet::constant(C::one());
        for c in &series[1..] {
            pow = pow.mul(n);
            if pow.is_zero() {
                break;
            }
            acc = acc.add(&pow.map(|x| x.mul(c)));
        }
        acc
    }
}

impl<C: Analytic> Ring for Jet<C> {
    fn zero() -> Self {
        Jet::constant(C::zero())
    }
    fn one() -> Self {
        Jet::constant(C::one())
    }
    fn add(&self, rhs: &Self) -> Self {
        Jet { coeffs: Box::new(std::array::from_fn(|i| self.coeffs[i].add(&rhs.coeffs[i]))) }
    }
    fn sub(&self, rhs: &Self) -> Self {
        Jet { coeffs: Box::new(std::array::from_fn(|i| self.coeffs[i].sub(&rhs.coeffs[i]))) }
    }
    fn mul(&self, rhs: &Self) -> Self {
        let mut out: Box<[C; LEN]> = Box::new(std::array::from_fn(|_| C::zero()));
        for i in 0..LEN {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..LEN {
                // ε_k² = 0: only disjoint masks survive.
                if i & j != 0 || rhs.coeffs[j].is_zero() {
                    continue;
                }
                let t = self.coeffs[i].mul(&rhs.coeffs[j]);
                out[i | j] = out[i | j].add(&t);
            }
        }
        Jet { coeffs: out }
    }
    fn neg(&self) -> Self {
        self.map(|x| x.neg())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
    fn from_i64(n: i64) -> Self {
        Jet::constant(C::from_i64(n))
    }
    fn div_int(&self, n: i64) -> Self {
        self.map(|x| x.div_int(n))
    }
    fn from_rational(q: &BigRational) -> Self {
        Jet::constant(C::from_rational(q))
    }
}

impl<C: Analytic> Field for Jet<C> {
    fn inv(&self) -> Option<Self> {
        let c0_inv = self.constant_term().inv()?;
        // 1/(c + n) = c⁻¹ Σ_k (-n c⁻¹)^k, finite because n is nilpotent.
        let scaled = self.nilpotent().map(|x| x.mul(&c0_inv).neg());
        let ones = [C::one(), C::one(), C::one(), C::one(), C::one()];
        let series = Jet::nilpotent_series(&scaled, &ones);
        Some(series.map(|x| x.mul(&c0_inv)))
    }
    fn pivot_weight(&self) -> f64 {
        self.constant_term().pivot_weight()
    }
}

impl<C: Analytic> Analytic for Jet<C> {
    fn exp(&self) -> Self {
        let e0 = self.constant_term().exp();
        let n = self.nilpotent();
        // exp(c+n) = e^c (1 + n + n²/2 + n³/6 + n⁴/24)
        let series = [
            C::one(),
            C::one(),
            C::one().div_int(2),
            C::one().div_int(6),
            C::one().div_int(24),
        ];
        Jet::nilpotent_series(&n, &series).map(|x| x.mul(&e0))
    }

    fn ln(&self) -> Self {
        let c0 = self.constant_term().clone();
        let l0 = c0.ln();
        let c0_inv = c0.inv().expect("ln of jet with zero constant term");
        let u = self.nilpotent().map(|x| x.mul(&c0_inv));
        // ln(c+n) = ln c + u - u²/2 + u³/3 - u⁴/4
        let series = [
            C::zero(),
            C::one(),
            C::one().div_int(-2),
            C::one().div_int(3),
            C::one().div_int(-4),
        ];
        Jet::nilpotent_series(&u, &series).add(&Jet::constant(l0))
    }

    fn from_c64(c: Complex64) -> Self {
        Jet::constant(C::from_c64(c))
    }

    fn to_c64(&self) -> Complex64 {
        self.constant_term().to_c64()
    }
}

/// Mixed directional derivative `∂_{d_1} ··· ∂_{d_k} f` at `point`, where
/// `f` is any jet-capable scalar field: evaluates
/// `f(point + Σ_k ε_k · direction_k)` and extracts the coefficient of
/// `ε_1···ε_k`.
pub fn mixed_derivative<C: Analytic>(
    f: impl Fn(&[Jet<C>]) -> Jet<C>,
    point: &[Complex64],
    directions: &[&[Complex64]],
) -> C {
    let d = directions.len();
    assert!(d >= 1 && d <= MAX_DIRS, "need 1..={MAX_DIRS} directions");
    for dir in directions {
        assert_eq!(dir.len(), point.len(), "direction dimension mismatch");
    }
    let inputs: Vec<Jet<C>> = point
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let lin: Vec<C> = directions.iter().map(|dir| C::from_c64(dir[i])).collect();
            Jet::with_linear(C::from_c64(p), &lin)
        })
        .collect();
    let out = f(&inputs);
    out.coeff((1 << d) - 1).clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    type J = Jet<Complex64>;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn eps(k: usize) -> J {
        J::with_linear(
            Complex64::new(0.0, 0.0),
            &(0..=k)
                .map(|i| if i == k { c(1.0) } else { c(0.0) })
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn squares_of_infinitesimals_vanish() {
        let a = J::constant(c(3.0)).add(&eps(0));
        let b = J::constant(c(3.0)).sub(&eps(0));
        let p = a.mul(&b);
        assert_eq!(p.coeff(0), &c(9.0));
        assert!(p.coeff(1).is_zero());
        assert!(p.coeff(3).is_zero());
    }

    #[test]
    fn cross_terms_are_kept() {
        let p = J::one().add(&eps(0)).mul(&J::one().add(&eps(1)));
        assert_eq!(p.coeff(0), &c(1.0));
        assert_eq!(p.coeff(1), &c(1.0));
        assert_eq!(p.coeff(2), &c(1.0));
        assert_eq!(p.coeff(3), &c(1.0));
    }

    #[test]
    fn geometric_inverse() {
        let x = J::one().add(&eps(0));
        let inv = x.inv().unwrap();
        assert_eq!(inv.coeff(0), &c(1.0));
        assert_eq!(inv.coeff(1), &c(-1.0));
        assert!(x.mul(&inv).sub(&J::one()).is_zero());
        assert!(J::constant(c(0.0)).inv().is_none());
    }

    #[test]
    fn exp_of_infinitesimal() {
        let e = Analytic::exp(&eps(0));
        assert_eq!(e.coeff(0), &c(1.0));
        assert_eq!(e.coeff(1), &c(1.0));
    }

    #[test]
    fn log_second_order_taylor() {
        // log(1+ε₁+ε₂) = ε₁+ε₂-ε₁ε₂
        let x = J::one().add(&eps(0)).add(&eps(1));
        let l = Analytic::ln(&x);
        assert!((l.coeff(0)).norm() < 1e-15);
        assert!((l.coeff(1) - c(1.0)).norm() < 1e-15);
        assert!((l.coeff(2) - c(1.0)).norm() < 1e-15);
        assert!((l.coeff(3) - c(-1.0)).norm() < 1e-15);
    }

    #[test]
    fn power_with_fixed_exponent() {
        let alpha = Complex64::new(0.7, -0.3);
        let x = J::one().add(&eps(0));
        let p = x.powc(alpha);
        assert!((p.coeff(0) - c(1.0)).norm() < 1e-14);
        assert!((p.coeff(1) - alpha).norm() < 1e-14);
    }

    #[test]
    fn log_exp_roundtrip() {
        let a = eps(0).mul(&J::constant(c(0.3))).add(&eps(1).mul(&J::constant(c(-0.9))));
        let r = Analytic::ln(&Analytic::exp(&a));
        for m in 0..LEN {
            assert!((r.coeff(m) - a.coeff(m)).norm() < 1e-12, "mask {m}");
        }
    }

    #[test]
    fn mixed_derivative_bilinear() {
        // f(x) = x₁ x₂, axis directions -> 1
        let e1 = [c(1.0), c(0.0)];
        let e2 = [c(0.0), c(1.0)];
        let got: Complex64 = mixed_derivative(
            |x: &[J]| x[0].mul(&x[1]),
            &[c(2.0), c(5.0)],
            &[&e1, &e2],
        );
        assert!((got - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn mixed_derivative_exponential() {
        let e1 = [c(1.0)];
        let got: Complex64 =
            mixed_derivative(|x: &[J]| Analytic::exp(&x[0]), &[c(0.0)], &[&e1]);
        assert!((got - c(1.0)).norm() < 1e-15);
    }
}
