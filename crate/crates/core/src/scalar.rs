//! Scalar ring abstraction shared by the symbolic and numeric code paths.
//!
//! The same matrix / truncated-polynomial / character code runs over exact
//! rationals, complex doubles, double-double complex and jets. The split into
//! [`Ring`] / [`Field`] / [`Analytic`] keeps capabilities explicit: exact
//! rationals never see `exp`/`ln`, so a character evaluation over rationals is
//! a compile error rather than a runtime one.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Commutative coefficient ring. Every ring used here admits exact division
/// by nonzero integers (needed by the truncated `exp`/`log` series).
pub trait Ring: Clone + PartialEq + std::fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(n: i64) -> Self;
    /// Division by a nonzero integer, exact in every ring used here.
    fn div_int(&self, n: i64) -> Self;
    /// Embed an exact rational. Lossy only for floating-point rings.
    fn from_rational(q: &BigRational) -> Self;
}

pub trait Field: Ring {
    /// Multiplicative inverse; `None` when the element is not invertible.
    fn inv(&self) -> Option<Self>;
    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|i| self.mul(&i))
    }
    /// Magnitude proxy used for pivot selection in elimination.
    fn pivot_weight(&self) -> f64;
}

/// Fields supporting exp / principal-branch log / complex powers.
pub trait Analytic: Field {
    fn exp(&self) -> Self;
    /// Principal branch. For jets: principal branch at the constant term.
    fn ln(&self) -> Self;
    fn from_c64(c: Complex64) -> Self;
    /// Constant / approximate part as a complex double.
    fn to_c64(&self) -> Complex64;
    /// Complex power with fixed exponent, via the principal branch of `ln`.
    fn powc(&self, e: Complex64) -> Self {
        Self::from_c64(e).mul(&self.ln()).exp()
    }
}

impl Ring for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        BigRational::from_integer(BigInt::from(1))
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn div_int(&self, n: i64) -> Self {
        assert!(n != 0, "division by zero integer");
        self / BigRational::from_integer(BigInt::from(n))
    }
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
}

impl Field for BigRational {
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn pivot_weight(&self) -> f64 {
        // Exact arithmetic: any nonzero pivot is fine, but preferring larger
        // magnitude keeps intermediate numerators smaller in practice.
        self.abs().to_f64().unwrap_or(if Zero::is_zero(self) { 0.0 } else { 1.0 })
    }
}

impl Ring for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn div_int(&self, n: i64) -> Self {
        self / (n as f64)
    }
    fn from_rational(q: &BigRational) -> Self {
        Complex64::new(rational_to_f64(q), 0.0)
    }
}

impl Field for Complex64 {
    fn inv(&self) -> Option<Self> {
        if Ring::is_zero(self) {
            None
        } else {
            Some(Complex64::new(1.0, 0.0) / self)
        }
    }
    fn pivot_weight(&self) -> f64 {
        self.norm()
    }
}

impl Analytic for Complex64 {
    fn exp(&self) -> Self {
        Complex64::exp(*self)
    }
    fn ln(&self) -> Self {
        Complex64::ln(*self)
    }
    fn from_c64(c: Complex64) -> Self {
        c
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
}

/// Rational to nearest double, robust for large numerators/denominators.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_ring_ops() {
        let a = BigRational::new(BigInt::from(1), BigInt::from(2));
        let b = BigRational::new(BigInt::from(2), BigInt::from(3));
        assert_eq!(a.mul(&b), BigRational::new(BigInt::from(1), BigInt::from(3)));
        assert_eq!(a.div_int(2), BigRational::new(BigInt::from(1), BigInt::from(4)));
        assert!(Ring::is_zero(&a.sub(&a)));
    }

    #[test]
    fn complex_principal_branch() {
        let z = Complex64::new(-1.0, 0.0);
        let l = Analytic::ln(&z);
        assert!((l.im - std::f64::consts::PI).abs() < 1e-15);
        let w = z.powc(Complex64::new(2.0, 0.0));
        assert!((w - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }
}
