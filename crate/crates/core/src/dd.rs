//! Double-double arithmetic: ~31 significant digits from unevaluated pairs of
//! doubles. Used as an optional scalar for jet evaluations in tolerance
//! studies. Elementary functions are seeded from the f64 value and refined by
//! one or two Newton steps, which squares the seed accuracy and is the
//! standard approach for this representation.

use crate::scalar::{rational_to_f64, Analytic, Field, Ring};
use num_complex::Complex64;
use num_rational::BigRational;

/// Real double-double value `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

const DD_LN2: Dd = Dd { hi: 0.6931471805599453, lo: 2.3190468138462996e-17 };
const DD_PI: Dd = Dd { hi: std::f64::consts::PI, lo: 1.2246467991473532e-16 };
const DD_PI_2: Dd = Dd { hi: std::f64::consts::FRAC_PI_2, lo: 6.123233995736766e-17 };

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, o.hi);
        let (t1, t2) = two_sum(self.lo, o.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, o.hi);
        let p2 = p2 + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Dd::from_f64(q1)));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul(Dd::from_f64(q2)));
        let q3 = r.hi / o.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd { hi: s, lo: e }.add(Dd::from_f64(q3))
    }

    pub fn scale(self, k: f64) -> Dd {
        // Exact for powers of two.
        Dd { hi: self.hi * k, lo: self.lo * k }
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        // One Newton step on y^2 = x from the f64 seed.
        let y = Dd::from_f64(self.hi.sqrt());
        y.add(self.div(y)).scale(0.5)
    }

    pub fn exp(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ONE;
        }
        let k = (self.hi / DD_LN2.hi).round();
        let r = self.sub(DD_LN2.mul(Dd::from_f64(k)));
        // |r| <= ln(2)/2; Taylor series converges below 1e-32 within 24 terms.
        let mut sum = Dd::ONE;
        let mut term = Dd::ONE;
        for n in 1..=26 {
            term = term.mul(r).div(Dd::from_f64(n as f64));
            sum = sum.add(term);
            if term.hi.abs() < 1e-35 * sum.hi.abs() {
                break;
            }
        }
        sum.scale((k as i32 as f64).exp2())
    }

    pub fn ln(self) -> Dd {
        assert!(self.hi > 0.0, "dd ln of non-positive value");
        let mut y = Dd::from_f64(self.hi.ln());
        for _ in 0..2 {
            // y += x * exp(-y) - 1
            y = y.add(self.mul(y.neg().exp())).sub(Dd::ONE);
        }
        y
    }

    fn sin_cos_taylor(r: Dd) -> (Dd, Dd) {
        let r2 = r.mul(r);
        let mut s = r;
        let mut term = r;
        let mut n = 1.0;
        for _ in 0..14 {
            term = term.mul(r2).div(Dd::from_f64(-(n + 1.0) * (n + 2.0)));
            s = s.add(term);
            n += 2.0;
            if term.hi.abs() < 1e-35 {
                break;
            }
        }
        let mut c = Dd::ONE;
        term = Dd::ONE;
        n = 0.0;
        for _ in 0..14 {
            term = term.mul(r2).div(Dd::from_f64(-(n + 1.0) * (n + 2.0)));
            c = c.add(term);
            n += 2.0;
            if term.hi.abs() < 1e-35 {
                break;
            }
        }
        (s, c)
    }

    pub fn sin_cos(self) -> (Dd, Dd) {
        let q = (self.hi / DD_PI_2.hi).round();
        let r = self.sub(DD_PI_2.mul(Dd::from_f64(q)));
        let (s, c) = Dd::sin_cos_taylor(r);
        match (q as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, s.neg()),
            2 => (s.neg(), c.neg()),
            _ => (c.neg(), s),
        }
    }

    /// Principal-value `atan2`, range `(-pi, pi]`.
    pub fn atan2(y: Dd, x: Dd) -> Dd {
        if y.hi == 0.0 && y.lo == 0.0 {
            return if x.hi >= 0.0 { Dd::ZERO } else { DD_PI };
        }
        let mut z = Dd::from_f64(y.hi.atan2(x.hi));
        for _ in 0..2 {
            // Newton on f(z) = y cos z - x sin z; f'(z) = -(x cos z + y sin z).
            let (s, c) = z.sin_cos();
            let num = y.mul(c).sub(x.mul(s));
            let den = x.mul(c).add(y.mul(s));
            z = z.add(num.div(den));
        }
        z
    }
}

/// Complex double-double scalar.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DdComplex {
    pub re: Dd,
    pub im: Dd,
}

impl DdComplex {
    pub fn new(re: Dd, im: Dd) -> Self {
        DdComplex { re, im }
    }

    pub fn norm_sqr(&self) -> Dd {
        self.re.mul(self.re).add(self.im.mul(self.im))
    }
}

impl Ring for DdComplex {
    fn zero() -> Self {
        DdComplex::new(Dd::ZERO, Dd::ZERO)
    }
    fn one() -> Self {
        DdComplex::new(Dd::ONE, Dd::ZERO)
    }
    fn add(&self, rhs: &Self) -> Self {
        DdComplex::new(self.re.add(rhs.re), self.im.add(rhs.im))
    }
    fn sub(&self, rhs: &Self) -> Self {
        DdComplex::new(self.re.sub(rhs.re), self.im.sub(rhs.im))
    }
    fn mul(&self, rhs: &Self) -> Self {
        DdComplex::new(
            self.re.mul(rhs.re).sub(self.im.mul(rhs.im)),
            self.re.mul(rhs.im).add(self.im.mul(rhs.re)),
        )
    }
    fn neg(&self) -> Self {
        DdComplex::new(self.re.neg(), self.im.neg())
    }
    fn is_zero(&self) -> bool {
        self.re == Dd::ZERO && self.im == Dd::ZERO
    }
    fn from_i64(n: i64) -> Self {
        DdComplex::new(Dd::from_f64(n as f64), Dd::ZERO)
    }
    fn div_int(&self, n: i64) -> Self {
        let d = Dd::from_f64(n as f64);
        DdComplex::new(self.re.div(d), self.im.div(d))
    }
    fn from_rational(q: &BigRational) -> Self {
        DdComplex::new(Dd::from_f64(rational_to_f64(q)), Dd::ZERO)
    }
}

impl Field for DdComplex {
    fn inv(&self) -> Option<Self> {
        if Ring::is_zero(self) {
            return None;
        }
        let n = self.norm_sqr();
        Some(DdComplex::new(self.re.div(n), self.im.neg().div(n)))
    }
    fn pivot_weight(&self) -> f64 {
        Complex64::new(self.re.hi, self.im.hi).norm()
    }
}

impl Analytic for DdComplex {
    fn exp(&self) -> Self {
        let m = self.re.exp();
        let (s, c) = self.im.sin_cos();
        DdComplex::new(m.mul(c), m.mul(s))
    }
    fn ln(&self) -> Self {
        DdComplex::new(self.norm_sqr().ln().scale(0.5), Dd::atan2(self.im, self.re))
    }
    fn from_c64(c: Complex64) -> Self {
        DdComplex::new(Dd::from_f64(c.re), Dd::from_f64(c.im))
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}
