//! The truncated matrix-polynomial algebra `Mat(r)[w]/(w^p)`, its exp/log,
//! the θ_k expansion, and the characters χ_p / χ_λ with parameter validation.
//!
//! The scalar ring is generic: the same code runs over exact rationals (θ
//! identities), symbolic polynomial entries (noncommutative θ checks),
//! complex doubles and jets (character evaluation). Characters need exp/log
//! and are therefore only available over [`Analytic`] scalars — enforced by
//! the trait bound, not at runtime.

use crate::matrix::Mat;
use crate::report::GuardError;
use crate::scalar::{Analytic, Field, Ring};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Nonincreasing positive parts `n_1 ≥ … ≥ n_ℓ ≥ 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self, GuardError> {
        if parts.is_empty() {
            return Err(GuardError("partition must have at least one part".into()));
        }
        if parts.iter().any(|&p| p == 0) {
            return Err(GuardError("partition parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(GuardError("partition parts must be nonincreasing".into()));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `n = Σ n_k`.
    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let strs: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", strs.join(","))
    }
}

/// Errors from Jordan-algebra operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JordanError {
    ShapeMismatch(String),
    SingularLeadingCoeff,
    NotUnipotent,
    NotNilpotent,
    IndexOutOfRange,
}

impl std::fmt::Display for JordanError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            JordanError::ShapeMismatch(s) => write!(f, "shape mismatch: {s}"),
            JordanError::SingularLeadingCoeff => write!(f, "leading coefficient is singular"),
            JordanError::NotUnipotent => write!(f, "leading coefficient must be the identity"),
            JordanError::NotNilpotent => write!(f, "constant coefficient must vanish"),
            JordanError::IndexOutOfRange => write!(f, "coefficient index out of range"),
        }
    }
}

impl std::error::Error for JordanError {}

/// Element `Σ_{0≤i<p} h_i w^i` of `Mat(r)[w]/(w^p)`; the Jordan group is its
/// group of units (`h_0` invertible).
#[derive(Clone, PartialEq, Debug)]
pub struct TruncMatPoly<R: Ring> {
    r: usize,
    p: usize,
    coeffs: Vec<Mat<R>>,
}

impl<R: Ring> TruncMatPoly<R> {
    pub fn new(r: usize, p: usize, coeffs: Vec<Mat<R>>) -> Result<Self, JordanError> {
        if p == 0 || coeffs.len() != p {
            return Err(JordanError::ShapeMismatch(format!(
                "expected {p} coefficients, got {}",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|m| m.rows() != r || m.cols() != r) {
            return Err(JordanError::ShapeMismatch(format!("coefficients must be {r}x{r}")));
        }
        Ok(TruncMatPoly { r, p, coeffs })
    }

    pub fn identity(r: usize, p: usize) -> Self {
        let mut coeffs = vec![Mat::zeros(r, r); p];
        coeffs[0] = Mat::identity(r);
        TruncMatPoly { r, p, coeffs }
    }

    pub fn zero(r: usize, p: usize) -> Self {
        TruncMatPoly { r, p, coeffs: vec![Mat::zeros(r, r); p] }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn coeff(&self, i: usize) -> &Mat<R> {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[Mat<R>] {
        &self.coeffs
    }

    fn check_shape(&self, other: &Self) -> Result<(), JordanError> {
        if self.r != other.r || self.p != other.p {
            return Err(JordanError::ShapeMismatch(format!(
                "({},{}) vs ({},{})",
                self.r, self.p, other.r, other.p
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, JordanError> {
        self.check_shape(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add(b))
            .collect();
        Ok(TruncMatPoly { r: self.r, p: self.p, coeffs })
    }

    /// Truncated convolution product; noncommutative.
    pub fn mul(&self, other: &Self) -> Result<Self, JordanError> {
        self.check_shape(other)?;
        let mut coeffs = vec![Mat::zeros(self.r, self.r); self.p];
        for i in 0..self.p {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..self.p - i {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&self.coeffs[i].matmul(&other.coeffs[j]));
            }
        }
        Ok(TruncMatPoly { r: self.r, p: self.p, coeffs })
    }

    pub fn scale(&self, c: &R) -> Self {
        TruncMatPoly {
            r: self.r,
            p: self.p,
            coeffs: self.coeffs.iter().map(|m| m.scale(c)).collect(),
        }
    }

    fn is_unipotent(&self) -> bool {
        self.coeffs[0] == Mat::identity(self.r)
    }

    /// Truncated `log` of a unipotent element. The `w^k` coefficient of the
    /// result is `θ_k`.
    pub fn log(&self) -> Result<Self, JordanError> {
        if !self.is_unipotent() {
            return Err(JordanError::NotUnipotent);
        }
        let mut n = self.clone();
        n.coeffs[0] = Mat::zeros(self.r, self.r);
        let mut acc = TruncMatPoly::zero(self.r, self.p);
        let mut pow = TruncMatPoly::identity(self.r, self.p);
        for k in 1..self.p {
            pow = pow.mul(&n)?;
            // (-1)^(k+1) / k
            let sign: i64 = if k % 2 == 1 { 1 } else { -1 };
            acc = acc.add(&pow.scale(&R::one().div_int(sign * k as i64)))?;
        }
        Ok(acc)
    }

    /// Truncated `exp` of a nilpotent element (`x_0 = 0`); inverse of `log`.
    pub fn exp(&self) -> Result<Self, JordanError> {
        if !self.coeffs[0].is_zero() {
            return Err(JordanError::NotNilpotent);
        }
        let mut acc = TruncMatPoly::identity(self.r, self.p);
        let mut pow = TruncMatPoly::identity(self.r, self.p);
        let mut factorial: i64 = 1;
        for k in 1..self.p {
            pow = pow.mul(self)?;
            factorial *= k as i64;
            acc = acc.add(&pow.scale(&R::one().div_int(factorial)))?;
        }
        Ok(acc)
    }

    /// `θ_k(h)`: the `w^k` coefficient of `log h` for unipotent `h`,
    /// `1 ≤ k < p`.
    pub fn theta(&self, k: usize) -> Result<Mat<R>, JordanError> {
        if k == 0 || k >= self.p {
            return Err(JordanError::IndexOutOfRange);
        }
        Ok(self.log()?.coeffs[k].clone())
    }
}

impl<R: Field> TruncMatPoly<R> {
    /// Two-sided inverse in the truncated algebra; requires `h_0` invertible.
    pub fn inverse(&self) -> Result<Self, JordanError> {
        let h0_inv = self.coeffs[0].inverse().ok_or(JordanError::SingularLeadingCoeff)?;
        let mut inv_coeffs = vec![Mat::zeros(self.r, self.r); self.p];
        inv_coeffs[0] = h0_inv.clone();
        for k in 1..self.p {
            // g_k = -h0^{-1} Σ_{i=1..k} h_i g_{k-i}
            let mut sum = Mat::zeros(self.r, self.r);
            for i in 1..=k {
                sum = sum.add(&self.coeffs[i].matmul(&inv_coeffs[k - i]));
            }
            inv_coeffs[k] = h0_inv.matmul(&sum).neg();
        }
        Ok(TruncMatPoly { r: self.r, p: self.p, coeffs: inv_coeffs })
    }

    /// Factor `h = h_0 · h̲` with `h̲` unipotent: returns `(h_0, h̲)`.
    pub fn unipotent_factor(&self) -> Result<(Mat<R>, Self), JordanError> {
        let h0 = self.coeffs[0].clone();
        let h0_inv = h0.inverse().ok_or(JordanError::SingularLeadingCoeff)?;
        let mut coeffs: Vec<Mat<R>> =
            self.coeffs.iter().map(|m| h0_inv.matmul(m)).collect();
        // The leading coefficient is the identity exactly; set it so rather
        // than keeping the roundoff of h0^{-1} h0 in floating-point rings.
        coeffs[0] = Mat::identity(self.r);
        Ok((h0, TruncMatPoly { r: self.r, p: self.p, coeffs }))
    }
}

fn trace<R: Ring>(m: &Mat<R>) -> R {
    let mut t = R::zero();
    for i in 0..m.rows() {
        t = t.add(m.get(i, i));
    }
    t
}

/// Character of the (universal cover of the) Jordan group `J_r(p)`:
/// `χ_p(h; α) = (det h_0)^{α_0} · exp(Σ_{1≤i<p} α_i Tr θ_i(h_0^{-1} h))`.
///
/// The complex power uses the principal branch of `log det h_0`; callers
/// comparing two such values must keep branch choices consistent.
pub fn char_block<R: Analytic>(
    h: &TruncMatPoly<R>,
    alpha: &[Complex64],
) -> Result<R, JordanError> {
    if alpha.len() != h.p() {
        return Err(JordanError::ShapeMismatch(format!(
            "alpha length {} != p = {}",
            alpha.len(),
            h.p()
        )));
    }
    let (h0, unipotent) = h.unipotent_factor()?;
    let det0 = h0.det();
    if det0.inv().is_none() {
        return Err(JordanError::SingularLeadingCoeff);
    }
    let mut value = det0.powc(alpha[0]);
    if h.p() > 1 {
        let log = unipotent.log()?;
        let mut arg = R::zero();
        for (i, &a) in alpha.iter().enumerate().skip(1) {
            arg = arg.add(&R::from_c64(a).mul(&trace(&log.coeffs[i])));
        }
        value = value.mul(&arg.exp());
    }
    Ok(value)
}

/// Per-block character parameters `α^{(k)} = (α_0^{(k)},…,α_{n_k-1}^{(k)})`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaParams {
    pub blocks: Vec<Vec<Complex64>>,
}

impl AlphaParams {
    pub fn new(blocks: Vec<Vec<Complex64>>) -> Self {
        AlphaParams { blocks }
    }

    pub fn shape_matches(&self, lambda: &Partition) -> bool {
        self.blocks.len() == lambda.len()
            && self
                .blocks
                .iter()
                .zip(lambda.parts())
                .all(|(b, &nk)| b.len() == nk)
    }

    /// Shift `α ↦ α + ε^{(i)} - ε^{(j)}` (0-based block indices):
    /// `α_0^{(i)} += 1`, `α_0^{(j)} -= 1`.
    pub fn root_shifted(&self, i: usize, j: usize) -> AlphaParams {
        let mut out = self.clone();
        out.blocks[i][0] += 1.0;
        out.blocks[j][0] -= 1.0;
        out
    }
}

/// `χ_λ(h; α) = Π_k χ_{n_k}(h^{(k)}; α^{(k)})`.
pub fn char_lambda<R: Analytic>(
    lambda: &Partition,
    blocks: &[TruncMatPoly<R>],
    alpha: &AlphaParams,
) -> Result<R, JordanError> {
    if blocks.len() != lambda.len() || !alpha.shape_matches(lambda) {
        return Err(JordanError::ShapeMismatch(
            "blocks/alpha shape does not match the partition".into(),
        ));
    }
    let mut value = R::one();
    for (k, block) in blocks.iter().enumerate() {
        if block.p() != lambda.parts()[k] {
            return Err(JordanError::ShapeMismatch(format!(
                "block {k} has p={} but partition part is {}",
                block.p(),
                lambda.parts()[k]
            )));
        }
        value = value.mul(&char_block(block, &alpha.blocks[k])?);
    }
    Ok(value)
}

/// One violated admissibility clause.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamViolation {
    /// "i": `α_0^{(j)} ∈ ℤ`; "ii": `α_{n_j-1}^{(j)} = 0` with `n_j ≥ 2`;
    /// "iii": `Σ_j α_0^{(j)} ≠ -m`.
    pub clause: String,
    pub detail: String,
}

/// Default tolerance for the "not an integer" distance test.
pub const INT_DISTANCE_TOL: f64 = 1e-9;

/// Validates the admissibility clauses for the character parameters:
/// (i) `α_0^{(j)} ∉ ℤ`, (ii) `α_{n_j-1}^{(j)} ≠ 0` when `n_j ≥ 2`,
/// (iii) `Σ_j α_0^{(j)} = -m`. Violations are data, not errors.
pub fn validate_params(
    lambda: &Partition,
    m: i64,
    alpha: &AlphaParams,
    int_tol: f64,
) -> Vec<ParamViolation> {
    let mut violations = Vec::new();
    if !alpha.shape_matches(lambda) {
        violations.push(ParamViolation {
            clause: "shape".into(),
            detail: "alpha shape does not match the partition".into(),
        });
        return violations;
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for (j, (block, &nj)) in alpha.blocks.iter().zip(lambda.parts()).enumerate() {
        let a0 = block[0];
        sum += a0;
        let dist_to_int = if a0.im.abs() > int_tol {
            f64::INFINITY
        } else {
            (a0.re - a0.re.round()).abs()
        };
        if dist_to_int <= int_tol {
            violations.push(ParamViolation {
                clause: "i".into(),
                detail: format!("alpha_0^({}) = {} is integral", j + 1, a0),
            });
        }
        if nj >= 2 {
            let top = block[nj - 1];
            if top.norm() == 0.0 {
                violations.push(ParamViolation {
                    clause: "ii".into(),
                    detail: format!("alpha_{}^({}) = 0", nj - 1, j + 1),
                });
            }
        }
    }
    if (sum - Complex64::new(-(m as f64), 0.0)).norm() > int_tol {
        violations.push(ParamViolation {
            clause: "iii".into(),
            detail: format!("sum of alpha_0 is {} but -m = {}", sum, -m),
        });
    }
    violations
}

// ---------------------------------------------------------------------------
// JSON encoding
// ---------------------------------------------------------------------------

/// JSON entry: `[re, im]` for floats, a decimal or `p/q` string in exact mode.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryJson {
    Complex([f64; 2]),
    Exact(String),
}

/// Wire form of [`TruncMatPoly`]:
/// `{ "r": int, "p": int, "coeffs": [ [entry, … row-major], … ] }`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TruncMatPolyJson {
    pub r: usize,
    pub p: usize,
    pub coeffs: Vec<Vec<EntryJson>>,
}

impl EntryJson {
    pub fn to_c64(&self) -> Result<Complex64, GuardError> {
        match self {
            EntryJson::Complex([re, im]) => Ok(Complex64::new(*re, *im)),
            EntryJson::Exact(s) => {
                let q = parse_rational(s)?;
                Ok(Complex64::new(crate::scalar::rational_to_f64(&q), 0.0))
            }
        }
    }

    pub fn to_rational(&self) -> Result<num_rational::BigRational, GuardError> {
        match self {
            EntryJson::Exact(s) => parse_rational(s),
            EntryJson::Complex(_) => {
                Err(GuardError("exact mode requires string-encoded rationals".into()))
            }
        }
    }
}

/// Accepts `p/q`, integers, and finite decimals like `-1.25`.
pub fn parse_rational(s: &str) -> Result<num_rational::BigRational, GuardError> {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use std::str::FromStr;
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|e| GuardError(format!("bad rational: {e}")))?;
        let d = BigInt::from_str(d.trim()).map_err(|e| GuardError(format!("bad rational: {e}")))?;
        if d == BigInt::from(0) {
            return Err(GuardError("zero denominator".into()));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let neg = int_part.trim_start().starts_with('-');
        let int_part = BigInt::from_str(int_part.trim())
            .map_err(|e| GuardError(format!("bad decimal: {e}")))?;
        let digits = frac_part.trim();
        let frac = BigInt::from_str(digits).map_err(|e| GuardError(format!("bad decimal: {e}")))?;
        let denom = BigInt::from(10).pow(digits.len() as u32);
        let frac_q = BigRational::new(if neg { -frac } else { frac }, denom);
        return Ok(BigRational::from_integer(int_part) + frac_q);
    }
    let n = BigInt::from_str(s).map_err(|e| GuardError(format!("bad integer: {e}")))?;
    Ok(num_rational::BigRational::from_integer(n))
}

impl TruncMatPolyJson {
    pub fn to_complex(&self) -> Result<TruncMatPoly<Complex64>, GuardError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|mat| {
                if mat.len() != self.r * self.r {
                    return Err(GuardError(format!(
                        "matrix needs {} row-major entries",
                        self.r * self.r
                    )));
                }
                let entries: Result<Vec<Complex64>, GuardError> =
                    mat.iter().map(|e| e.to_c64()).collect();
                let entries = entries?;
                Ok(Mat::from_fn(self.r, self.r, |i, j| entries[i * self.r + j]))
            })
            .collect::<Result<Vec<_>, _>>()?;
        TruncMatPoly::new(self.r, self.p, coeffs).map_err(|e| GuardError(e.to_string()))
    }

    pub fn from_complex(h: &TruncMatPoly<Complex64>) -> Self {
        TruncMatPolyJson {
            r: h.r(),
            p: h.p(),
            coeffs: h
                .coeffs()
                .iter()
                .map(|m| {
                    let mut row_major = Vec::with_capacity(h.r() * h.r());
                    for i in 0..h.r() {
                        for j in 0..h.r() {
                            let v = m.get(i, j);
                            row_major.push(EntryJson::Complex([v.re, v.im]));
                        }
                    }
                    row_major
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::{MultiPoly, VarId};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn scalar_tmp(p: usize, vals: &[i64]) -> TruncMatPoly<BigRational> {
        TruncMatPoly::new(
            1,
            p,
            vals.iter().map(|&v| Mat::from_rows(vec![vec![q(v)]])).collect(),
        )
        .unwrap()
    }

    #[test]
    fn truncation_kills_high_orders() {
        // (1 + h1 w)(1 - h1 w) = 1 at p=2
        let h1 = Mat::from_rows(vec![vec![q(2), q(1)], vec![q(0), q(3)]]);
        let a = TruncMatPoly::new(2, 2, vec![Mat::identity(2), h1.clone()]).unwrap();
        let b = TruncMatPoly::new(2, 2, vec![Mat::identity(2), h1.neg()]).unwrap();
        assert_eq!(a.mul(&b).unwrap(), TruncMatPoly::identity(2, 2));
    }

    #[test]
    fn identity_is_two_sided_unit() {
        let h = scalar_tmp(3, &[2, 5, -1]);
        let e = TruncMatPoly::identity(1, 3);
        assert_eq!(h.mul(&e).unwrap(), h);
        assert_eq!(e.mul(&h).unwrap(), h);
    }

    #[test]
    fn scalar_square() {
        // r=1, p=3: (1+w)² = 1+2w+w²
        let h = scalar_tmp(3, &[1, 1, 0]);
        assert_eq!(h.mul(&h).unwrap(), scalar_tmp(3, &[1, 2, 1]));
    }

    #[test]
    fn inverse_of_identity_and_geometric_series() {
        assert_eq!(
            TruncMatPoly::<BigRational>::identity(2, 3).inverse().unwrap(),
            TruncMatPoly::identity(2, 3)
        );
        // r=1, p=2: (1+w)^{-1} = 1-w
        let h = scalar_tmp(2, &[1, 1]);
        assert_eq!(h.inverse().unwrap(), scalar_tmp(2, &[1, -1]));
    }

    #[test]
    fn inverse_property_random_exact() {
        let h = TruncMatPoly::new(
            2,
            3,
            vec![
                Mat::from_rows(vec![vec![q(2), q(1)], vec![q(1), q(1)]]),
                Mat::from_rows(vec![vec![q(3), q(-2)], vec![q(0), q(5)]]),
                Mat::from_rows(vec![vec![q(1), q(4)], vec![q(-1), q(2)]]),
            ],
        )
        .unwrap();
        let inv = h.inverse().unwrap();
        assert_eq!(h.mul(&inv).unwrap(), TruncMatPoly::identity(2, 3));
        assert_eq!(inv.mul(&h).unwrap(), TruncMatPoly::identity(2, 3));
        let singular = TruncMatPoly::new(
            1,
            2,
            vec![Mat::from_rows(vec![vec![q(0)]]), Mat::from_rows(vec![vec![q(1)]])],
        )
        .unwrap();
        assert_eq!(singular.inverse(), Err(JordanError::SingularLeadingCoeff));
    }

    #[test]
    fn scalar_log_values() {
        // r=1, p=3, h1=2, h2=5: θ1=2, θ2=5-2²/2=3
        let h = scalar_tmp(3, &[1, 2, 5]);
        assert_eq!(h.theta(1).unwrap(), Mat::from_rows(vec![vec![q(2)]]));
        assert_eq!(h.theta(2).unwrap(), Mat::from_rows(vec![vec![q(3)]]));
        assert_eq!(h.theta(3), Err(JordanError::IndexOutOfRange));
        assert_eq!(scalar_tmp(2, &[2, 0]).log(), Err(JordanError::NotUnipotent));
    }

    #[test]
    fn scalar_exp_series() {
        // r=1, p=3: exp(2w) = 1+2w+2w²
        let x = scalar_tmp(3, &[0, 2, 0]);
        assert_eq!(x.exp().unwrap(), scalar_tmp(3, &[1, 2, 2]));
        assert_eq!(scalar_tmp(2, &[1, 0]).exp(), Err(JordanError::NotNilpotent));
    }

    #[test]
    fn exp_log_roundtrip_exact() {
        let x = TruncMatPoly::new(
            2,
            4,
            vec![
                Mat::zeros(2, 2),
                Mat::from_rows(vec![vec![q(1), q(2)], vec![q(-1), q(3)]]),
                Mat::from_rows(vec![vec![q(0), q(1)], vec![q(2), q(-2)]]),
                Mat::from_rows(vec![vec![q(5), q(0)], vec![q(1), q(1)]]),
            ],
        )
        .unwrap();
        assert_eq!(x.exp().unwrap().log().unwrap(), x);
        let h = TruncMatPoly::new(
            2,
            4,
            vec![
                Mat::identity(2),
                Mat::from_rows(vec![vec![q(2), q(-1)], vec![q(0), q(1)]]),
                Mat::from_rows(vec![vec![q(1), q(1)], vec![q(3), q(0)]]),
                Mat::from_rows(vec![vec![q(-2), q(2)], vec![q(1), q(4)]]),
            ],
        )
        .unwrap();
        assert_eq!(h.log().unwrap().exp().unwrap(), h);
    }

    fn sym(block: u8, i: usize, j: usize) -> MultiPoly {
        MultiPoly::var(VarId::Z { block, slot: 0, row: i as u8, col: j as u8 })
    }

    fn sym_mat(block: u8) -> Mat<MultiPoly> {
        Mat::from_fn(2, 2, |i, j| sym(block, i, j))
    }

    #[test]
    fn theta_matches_explicit_noncommutative_polynomials() {
        // Unipotent h with fully symbolic 2x2 coefficients h1..h4, p=5.
        let h1 = sym_mat(1);
        let h2 = sym_mat(2);
        let h3 = sym_mat(3);
        let h4 = sym_mat(4);
        let h = TruncMatPoly::new(
            2,
            5,
            vec![Mat::identity(2), h1.clone(), h2.clone(), h3.clone(), h4.clone()],
        )
        .unwrap();
        let half = |m: Mat<MultiPoly>| m.scale(&MultiPoly::one().div_int(2));
        let third = |m: Mat<MultiPoly>| m.scale(&MultiPoly::one().div_int(3));
        let quarter = |m: Mat<MultiPoly>| m.scale(&MultiPoly::one().div_int(4));

        assert_eq!(h.theta(1).unwrap(), h1);
        assert_eq!(h.theta(2).unwrap(), h2.sub(&half(h1.matmul(&h1))));
        let t3 = h3
            .sub(&half(h1.matmul(&h2).add(&h2.matmul(&h1))))
            .add(&third(h1.matmul(&h1).matmul(&h1)));
        assert_eq!(h.theta(3).unwrap(), t3);
        let h1h3 = h1.matmul(&h3);
        let h3h1 = h3.matmul(&h1);
        let h2sq = h2.matmul(&h2);
        let t4 = h4
            .sub(&half(h1h3.add(&h2sq).add(&h3h1)))
            .add(&third(
                h1.matmul(&h1).matmul(&h2)
                    .add(&h1.matmul(&h2).matmul(&h1))
                    .add(&h2.matmul(&h1).matmul(&h1)),
            ))
            .sub(&quarter(h1.matmul(&h1).matmul(&h1).matmul(&h1)));
        assert_eq!(h.theta(4).unwrap(), t4);
    }

    #[test]
    fn theta_weight_homogeneity() {
        // h_i -> c^i h_i rescales θ_k -> c^k θ_k.
        let c = q(3);
        let coeffs: Vec<Mat<BigRational>> = vec![
            Mat::identity(2),
            Mat::from_rows(vec![vec![q(1), q(2)], vec![q(3), q(-1)]]),
            Mat::from_rows(vec![vec![q(0), q(-2)], vec![q(1), q(5)]]),
            Mat::from_rows(vec![vec![q(2), q(1)], vec![q(-3), q(1)]]),
        ];
        let h = TruncMatPoly::new(2, 4, coeffs.clone()).unwrap();
        let mut scaled = vec![Mat::identity(2)];
        let mut ck = q(1);
        for m in coeffs.iter().skip(1) {
            ck = &ck * &c;
            scaled.push(m.scale(&ck));
        }
        let hs = TruncMatPoly::new(2, 4, scaled).unwrap();
        let mut ck = q(1);
        for k in 1..4 {
            ck = &ck * &c;
            assert_eq!(hs.theta(k).unwrap(), h.theta(k).unwrap().scale(&ck), "k={k}");
        }
    }

    fn cmat(r: usize, vals: &[(f64, f64)]) -> Mat<Complex64> {
        Mat::from_fn(r, r, |i, j| {
            let (re, im) = vals[i * r + j];
            Complex64::new(re, im)
        })
    }

    #[test]
    fn char_block_depth_one_is_det_power() {
        let h0 = cmat(2, &[(1.5, 0.2), (0.3, -0.1), (0.0, 0.4), (2.0, 0.0)]);
        let h = TruncMatPoly::new(2, 1, vec![h0.clone()]).unwrap();
        let a0 = Complex64::new(0.7, -0.4);
        let got = char_block(&h, &[a0]).unwrap();
        let expect = h0.det().powc(a0);
        assert!((got - expect).norm() < 1e-14);
    }

    #[test]
    fn char_block_of_identity_is_one() {
        let h = TruncMatPoly::<Complex64>::identity(2, 3);
        let alpha = [
            Complex64::new(0.3, 1.0),
            Complex64::new(-2.0, 0.5),
            Complex64::new(0.9, 0.0),
        ];
        let got = char_block(&h, &alpha).unwrap();
        assert!((got - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn char_multiplicative_on_commuting_scalars() {
        // r=1: χ(h·h') = χ(h)χ(h') for the scalar Jordan group.
        let mk = |v: &[(f64, f64)]| {
            TruncMatPoly::new(
                1,
                3,
                v.iter().map(|&(re, im)| cmat(1, &[(re, im)])).collect(),
            )
            .unwrap()
        };
        let h = mk(&[(1.2, 0.3), (0.5, -0.2), (0.1, 0.1)]);
        let hp = mk(&[(0.9, -0.4), (-0.3, 0.6), (0.7, 0.0)]);
        let alpha = [
            Complex64::new(0.4, -0.7),
            Complex64::new(1.3, 0.2),
            Complex64::new(-0.8, 0.5),
        ];
        let lhs = char_block(&h.mul(&hp).unwrap(), &alpha).unwrap();
        let rhs = char_block(&h, &alpha).unwrap() * char_block(&hp, &alpha).unwrap();
        // Branch-safe: both scalar dets have positive real part, so principal
        // logs compose without wrapping.
        assert!((lhs - rhs).norm() / rhs.norm() < 1e-12);
    }

    #[test]
    fn char_semidirect_factorization() {
        // χ(g·u) = (det g)^{α_0} χ(u) for block-scalar g and unipotent u.
        let g = cmat(2, &[(1.1, 0.4), (0.2, -0.3), (-0.1, 0.2), (0.9, 0.1)]);
        let u = TruncMatPoly::new(
            2,
            3,
            vec![
                Mat::identity(2),
                cmat(2, &[(0.3, 0.1), (-0.2, 0.4), (0.5, 0.0), (0.1, -0.6)]),
                cmat(2, &[(0.7, -0.1), (0.2, 0.2), (-0.4, 0.3), (0.0, 0.5)]),
            ],
        )
        .unwrap();
        let alpha = [
            Complex64::new(0.6, -0.2),
            Complex64::new(-1.1, 0.8),
            Complex64::new(0.4, 0.3),
        ];
        let g_tmp = TruncMatPoly::new(
            2,
            3,
            vec![g.clone(), Mat::zeros(2, 2), Mat::zeros(2, 2)],
        )
        .unwrap();
        let full = g_tmp.mul(&u).unwrap();
        let lhs = char_block(&full, &alpha).unwrap();
        let rhs = g.det().powc(alpha[0]) * char_block(&u, &alpha).unwrap();
        assert!((lhs - rhs).norm() / rhs.norm() < 1e-12);
    }

    #[test]
    fn char_lambda_two_one_formula() {
        // λ=(2,1): (det h0^1)^{α0^1} exp(α1^1 Tr((h0^1)^-1 h1^1)) (det h0^2)^{α0^2}
        let lambda = Partition::new(vec![2, 1]).unwrap();
        let h0 = cmat(2, &[(1.4, 0.2), (0.1, -0.5), (0.3, 0.3), (1.8, -0.1)]);
        let h1 = cmat(2, &[(0.5, 0.6), (-0.7, 0.1), (0.2, -0.2), (0.9, 0.4)]);
        let b2 = cmat(2, &[(2.0, 0.1), (0.0, 0.3), (-0.2, 0.0), (1.1, 0.7)]);
        let block1 = TruncMatPoly::new(2, 2, vec![h0.clone(), h1.clone()]).unwrap();
        let block2 = TruncMatPoly::new(2, 1, vec![b2.clone()]).unwrap();
        let alpha = AlphaParams::new(vec![
            vec![Complex64::new(0.6, -0.3), Complex64::new(-1.0, 0.0)],
            vec![Complex64::new(0.2, 0.9)],
        ]);
        let got = char_lambda(&lambda, &[block1, block2], &alpha).unwrap();
        let theta1 = h0.inverse().unwrap().matmul(&h1);
        let expect = h0.det().powc(alpha.blocks[0][0])
            * (alpha.blocks[0][1] * trace(&theta1)).exp()
            * b2.det().powc(alpha.blocks[1][0]);
        assert!((got - expect).norm() / expect.norm() < 1e-12);
    }

    #[test]
    fn char_lambda_all_identity_blocks() {
        let lambda = Partition::new(vec![2, 2]).unwrap();
        let blocks = vec![
            TruncMatPoly::<Complex64>::identity(2, 2),
            TruncMatPoly::<Complex64>::identity(2, 2),
        ];
        let alpha = AlphaParams::new(vec![
            vec![Complex64::new(0.5, 0.5), Complex64::new(2.0, -1.0)],
            vec![Complex64::new(-0.5, 0.1), Complex64::new(0.3, 0.0)],
        ]);
        let got = char_lambda(&lambda, &blocks, &alpha).unwrap();
        assert!((got - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn validation_clauses() {
        // λ=(1,1,1), m=2r with α=(-a-b, a-r, b-r): clause (iii) holds.
        let lambda = Partition::new(vec![1, 1, 1]).unwrap();
        let (a, b, r) = (3.5, 2.5, 2.0);
        let alpha = AlphaParams::new(vec![
            vec![Complex64::new(-a - b, 0.0)],
            vec![Complex64::new(a - r, 0.0)],
            vec![Complex64::new(b - r, 0.0)],
        ]);
        let v = validate_params(&lambda, 4, &alpha, INT_DISTANCE_TOL);
        assert!(v.iter().all(|viol| viol.clause != "iii"));

        // λ=(2,1) with α_1^{(1)} = 0 violates clause (ii).
        let lambda21 = Partition::new(vec![2, 1]).unwrap();
        let alpha21 = AlphaParams::new(vec![
            vec![Complex64::new(-5.5, 0.0), Complex64::new(0.0, 0.0)],
            vec![Complex64::new(1.5, 0.0)],
        ]);
        let v = validate_params(&lambda21, 4, &alpha21, INT_DISTANCE_TOL);
        assert!(v.iter().any(|viol| viol.clause == "ii"));

        // Sum off by one violates clause (iii).
        let alpha_bad = AlphaParams::new(vec![
            vec![Complex64::new(-a - b, 0.0)],
            vec![Complex64::new(a - r, 0.0)],
            vec![Complex64::new(b - r + 1.0, 0.0)],
        ]);
        let v = validate_params(&lambda, 4, &alpha_bad, INT_DISTANCE_TOL);
        assert!(v.iter().any(|viol| viol.clause == "iii"));
    }

    #[test]
    fn json_roundtrip() {
        let h = TruncMatPoly::new(
            2,
            2,
            vec![
                cmat(2, &[(1.0, 0.0), (0.5, -0.5), (0.0, 0.0), (2.0, 1.0)]),
                cmat(2, &[(0.1, 0.2), (0.3, 0.4), (0.5, 0.6), (0.7, 0.8)]),
            ],
        )
        .unwrap();
        let json = TruncMatPolyJson::from_complex(&h);
        let text = serde_json::to_string(&json).unwrap();
        let parsed: TruncMatPolyJson = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed.to_complex().unwrap(), h);
    }

    #[test]
    fn rational_string_forms() {
        assert_eq!(parse_rational("3/2").unwrap(), BigRational::new(BigInt::from(3), BigInt::from(2)));
        assert_eq!(parse_rational("-1.25").unwrap(), BigRational::new(BigInt::from(-5), BigInt::from(4)));
        assert_eq!(parse_rational("7").unwrap(), q(7));
        assert!(parse_rational("1/0").is_err());
    }
}
