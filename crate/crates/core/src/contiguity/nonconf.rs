//! Non-confluent contiguity: the operators `L^{(i,j)} = det(ᵗz^{(i)} ∂^{(j)})`
//! for the partition (1,…,1), the fully symbolic integrand identity
//! `L^{(i,j)} (det tz^{(j)})^s = b(s) (det tz^{(j)})^{s-1} det(tz^{(i)})`,
//! and the numeric covariance lemma that reduces the theorem to a pinned `t`.

use super::jet_apply::{apply_det_operator, const_matrix, jet_matrix};
use super::RootShift;
use crate::exact_algebra::{MultiPoly, PowerElem, VarId};
use crate::jets::Jet;
use crate::matrix::Mat;
use crate::report::{Guards, GuardError, ReportBuilder, VerificationReport};
use crate::sampling::{
    child_seed, complex_mat, draw_until, invertible_mat, rel_err, rng_from, MIN_DET_MODULUS,
};
use crate::scalar::{Analytic, Ring};
use crate::weyl::{b_eval, b_function, OpMatrix, WeylOp};
use num_complex::Complex64;

fn zvar(block: usize, slot: usize, row: usize, col: usize) -> VarId {
    VarId::Z {
        block: block as u8,
        slot: slot as u8,
        row: row as u8,
        col: col as u8,
    }
}

/// `L^{(i,j)}` as an r×r matrix of first-order operators
/// `L_{p,q} = Σ_{a<m} z^{(i)}_{a,p} ∂/∂z^{(j)}_{a,q}` over the slot-0
/// variables of blocks `i` and `j` (the whole-partition (1,…,1) layout).
pub fn build_operator_nonconf(shift: RootShift, r: usize, m: usize) -> OpMatrix {
    OpMatrix::from_fn(r, |p, q| {
        let mut op = WeylOp::zero();
        for a in 0..m {
            let coeff = WeylOp::from_poly(&MultiPoly::var(zvar(shift.i(), 0, a, p)));
            let deriv = WeylOp::partial(zvar(shift.j(), 0, a, q)).expect("z variable");
            op = op.add(&coeff.mul(&deriv));
        }
        op
    })
}

/// Whether the symbolic check uses a fully generic symbolic `t` or the
/// pinned representative `t = (1_r, 0)` (the fast mode for larger sizes).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NonconfMode {
    GenericT,
    UnitT,
}

impl std::fmt::Display for NonconfMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NonconfMode::GenericT => write!(f, "generic-t"),
            NonconfMode::UnitT => write!(f, "unit-t"),
        }
    }
}

/// The r×r symbolic matrix `t · z^{(block)}` (slot 0).
fn tz_symbolic(block: usize, r: usize, m: usize, mode: NonconfMode) -> Mat<MultiPoly> {
    Mat::from_fn(r, r, |p, q| match mode {
        NonconfMode::GenericT => {
            let mut acc = MultiPoly::zero();
            for a in 0..m {
                let t = MultiPoly::var(VarId::T { a: p as u8, b: a as u8 });
                acc = acc.add(&t.mul(&MultiPoly::var(zvar(block, 0, a, q))));
            }
            acc
        }
        NonconfMode::UnitT => MultiPoly::var(zvar(block, 0, p, q)),
    })
}

/// Fully symbolic check of the integrand identity behind the non-confluent
/// contiguity theorem. `b_offset` perturbs the b-function (negative control).
pub fn check_nonconf_integrand(
    r: usize,
    m: usize,
    shift: RootShift,
    mode: NonconfMode,
    b_offset: i64,
    guards: &Guards,
) -> Result<VerificationReport, GuardError> {
    if r == 0 || r > guards.max_nonconf_r {
        return Err(GuardError(format!(
            "nonconf guard: r={r} outside 1..={}",
            guards.max_nonconf_r
        )));
    }
    if m < r || m > guards.max_nonconf_m {
        return Err(GuardError(format!(
            "nonconf guard: m={m} outside {r}..={}",
            guards.max_nonconf_m
        )));
    }
    let rb = ReportBuilder::new("nonconf-integrand")
        .param("r", r)
        .param("m", m)
        .param("i", shift.i() + 1)
        .param("j", shift.j() + 1)
        .param("mode", mode)
        .param("b_offset", b_offset);

    let f = tz_symbolic(shift.j(), r, m, mode).det();
    let det_tzi = tz_symbolic(shift.i(), r, m, mode).det();
    let fs = PowerElem::power_of(f.clone()).map_err(|e| GuardError(e.to_string()))?;
    let op = build_operator_nonconf(shift, r, m).column_det();
    let lhs = op.apply_power(&fs).map_err(|e| GuardError(e.to_string()))?;
    let b = b_function(r, 0).add(&MultiPoly::from_int(b_offset));
    let rhs = PowerElem::new(f, [(1u32, b.mul(&det_tzi))].into_iter().collect())
        .map_err(|e| GuardError(e.to_string()))?;
    let ok = lhs.equals(&rhs).map_err(|e| GuardError(e.to_string()))?;
    Ok(rb.exact(ok))
}

/// `A(t, z) = L^{(i,j)} (det t z^{(j)})^s`, evaluated numerically at an
/// integer `s` through jets on the entries of `z^{(j)}` (the operator
/// coefficients come from `z^{(i)}`, untransformed).
fn eval_a(t: &Mat<Complex64>, z_i: &Mat<Complex64>, z_j: &Mat<Complex64>, s: i64) -> Complex64 {
    let r = t.rows();
    let f = |inputs: &[Jet<Complex64>]| -> Jet<Complex64> {
        let zj = jet_matrix(inputs, z_j.rows(), r);
        let tz = const_matrix::<Complex64>(t).matmul(&zj);
        tz.det().powc(Complex64::new(s as f64, 0.0))
    };
    apply_det_operator(&f, z_j, z_i)
}

/// `B(t, z) = b(s) (det t z^{(j)})^{s-1} det(t z^{(i)})` directly.
fn eval_b(t: &Mat<Complex64>, z_i: &Mat<Complex64>, z_j: &Mat<Complex64>, s: i64) -> Complex64 {
    let r = t.rows();
    let det_j = t.matmul(z_j).det();
    let det_i = t.matmul(z_i).det();
    b_eval(r, Complex64::new(s as f64, 0.0)) * det_j.powi(s as i32 - 1) * det_i
}

/// Numeric check of the reduction lemma: for `g ∈ GL(m)`,
/// `A(tg, z) = A(t, gz)` and `B(tg, z) = B(t, gz)`. The first trial uses
/// `g = 1` as a sanity anchor; the rest draw random `g`.
pub fn check_covariance_lemma(
    r: usize,
    m: usize,
    s: i64,
    trials: usize,
    seed: u64,
    tol: f64,
) -> VerificationReport {
    let rb = ReportBuilder::new("covariance-lemma")
        .param("r", r)
        .param("m", m)
        .param("s", s)
        .param("trials", trials)
        .param("tol", tol)
        .seed(seed);
    let mut rng = rng_from(child_seed(seed, "cont-key"));
    let mut max_err: f64 = 0.0;
    for trial in 0..trials {
        let drawn = draw_until(
            &mut rng,
            |rng| {
                let t = complex_mat(rng, r, m);
                let z_i = complex_mat(rng, m, r);
                let z_j = complex_mat(rng, m, r);
                let g = if trial == 0 {
                    Mat::identity(m)
                } else {
                    invertible_mat(rng, m)
                };
                (t, z_i, z_j, g)
            },
            |(t, _z_i, z_j, g)| {
                t.matmul(z_j).det().norm() >= MIN_DET_MODULUS
                    && t.matmul(g).matmul(z_j).det().norm() >= MIN_DET_MODULUS
            },
        );
        let Some((t, z_i, z_j, g)) = drawn else {
            return rb.failed("failed to draw a well-conditioned configuration");
        };
        let tg = t.matmul(&g);
        let gz_i = g.matmul(&z_i);
        let gz_j = g.matmul(&z_j);
        let a_err = rel_err(eval_a(&tg, &z_i, &z_j, s), eval_a(&t, &gz_i, &gz_j, s));
        let b_err = rel_err(eval_b(&tg, &z_i, &z_j, s), eval_b(&t, &gz_i, &gz_j, s));
        max_err = max_err.max(a_err).max(b_err);
    }
    rb.numeric(max_err, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Guards;

    fn shift(i: usize, j: usize) -> RootShift {
        RootShift::from_zero_based(i, j).unwrap()
    }

    #[test]
    fn operator_entries_commute_for_distinct_blocks() {
        // Column det equals row det at r=2 since the entries commute.
        let op = build_operator_nonconf(shift(0, 1), 2, 3);
        assert_eq!(op.column_det(), op.row_det());
    }

    #[test]
    fn rank_one_operator_is_single_contraction() {
        // r=1: the single entry Σ_a z^{(i)}_a ∂/∂z^{(j)}_a.
        let op = build_operator_nonconf(shift(0, 1), 1, 2);
        let mut expect = WeylOp::zero();
        for a in 0..2 {
            expect = expect.add(
                &WeylOp::from_poly(&MultiPoly::var(zvar(0, 0, a, 0)))
                    .mul(&WeylOp::partial(zvar(1, 0, a, 0)).unwrap()),
            );
        }
        assert_eq!(op.entry(0, 0), &expect);
    }

    #[test]
    fn single_entry_acts_as_column_replacement() {
        // L_{p,q} applied to det(tz^{(j)}) replaces column q of tz^{(j)} by
        // column p of tz^{(i)} (symbolic t, r=2, m=3).
        let (r, m) = (2, 3);
        let sh = shift(0, 1);
        let op = build_operator_nonconf(sh, r, m);
        let f = tz_symbolic(sh.j(), r, m, NonconfMode::GenericT).det();
        let tzi = tz_symbolic(sh.i(), r, m, NonconfMode::GenericT);
        let tzj = tz_symbolic(sh.j(), r, m, NonconfMode::GenericT);
        for p in 0..r {
            for q in 0..r {
                let got = op.entry(p, q).apply_poly(&f);
                let replaced = Mat::from_fn(r, r, |a, b| {
                    if b == q {
                        tzi.get(a, p).clone()
                    } else {
                        tzj.get(a, b).clone()
                    }
                });
                assert_eq!(got, replaced.det(), "p={p} q={q}");
            }
        }
    }

    #[test]
    fn integrand_identity_rank_one() {
        let rep = check_nonconf_integrand(
            1,
            2,
            shift(0, 1),
            NonconfMode::GenericT,
            0,
            &Guards::default(),
        )
        .unwrap();
        assert!(rep.passed());
    }

    #[test]
    fn integrand_identity_rank_two() {
        let rep = check_nonconf_integrand(
            2,
            3,
            shift(0, 1),
            NonconfMode::GenericT,
            0,
            &Guards::default(),
        )
        .unwrap();
        assert!(rep.passed());
    }

    #[test]
    fn integrand_negative_control() {
        let rep = check_nonconf_integrand(
            1,
            2,
            shift(0, 1),
            NonconfMode::GenericT,
            1,
            &Guards::default(),
        )
        .unwrap();
        assert!(!rep.passed());
    }

    #[test]
    fn unit_t_mode_matches() {
        let rep = check_nonconf_integrand(
            2,
            4,
            shift(1, 0),
            NonconfMode::UnitT,
            0,
            &Guards::default(),
        )
        .unwrap();
        assert!(rep.passed());
    }

    #[test]
    fn guard_rejects_oversized_requests() {
        assert!(check_nonconf_integrand(
            3,
            4,
            shift(0, 1),
            NonconfMode::GenericT,
            0,
            &Guards::default()
        )
        .is_err());
    }

    #[test]
    fn covariance_small() {
        let rep = check_covariance_lemma(1, 2, 3, 5, 11, 1e-9);
        assert!(rep.passed(), "max_rel_err={:?}", rep.max_rel_err);
        let rep = check_covariance_lemma(2, 3, 2, 5, 12, 1e-9);
        assert!(rep.passed(), "max_rel_err={:?}", rep.max_rel_err);
    }
}
