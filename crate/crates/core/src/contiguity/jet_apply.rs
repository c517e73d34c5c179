//! Shared jet-based evaluation of order-r operators
//! `det(L_{a,b})`, `L_{a,b} = Σ_c source_{c,a} ∂/∂Z_{c,b}`,
//! applied to a scalar field of the target matrix `Z`.

use crate::jets::{mixed_derivative, Jet};
use crate::matrix::Mat;
use crate::perm::for_each_permutation;
use crate::scalar::Analytic;
use num_complex::Complex64;

/// Applies the column determinant of the first-order operator matrix to `f`
/// at the point `z0` (row-major flattening of the target matrix). `source`
/// must have the same number of rows as the target; its column `a` is the
/// direction column of `L_{a,b}`. The operator order equals `source.cols()`.
pub fn apply_det_operator<C: Analytic>(
    f: &impl Fn(&[Jet<C>]) -> Jet<C>,
    z0: &Mat<Complex64>,
    source: &Mat<Complex64>,
) -> C {
    assert_eq!(z0.rows(), source.rows(), "source/target row mismatch");
    let r = source.cols();
    assert_eq!(z0.cols(), r, "operator order must match target columns");
    let rows = z0.rows();
    let point: Vec<Complex64> = (0..rows * r)
        .map(|idx| *z0.get(idx / r, idx % r))
        .collect();
    let mut acc = C::zero();
    for_each_permutation(r, |perm, sign| {
        // Slot k differentiates in the direction col_{perm[k]}(source)·e_k^T.
        let dirs: Vec<Vec<Complex64>> = (0..r)
            .map(|k| {
                let mut d = vec![Complex64::new(0.0, 0.0); rows * r];
                for c in 0..rows {
                    d[c * r + k] = *source.get(c, perm[k]);
                }
                d
            })
            .collect();
        let dir_refs: Vec<&[Complex64]> = dirs.iter().map(|d| d.as_slice()).collect();
        let term: C = mixed_derivative(f, &point, &dir_refs);
        acc = if sign > 0 { acc.add(&term) } else { acc.sub(&term) };
    });
    acc
}

/// Rebuilds the target matrix from jet inputs (row-major, `cols` columns).
pub fn jet_matrix<C: Analytic>(inputs: &[Jet<C>], rows: usize, cols: usize) -> Mat<Jet<C>> {
    assert_eq!(inputs.len(), rows * cols);
    Mat::from_fn(rows, cols, |i, j| inputs[i * cols + j].clone())
}

/// Embeds a constant complex matrix into the jet ring.
pub fn const_matrix<C: Analytic>(m: &Mat<Complex64>) -> Mat<Jet<C>> {
    m.map(|v| Jet::constant(C::from_c64(*v)))
}

/// Source matrix selecting plain partials on a row range: column `a` is the
/// unit vector at row `row0 + a`, so the operator is `det(∂)` over the rows
/// `row0..row0+r` of the target.
pub fn unit_source(total_rows: usize, row0: usize, r: usize) -> Mat<Complex64> {
    Mat::from_fn(total_rows, r, |c, a| {
        if c == row0 + a {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}
