//! Contiguity operators and integrand-level verification of the contiguity
//! theorems: symbolic (exact) in the non-confluent case, numeric via jets in
//! the confluent case, plus the orbit normal-form reductions and the
//! operator-rewrite identities used in their derivations.

mod conf;
mod nonconf;
mod normal_form;
mod proof_ids;

pub use conf::{build_operator_conf, check_conf_integrand, ConfIntegrandConfig, ConfOperator};
pub use nonconf::{
    build_operator_nonconf, check_covariance_lemma, check_nonconf_integrand, NonconfMode,
};
pub use normal_form::{
    normal_form_3blocks, normal_form_x, u_factor, NormalForm, NormalFormVariant, UFactor,
};
pub use proof_ids::{check_proof_identity, ProofIdentityKind};

use crate::jordan::{EntryJson, Partition};
use crate::matrix::Mat;
use crate::report::GuardError;
use crate::scalar::{Field, Ring};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A root `ε^{(i)} - ε^{(j)}` of the block decomposition; `i ≠ j`.
/// Stored 0-based; the constructors say which convention they take.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RootShift {
    i: usize,
    j: usize,
}

impl RootShift {
    pub fn from_zero_based(i: usize, j: usize) -> Result<Self, GuardError> {
        if i == j {
            return Err(GuardError(
                "contiguity operators require distinct block indices (i = j is outside \
                 the theorem scope: the operators no longer commute)"
                    .into(),
            ));
        }
        Ok(RootShift { i, j })
    }

    pub fn from_one_based(i: usize, j: usize) -> Result<Self, GuardError> {
        if i == 0 || j == 0 {
            return Err(GuardError("block indices are 1-based".into()));
        }
        RootShift::from_zero_based(i - 1, j - 1)
    }

    /// Source block index, 0-based.
    pub fn i(&self) -> usize {
        self.i
    }

    /// Target (differentiated) block index, 0-based.
    pub fn j(&self) -> usize {
        self.j
    }
}

/// A point of the independent-variable space: blocks `z^{(j)}` made of slots
/// `z_k^{(j)} ∈ Mat(m, r)` following the partition.
#[derive(Clone, PartialEq, Debug)]
pub struct ZPoint<R: Ring> {
    pub lambda: Partition,
    pub r: usize,
    pub m: usize,
    pub blocks: Vec<Vec<Mat<R>>>,
}

impl<R: Ring> ZPoint<R> {
    pub fn new(
        lambda: Partition,
        r: usize,
        m: usize,
        blocks: Vec<Vec<Mat<R>>>,
    ) -> Result<Self, GuardError> {
        if blocks.len() != lambda.len() {
            return Err(GuardError(format!(
                "expected {} blocks, got {}",
                lambda.len(),
                blocks.len()
            )));
        }
        for (j, (block, &nj)) in blocks.iter().zip(lambda.parts()).enumerate() {
            if block.len() != nj {
                return Err(GuardError(format!(
                    "block {} must have {} slots, got {}",
                    j + 1,
                    nj,
                    block.len()
                )));
            }
            if block.iter().any(|s| s.rows() != m || s.cols() != r) {
                return Err(GuardError(format!("block {} slots must be {m}x{r}", j + 1)));
            }
        }
        Ok(ZPoint { lambda, r, m, blocks })
    }

    pub fn slot(&self, block: usize, k: usize) -> &Mat<R> {
        &self.blocks[block][k]
    }

    /// The full m×N matrix, slots concatenated in block order.
    pub fn as_matrix(&self) -> Mat<R> {
        let parts: Vec<&Mat<R>> = self.blocks.iter().flatten().collect();
        Mat::hstack(&parts)
    }

    /// The weight-2 subdiagram pairs whose 2r×2r determinants must not
    /// vanish (defined when m = 2r): `(z_0^{(i)}, z_0^{(j)})` for `i < j` and
    /// `(z_0^{(i)}, z_1^{(i)})` for `n_i ≥ 2`.
    pub fn subdiagram_pairs(&self) -> Vec<(Mat<R>, Mat<R>, String)> {
        let mut out = Vec::new();
        let ell = self.lambda.len();
        for i in 0..ell {
            if self.lambda.parts()[i] >= 2 {
                out.push((
                    self.blocks[i][0].clone(),
                    self.blocks[i][1].clone(),
                    format!("mu=2e_{}", i + 1),
                ));
            }
            for j in i + 1..ell {
                out.push((
                    self.blocks[i][0].clone(),
                    self.blocks[j][0].clone(),
                    format!("mu=e_{}+e_{}", i + 1, j + 1),
                ));
            }
        }
        out
    }
}

impl<R: Field> ZPoint<R> {
    /// Z_λ membership for the m = 2r orbit reductions: every weight-2
    /// subdiagram determinant must be invertible.
    pub fn check_z_lambda(&self) -> Result<(), GuardError> {
        if self.m != 2 * self.r {
            return Err(GuardError("Z_lambda condition is defined for m = 2r".into()));
        }
        for (a, b, label) in self.subdiagram_pairs() {
            let det = Mat::hstack(&[&a, &b]).det();
            if det.inv().is_none() {
                return Err(GuardError(format!("z is outside Z_lambda: det {label} = 0")));
            }
        }
        Ok(())
    }
}

/// Wire form of [`ZPoint`]:
/// `{ "lambda": [..], "r": .., "m": .., "blocks": [[matrix, ..], ..] }`
/// with matrices row-major, entries `[re, im]` or rational strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZPointJson {
    pub lambda: Vec<usize>,
    pub r: usize,
    pub m: usize,
    pub blocks: Vec<Vec<Vec<EntryJson>>>,
}

impl ZPointJson {
    fn parse_blocks<R: Ring>(
        &self,
        conv: impl Fn(&EntryJson) -> Result<R, GuardError>,
    ) -> Result<ZPoint<R>, GuardError> {
        let lambda = Partition::new(self.lambda.clone())?;
        let blocks = self
            .blocks
            .iter()
            .map(|slots| {
                slots
                    .iter()
                    .map(|mat| {
                        if mat.len() != self.m * self.r {
                            return Err(GuardError(format!(
                                "slot needs {} row-major entries",
                                self.m * self.r
                            )));
                        }
                        let entries: Result<Vec<R>, GuardError> = mat.iter().map(&conv).collect();
                        let entries = entries?;
                        Ok(Mat::from_fn(self.m, self.r, |i, j| {
                            entries[i * self.r + j].clone()
                        }))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        ZPoint::new(lambda, self.r, self.m, blocks)
    }

    pub fn to_complex(&self) -> Result<ZPoint<Complex64>, GuardError> {
        self.parse_blocks(|e| e.to_c64())
    }

    pub fn to_exact(&self) -> Result<ZPoint<num_rational::BigRational>, GuardError> {
        self.parse_blocks(|e| e.to_rational())
    }

    pub fn from_complex(z: &ZPoint<Complex64>) -> Self {
        ZPointJson {
            lambda: z.lambda.parts().to_vec(),
            r: z.r,
            m: z.m,
            blocks: z
                .blocks
                .iter()
                .map(|slots| {
                    slots
                        .iter()
                        .map(|mat| {
                            let mut v = Vec::with_capacity(z.m * z.r);
                            for i in 0..z.m {
                                for j in 0..z.r {
                                    let e = mat.get(i, j);
                                    v.push(EntryJson::Complex([e.re, e.im]));
                                }
                            }
                            v
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

/// Positions of the root-space basis `E^{(i,j)}_{a,b}` inside the N×N block
/// matrix: block row `i` sub-row 0, block column `j` sub-column `n_j - 1`,
/// all `(a, b) ∈ [r]²`. Indices 0-based.
pub fn root_basis(
    lambda: &Partition,
    r: usize,
    shift: RootShift,
) -> Result<Vec<(usize, usize)>, GuardError> {
    let ell = lambda.len();
    if shift.i() >= ell || shift.j() >= ell {
        return Err(GuardError(format!("block indices must be < {ell}")));
    }
    let offset = |b: usize| -> usize { lambda.parts()[..b].iter().sum::<usize>() * r };
    let row0 = offset(shift.i());
    let col0 = offset(shift.j()) + (lambda.parts()[shift.j()] - 1) * r;
    let mut out = Vec::with_capacity(r * r);
    for a in 0..r {
        for b in 0..r {
            out.push((row0 + a, col0 + b));
        }
    }
    Ok(out)
}
