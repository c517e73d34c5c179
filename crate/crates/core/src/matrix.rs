//! Small dense matrices generic over a scalar ring. Sizes stay in the single
//! digits throughout (r ≤ 4, m ≤ 4, 2r × 3r normal forms), so Leibniz
//! determinants and Gauss-Jordan inverses are the right tools.

use crate::perm::for_each_permutation;
use crate::scalar::{Field, Ring};

#[derive(Clone, PartialEq, Debug)]
pub struct Mat<R: Ring> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Ring> Mat<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![R::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, R::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Mat<S> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &Mat<R>) -> Mat<R> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &Mat<R>) -> Mat<R> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn neg(&self) -> Mat<R> {
        self.map(|x| x.neg())
    }

    pub fn scale(&self, c: &R) -> Mat<R> {
        self.map(|x| x.mul(c))
    }

    pub fn matmul(&self, other: &Mat<R>) -> Mat<R> {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matmul");
        let mut out = Mat::<R>::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a.mul(other.get(k, j));
                    let cur = out.get(i, j).add(&t);
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat<R> {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Horizontal concatenation.
    pub fn hstack(parts: &[&Mat<R>]) -> Mat<R> {
        assert!(!parts.is_empty());
        let rows = parts[0].rows;
        assert!(parts.iter().all(|p| p.rows == rows));
        let cols: usize = parts.iter().map(|p| p.cols).sum();
        let mut out = Mat::zeros(rows, cols);
        let mut off = 0;
        for p in parts {
            for i in 0..rows {
                for j in 0..p.cols {
                    out.set(i, off + j, p.get(i, j).clone());
                }
            }
            off += p.cols;
        }
        out
    }

    /// Block-diagonal assembly.
    pub fn block_diag(parts: &[&Mat<R>]) -> Mat<R> {
        let rows: usize = parts.iter().map(|p| p.rows).sum();
        let cols: usize = parts.iter().map(|p| p.cols).sum();
        let mut out = Mat::zeros(rows, cols);
        let (mut ro, mut co) = (0, 0);
        for p in parts {
            for i in 0..p.rows {
                for j in 0..p.cols {
                    out.set(ro + i, co + j, p.get(i, j).clone());
                }
            }
            ro += p.rows;
            co += p.cols;
        }
        out
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat<R> {
        Mat::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn column(&self, j: usize) -> Vec<R> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Determinant by signed permutation expansion; works over any ring.
    pub fn det(&self) -> R {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return R::one();
        }
        let mut acc = R::zero();
        for_each_permutation(n, |perm, sign| {
            let mut prod = R::one();
            for (c, &r) in perm.iter().enumerate() {
                prod = prod.mul(self.get(r, c));
            }
            if sign < 0 {
                prod = prod.neg();
            }
            acc = acc.add(&prod);
        });
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }
}

impl<R: Field> Mat<R> {
    /// Gauss-Jordan inverse with pivoting by `pivot_weight`.
    /// `None` when no invertible pivot can be found in some column.
    pub fn inverse(&self) -> Option<Mat<R>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Mat::<R>::identity(n);
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&i, &j| {
                    a.get(i, col)
                        .pivot_weight()
                        .partial_cmp(&a.get(j, col).pivot_weight())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap();
            let piv_inv = a.get(pivot_row, col).inv()?;
            if pivot_row != col {
                for j in 0..n {
                    let tmp = a.get(col, j).clone();
                    a.set(col, j, a.get(pivot_row, j).clone());
                    a.set(pivot_row, j, tmp);
                    let tmp = inv.get(col, j).clone();
                    inv.set(col, j, inv.get(pivot_row, j).clone());
                    inv.set(pivot_row, j, tmp);
                }
            }
            for j in 0..n {
                a.set(col, j, a.get(col, j).mul(&piv_inv));
                inv.set(col, j, inv.get(col, j).mul(&piv_inv));
            }
            for i in 0..n {
                if i == col || a.get(i, col).is_zero() {
                    continue;
                }
                let factor = a.get(i, col).clone();
                for j in 0..n {
                    let v = a.get(i, j).sub(&factor.mul(a.get(col, j)));
                    a.set(i, j, v);
                    let v = inv.get(i, j).sub(&factor.mul(inv.get(col, j)));
                    inv.set(i, j, v);
                }
            }
        }
        Some(inv)
    }
}
