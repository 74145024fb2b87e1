//! Hypercomplex matrices and their real embeddings.
//!
//! `varphi` stacks coefficients into real columns; `phi_left`/`phi_right`
//! give the real matrices of left/right multiplication by a fixed element.
//! With these, hypercomplex matrix products and least-squares problems are
//! computed entirely with real linear algebra.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{ensure_same, AlgebraSpec, HNumber};
use crate::error::{shape_err, Error, Result};
use crate::linalg::{default_rcond, RealMatrix, Svd};

/// Row-major matrix of hypercomplex entries; each entry is `algebra.dim()` coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct HMatrix {
    algebra: Arc<AlgebraSpec>,
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl HMatrix {
    /// `data` holds `rows * cols * dim` coefficients, entry-major in row-major entry order.
    pub fn new(algebra: Arc<AlgebraSpec>, rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        let dim = algebra.dim();
        if data.len() != rows * cols * dim {
            return Err(shape_err!(
                "{} coefficients for a {}x{} matrix over a {}-dimensional algebra",
                data.len(),
                rows,
                cols,
                dim
            ));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("hypercomplex matrix"));
        }
        Ok(Self {
            algebra,
            rows,
            cols,
            data,
        })
    }

    pub(crate) fn from_raw(algebra: Arc<AlgebraSpec>, rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols * algebra.dim());
        Self {
            algebra,
            rows,
            cols,
            data,
        }
    }

    pub fn zeros(algebra: Arc<AlgebraSpec>, rows: usize, cols: usize) -> Self {
        let n = rows * cols * algebra.dim();
        Self::from_raw(algebra, rows, cols, vec![0.0; n])
    }

    /// Square matrix with real units on the diagonal.
    pub fn identity(algebra: Arc<AlgebraSpec>, n: usize) -> Self {
        let mut m = Self::zeros(algebra, n, n);
        for i in 0..n {
            m.entry_mut(i, i)[0] = 1.0;
        }
        m
    }

    pub fn from_entries(algebra: Arc<AlgebraSpec>, rows: usize, cols: usize, entries: &[HNumber]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(shape_err!("{} entries for a {}x{} matrix", entries.len(), rows, cols));
        }
        let mut data = Vec::with_capacity(rows * cols * algebra.dim());
        for e in entries {
            ensure_same(&algebra, e.algebra())?;
            data.extend_from_slice(e.coeffs());
        }
        Ok(Self::from_raw(algebra, rows, cols, data))
    }

    pub fn from_fn(
        algebra: Arc<AlgebraSpec>,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize, &mut [f64]),
    ) -> Self {
        let mut m = Self::zeros(algebra, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                f(i, j, m.entry_mut(i, j));
            }
        }
        m
    }

    pub fn algebra(&self) -> &Arc<AlgebraSpec> {
        &self.algebra
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.data
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> &[f64] {
        let d = self.algebra.dim();
        let start = (i * self.cols + j) * d;
        &self.data[start..start + d]
    }

    #[inline]
    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut [f64] {
        let d = self.algebra.dim();
        let start = (i * self.cols + j) * d;
        &mut self.data[start..start + d]
    }

    /// Coefficients of row `i`, `cols * dim` values.
    pub fn row_coeffs(&self, i: usize) -> &[f64] {
        let w = self.cols * self.algebra.dim();
        &self.data[i * w..(i + 1) * w]
    }

    pub fn get(&self, i: usize, j: usize) -> HNumber {
        HNumber::new(self.algebra.clone(), self.entry(i, j).to_vec())
            .expect("matrix entries are validated on construction")
    }

    pub fn transpose(&self) -> HMatrix {
        HMatrix::from_fn(self.algebra.clone(), self.cols, self.rows, |i, j, out| {
            out.copy_from_slice(self.entry(j, i))
        })
    }

    /// `[self | 1]`: appends a column of real units.
    pub fn append_unit_column(&self) -> HMatrix {
        let d = self.dim();
        let mut data = Vec::with_capacity(self.rows * (self.cols + 1) * d);
        for i in 0..self.rows {
            data.extend_from_slice(self.row_coeffs(i));
            data.push(1.0);
            data.extend(core::iter::repeat_n(0.0, d - 1));
        }
        HMatrix::from_raw(self.algebra.clone(), self.rows, self.cols + 1, data)
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(f64) -> f64) -> HMatrix {
        HMatrix::from_raw(
            self.algebra.clone(),
            self.rows,
            self.cols,
            self.data.iter().map(|&v| f(v)).collect(),
        )
    }

    pub fn sub(&self, other: &HMatrix) -> Result<HMatrix> {
        ensure_same(&self.algebra, &other.algebra)?;
        if self.shape() != other.shape() {
            return Err(shape_err!(
                "cannot subtract {}x{} and {}x{}",
                self.rows,
                self.cols,
                other.rows,
                other.cols
            ));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(HMatrix::from_raw(self.algebra.clone(), self.rows, self.cols, data))
    }

    /// Rows `range` as a new matrix.
    pub fn select_rows(&self, rows: core::ops::Range<usize>) -> HMatrix {
        let w = self.cols * self.dim();
        let data = self.data[rows.start * w..rows.end * w].to_vec();
        HMatrix::from_raw(self.algebra.clone(), rows.len(), self.cols, data)
    }

    pub fn max_abs_diff(&self, other: &HMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| libm::fabs(a - b))
            .fold(0.0, f64::max)
    }
}

/// Coefficient column `(x_0, ..., x_n)`.
pub fn varphi(x: &HNumber) -> Vec<f64> {
    x.coeffs().to_vec()
}

pub fn varphi_inv(algebra: Arc<AlgebraSpec>, v: &[f64]) -> Result<HNumber> {
    HNumber::new(algebra, v.to_vec())
}

fn phi_left_into(algebra: &AlgebraSpec, a: &[f64], out: &mut [f64], stride: usize) {
    // column j of the block is varphi(a * e_j)
    let n = algebra.dim();
    let mut e = vec![0.0; n];
    let mut prod = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        algebra.mul_coeffs(a, &e, &mut prod);
        e[j] = 0.0;
        for (k, p) in prod.iter().enumerate() {
            out[k * stride + j] = *p;
        }
    }
}

fn phi_right_into(algebra: &AlgebraSpec, a: &[f64], out: &mut [f64], stride: usize) {
    // column j of the block is varphi(e_j * a)
    let n = algebra.dim();
    let mut e = vec![0.0; n];
    let mut prod = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        algebra.mul_coeffs(&e, a, &mut prod);
        e[j] = 0.0;
        for (k, p) in prod.iter().enumerate() {
            out[k * stride + j] = *p;
        }
    }
}

/// Real matrix of `x -> a x`, so that `varphi(a x) = phi_left(a) varphi(x)`.
pub fn phi_left(a: &HNumber) -> RealMatrix {
    let n = a.algebra().dim();
    let mut out = vec![0.0; n * n];
    phi_left_into(a.algebra(), a.coeffs(), &mut out, n);
    RealMatrix::from_raw(n, n, out)
}

/// Real matrix of `x -> x a`, so that `varphi(x a) = phi_right(a) varphi(x)`.
pub fn phi_right(a: &HNumber) -> RealMatrix {
    let n = a.algebra().dim();
    let mut out = vec![0.0; n * n];
    phi_right_into(a.algebra(), a.coeffs(), &mut out, n);
    RealMatrix::from_raw(n, n, out)
}

/// Block matrix of size `dim*M x dim*L` whose `(i, l)` block is `phi_left(a_il)`.
pub fn phi_left_matrix(a: &HMatrix) -> RealMatrix {
    let d = a.dim();
    let (m, l) = a.shape();
    let stride = d * l;
    let mut out = vec![0.0; d * m * stride];
    for i in 0..m {
        for j in 0..l {
            let offset = i * d * stride + j * d;
            phi_left_into(&a.algebra, a.entry(i, j), &mut out[offset..], stride);
        }
    }
    RealMatrix::from_raw(d * m, stride, out)
}

/// Block matrix of size `dim*N x dim*L` whose `(j, l)` block is `phi_right(b_lj)`.
pub fn phi_right_matrix(b: &HMatrix) -> RealMatrix {
    let d = b.dim();
    let (l, n) = b.shape();
    let stride = d * l;
    let mut out = vec![0.0; d * n * stride];
    for j in 0..n {
        for ll in 0..l {
            let offset = j * d * stride + ll * d;
            phi_right_into(&b.algebra, b.entry(ll, j), &mut out[offset..], stride);
        }
    }
    RealMatrix::from_raw(d * n, stride, out)
}

/// Stacks `varphi(b_lj)` into a `dim*L x N` real matrix.
pub fn varphi_matrix(b: &HMatrix) -> RealMatrix {
    let d = b.dim();
    let (l, n) = b.shape();
    let mut out = RealMatrix::zeros(d * l, n);
    for ll in 0..l {
        for j in 0..n {
            for (k, c) in b.entry(ll, j).iter().enumerate() {
                out.set(ll * d + k, j, *c);
            }
        }
    }
    out
}

/// Inverse of [`varphi_matrix`]; the row count must be a multiple of `dim`.
pub fn varphi_matrix_inv(algebra: Arc<AlgebraSpec>, r: &RealMatrix) -> Result<HMatrix> {
    let d = algebra.dim();
    if r.rows() % d != 0 {
        return Err(shape_err!(
            "{} rows are not divisible by algebra dimension {}",
            r.rows(),
            d
        ));
    }
    let (rows, cols) = (r.rows() / d, r.cols());
    let m = HMatrix::from_fn(algebra, rows, cols, |i, j, out| {
        for (k, o) in out.iter_mut().enumerate() {
            *o = r.get(i * d + k, j);
        }
    });
    if !m.data.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("hypercomplex matrix"));
    }
    Ok(m)
}

fn check_product(a: &HMatrix, b: &HMatrix) -> Result<()> {
    ensure_same(&a.algebra, &b.algebra)?;
    if a.cols != b.rows {
        return Err(shape_err!(
            "cannot multiply {}x{} by {}x{}",
            a.rows,
            a.cols,
            b.rows,
            b.cols
        ));
    }
    Ok(())
}

/// `A B` as `varphi^{-1}(phi_left(A) varphi(B))`.
pub fn matmul_left(a: &HMatrix, b: &HMatrix) -> Result<HMatrix> {
    check_product(a, b)?;
    let c = phi_left_matrix(a).matmul(&varphi_matrix(b))?;
    varphi_matrix_inv(a.algebra.clone(), &c)
}

/// `A B` through right multiplication: `phi_right(B) varphi(A^T)` holds `varphi(c_ij)`
/// in block row `j`, column `i`.
pub fn matmul_right(a: &HMatrix, b: &HMatrix) -> Result<HMatrix> {
    check_product(a, b)?;
    let d = a.dim();
    let c = phi_right_matrix(b).matmul(&varphi_matrix(&a.transpose()))?;
    let m = HMatrix::from_fn(a.algebra.clone(), a.rows, b.cols, |i, j, out| {
        for (k, o) in out.iter_mut().enumerate() {
            *o = c.get(j * d + k, i);
        }
    });
    if !m.data.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("hypercomplex matrix"));
    }
    Ok(m)
}

/// Hypercomplex matrix product; builds the block embedding of whichever
/// factor has fewer entries (the left one on ties).
pub fn matmul(a: &HMatrix, b: &HMatrix) -> Result<HMatrix> {
    if a.rows * a.cols <= b.rows * b.cols {
        matmul_left(a, b)
    } else {
        matmul_right(a, b)
    }
}

/// `sqrt(sum |a_ij|^2)`.
pub fn frobenius(a: &HMatrix) -> f64 {
    libm::sqrt(a.data.iter().map(|v| v * v).sum())
}

/// Minimal Frobenius-norm minimiser of `||A X - B||_F`, using the default cutoff.
pub fn lstsq(a: &HMatrix, b: &HMatrix) -> Result<HMatrix> {
    let d = a.dim();
    lstsq_with_rcond(a, b, default_rcond(d * a.rows, d * a.cols))
}

/// `X = varphi^{-1}(phi_left(A)^+ varphi(B))`.
pub fn lstsq_with_rcond(a: &HMatrix, b: &HMatrix, rcond: f64) -> Result<HMatrix> {
    ensure_same(&a.algebra, &b.algebra)?;
    if a.rows != b.rows {
        return Err(shape_err!(
            "least squares needs matching rows, got {} and {}",
            a.rows,
            b.rows
        ));
    }
    let lhs = phi_left_matrix(a);
    let x = Svd::new(&lhs)?.solve(&varphi_matrix(b), rcond)?;
    varphi_matrix_inv(a.algebra.clone(), &x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{builtin, AlgebraName};

    fn quat() -> Arc<AlgebraSpec> {
        Arc::new(builtin(AlgebraName::Quaternion))
    }

    #[test]
    fn varphi_is_coefficient_column() {
        let h = quat();
        let x = HNumber::new(h.clone(), vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(varphi(&x), vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(varphi_inv(h, &varphi(&x)).unwrap(), x);
    }

    #[test]
    fn phi_left_of_i_in_quaternions() {
        let i = HNumber::basis(quat(), 1);
        let expected = RealMatrix::new(
            4,
            4,
            vec![
                0.0, -1.0, 0.0, 0.0, //
                1.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, -1.0, //
                0.0, 0.0, 1.0, 0.0,
            ],
        )
        .unwrap();
        assert_eq!(phi_left(&i), expected);
        assert_eq!(phi_left(&HNumber::one(quat())), RealMatrix::identity(4));
    }

    #[test]
    fn single_entry_block_matrices() {
        let h = quat();
        let a = HNumber::new(h.clone(), vec![0.5, -1.0, 2.0, 3.0]).unwrap();
        let m = HMatrix::from_entries(h.clone(), 1, 1, &[a.clone()]).unwrap();
        assert_eq!(phi_left_matrix(&m), phi_left(&a));
        assert_eq!(phi_right_matrix(&m), phi_right(&a));
        let v = varphi_matrix(&m);
        assert_eq!(v.shape(), (4, 1));
        assert_eq!(v.as_slice(), a.coeffs());
    }

    #[test]
    fn unit_matrices_embed_as_identity_tiles() {
        let h = quat();
        let ones = HMatrix::from_fn(h.clone(), 2, 3, |_, _, e| e[0] = 1.0);
        let p = phi_left_matrix(&ones);
        assert_eq!(p.shape(), (8, 12));
        for r in 0..8 {
            for c in 0..12 {
                let expected = if r % 4 == c % 4 { 1.0 } else { 0.0 };
                assert_eq!(p.get(r, c), expected);
            }
        }
        let v = varphi_matrix(&HMatrix::from_fn(h, 2, 2, |_, _, e| e[0] = 1.0));
        assert_eq!(v.shape(), (8, 2));
        for r in 0..8 {
            for c in 0..2 {
                assert_eq!(v.get(r, c), if r % 4 == 0 { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn varphi_matrix_inverse_checks_divisibility() {
        let r = RealMatrix::zeros(6, 2);
        assert!(matches!(varphi_matrix_inv(quat(), &r), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn unit_product_matrix() {
        let h = quat();
        let i = HMatrix::from_entries(h.clone(), 1, 1, &[HNumber::basis(h.clone(), 1)]).unwrap();
        let j = HMatrix::from_entries(h.clone(), 1, 1, &[HNumber::basis(h.clone(), 2)]).unwrap();
        let k = matmul(&i, &j).unwrap();
        assert_eq!(k.entry(0, 0), &[0.0, 0.0, 0.0, 1.0]);
        let k = matmul_right(&i, &j).unwrap();
        assert_eq!(k.entry(0, 0), &[0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn product_shape_errors() {
        let h = quat();
        let a = HMatrix::zeros(h.clone(), 2, 3);
        assert!(matches!(matmul(&a, &a), Err(Error::ShapeMismatch(_))));
        let r = HMatrix::zeros(Arc::new(crate::catalog::builtin(AlgebraName::Tessarine)), 3, 2);
        assert!(matches!(matmul(&a, &r), Err(Error::AlgebraMismatch { .. })));
        assert!(matches!(lstsq(&a, &HMatrix::zeros(h, 3, 1)), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn frobenius_examples() {
        let h = quat();
        assert_eq!(frobenius(&HMatrix::zeros(h.clone(), 3, 2)), 0.0);
        let m = HMatrix::new(h, 1, 1, vec![1.0; 4]).unwrap();
        assert_eq!(frobenius(&m), 2.0);
    }

    #[test]
    fn lstsq_with_identity_returns_rhs() {
        let h = quat();
        let b = HMatrix::from_fn(h.clone(), 3, 2, |i, j, e| {
            for (k, c) in e.iter_mut().enumerate() {
                *c = (i * 7 + j * 3 + k) as f64 * 0.25 - 1.0;
            }
        });
        let x = lstsq(&HMatrix::identity(h, 3), &b).unwrap();
        assert!(x.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn append_unit_column_adds_real_ones() {
        let h = quat();
        let m = HMatrix::new(h, 2, 1, (0..8).map(|v| v as f64).collect()).unwrap();
        let a = m.append_unit_column();
        assert_eq!(a.shape(), (2, 2));
        assert_eq!(a.entry(1, 0), &[4.0, 5.0, 6.0, 7.0]);
        assert_eq!(a.entry(1, 1), &[1.0, 0.0, 0.0, 0.0]);
    }
}
