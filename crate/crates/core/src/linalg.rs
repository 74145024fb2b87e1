//! Dense real matrices and an SVD-based Moore-Penrose pseudoinverse.
//!
//! The SVD is a Householder QR reduction followed by one-sided (Hestenes)
//! Jacobi rotations on the square triangular factor. Tall problems stay
//! cheap because the Jacobi sweeps only ever see `cols x cols` data.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{shape_err, Error, Result};

const MAX_SWEEPS: usize = 80;

/// Row-major dense real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(shape_err!(
                "{} values for a {}x{} matrix",
                data.len(),
                rows,
                cols
            ));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("real matrix"));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix without the finiteness check; used for intermediate products.
    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_raw(rows, cols, vec![0.0; rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::from_raw(rows, cols, data)
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m.data[i * n + i] = *v;
        }
        m
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

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn transpose(&self) -> RealMatrix {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out
    }

    pub fn matmul(&self, other: &RealMatrix) -> Result<RealMatrix> {
        if self.cols != other.rows {
            return Err(shape_err!(
                "cannot multiply {}x{} by {}x{}",
                self.rows,
                self.cols,
                other.rows,
                other.cols
            ));
        }
        let n = other.cols;
        let mut out = Self::zeros(self.rows, n);
        for i in 0..self.rows {
            let a_row = &self.data[i * self.cols..(i + 1) * self.cols];
            let c_row = &mut out.data[i * n..(i + 1) * n];
            for (k, &a) in a_row.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                let b_row = &other.data[k * n..(k + 1) * n];
                for (c, b) in c_row.iter_mut().zip(b_row) {
                    *c += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &RealMatrix) -> Result<RealMatrix> {
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
        Ok(Self::from_raw(self.rows, self.cols, data))
    }

    pub fn frobenius(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|v| v * v).sum())
    }

    pub fn max_abs_diff(&self, other: &RealMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| libm::fabs(a - b))
            .fold(0.0, f64::max)
    }
}

/// Default relative cutoff for small singular values: `max(rows, cols) * eps`.
pub fn default_rcond(rows: usize, cols: usize) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON
}

/// Thin singular value decomposition `A = U diag(s) V^T`.
///
/// For an `m x n` input, `u` is `m x r`, `v` is `n x r` with `r = min(m, n)`,
/// and `s` is sorted in non-increasing order.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: RealMatrix,
    pub s: Vec<f64>,
    pub v: RealMatrix,
}

impl Svd {
    pub fn new(a: &RealMatrix) -> Result<Svd> {
        if !a.is_finite() {
            return Err(Error::NonFinite("matrix passed to SVD"));
        }
        if a.rows >= a.cols {
            tall_svd(a)
        } else {
            let t = tall_svd(&a.transpose())?;
            Ok(Svd {
                u: t.v,
                s: t.s,
                v: t.u,
            })
        }
    }

    /// Number of singular values above `rcond * s_max`.
    pub fn rank(&self, rcond: f64) -> usize {
        let cutoff = rcond * self.s.first().copied().unwrap_or(0.0);
        self.s.iter().filter(|&&s| s > cutoff && s > 0.0).count()
    }

    fn inverted_values(&self, rcond: f64) -> Vec<f64> {
        let cutoff = rcond * self.s.first().copied().unwrap_or(0.0);
        self.s
            .iter()
            .map(|&s| if s > cutoff && s > 0.0 { 1.0 / s } else { 0.0 })
            .collect()
    }

    /// `V diag(1/s) U^T`, dropping singular values at or below `rcond * s_max`.
    pub fn pinv(&self, rcond: f64) -> RealMatrix {
        let inv = self.inverted_values(rcond);
        let (n, r) = self.v.shape();
        let m = self.u.rows;
        // (V diag(inv)) is n x r; scale columns then multiply by U^T.
        let mut vs = self.v.clone();
        for i in 0..n {
            for (x, w) in vs.row_mut(i).iter_mut().zip(&inv) {
                *x *= w;
            }
        }
        let mut out = RealMatrix::zeros(n, m);
        let ut = self.u.transpose(); // r x m
        for i in 0..n {
            let vrow = &vs.data[i * r..(i + 1) * r];
            let orow = &mut out.data[i * m..(i + 1) * m];
            for (k, &w) in vrow.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                for (o, u) in orow.iter_mut().zip(ut.row(k)) {
                    *o += w * u;
                }
            }
        }
        out
    }

    /// `pinv(A) * b` computed as `V (diag(1/s) (U^T b))` without forming the pseudoinverse.
    pub fn solve(&self, b: &RealMatrix, rcond: f64) -> Result<RealMatrix> {
        if b.rows != self.u.rows {
            return Err(shape_err!(
                "right-hand side has {} rows, system has {}",
                b.rows,
                self.u.rows
            ));
        }
        let inv = self.inverted_values(rcond);
        let mut utb = self.u.transpose().matmul(b)?;
        for (k, w) in inv.iter().enumerate() {
            for x in utb.row_mut(k) {
                *x *= w;
            }
        }
        self.v.matmul(&utb)
    }
}

/// Moore-Penrose pseudoinverse via SVD; singular values `<= rcond * s_max` count as zero.
pub fn pinv(a: &RealMatrix, rcond: f64) -> Result<RealMatrix> {
    Ok(Svd::new(a)?.pinv(rcond))
}

/// Minimal-norm least-squares solution of `A X = B`.
pub fn lstsq_real(a: &RealMatrix, b: &RealMatrix, rcond: f64) -> Result<RealMatrix> {
    if a.rows != b.rows {
        return Err(shape_err!(
            "least squares needs matching rows, got {} and {}",
            a.rows,
            b.rows
        ));
    }
    Svd::new(a)?.solve(b, rcond)
}

struct Householder {
    /// Reflector vectors, `v_k` stored for rows `k..m`.
    vectors: Vec<Vec<f64>>,
    betas: Vec<f64>,
}

impl Householder {
    /// Reduces the `m x n` (m >= n) row-major `a` in place to upper-triangular form.
    fn factor(a: &mut RealMatrix) -> Householder {
        let (m, n) = a.shape();
        let mut vectors = Vec::with_capacity(n);
        let mut betas = Vec::with_capacity(n);
        let mut w = vec![0.0; n];
        for k in 0..n {
            let mut v: Vec<f64> = (k..m).map(|i| a.get(i, k)).collect();
            let norm = libm::sqrt(v.iter().map(|x| x * x).sum());
            if norm == 0.0 {
                vectors.push(v);
                betas.push(0.0);
                continue;
            }
            let alpha = if v[0] >= 0.0 { -norm } else { norm };
            v[0] -= alpha;
            let vnorm2: f64 = v.iter().map(|x| x * x).sum();
            let beta = if vnorm2 == 0.0 { 0.0 } else { 2.0 / vnorm2 };
            if beta != 0.0 {
                apply_reflector(a, k, k, &v, beta, &mut w[k..]);
            }
            vectors.push(v);
            betas.push(beta);
        }
        Householder { vectors, betas }
    }

    /// Overwrites `y` (m x c) with `Q y`.
    fn apply_q(&self, y: &mut RealMatrix) {
        let c = y.cols;
        let mut w = vec![0.0; c];
        for k in (0..self.vectors.len()).rev() {
            if self.betas[k] != 0.0 {
                apply_reflector(y, k, 0, &self.vectors[k], self.betas[k], &mut w);
            }
        }
    }
}

/// Applies `I - beta v v^T` to rows `row0..` and columns `col0..` of `a`.
fn apply_reflector(a: &mut RealMatrix, row0: usize, col0: usize, v: &[f64], beta: f64, w: &mut [f64]) {
    let cols = a.cols;
    w.iter_mut().for_each(|x| *x = 0.0);
    for (off, &vi) in v.iter().enumerate() {
        let i = row0 + off;
        let row = &a.data[i * cols + col0..(i + 1) * cols];
        for (wj, r) in w.iter_mut().zip(row) {
            *wj += vi * r;
        }
    }
    for (off, &vi) in v.iter().enumerate() {
        let f = beta * vi;
        if f == 0.0 {
            continue;
        }
        let i = row0 + off;
        let row = &mut a.data[i * cols + col0..(i + 1) * cols];
        for (r, wj) in row.iter_mut().zip(w.iter()) {
            *r -= f * wj;
        }
    }
}

fn tall_svd(a: &RealMatrix) -> Result<Svd> {
    let (m, n) = a.shape();
    if n == 0 {
        return Ok(Svd {
            u: RealMatrix::zeros(m, 0),
            s: Vec::new(),
            v: RealMatrix::zeros(0, 0),
        });
    }
    let mut r = a.clone();
    let qr = Householder::factor(&mut r);

    // Column-major working copies: cols[j*n..(j+1)*n] is column j of R.
    let mut work = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            work[j * n + i] = r.get(i, j);
        }
    }
    let mut v = vec![0.0; n * n];
    for j in 0..n {
        v[j * n + j] = 1.0;
    }
    jacobi_sweeps(&mut work, &mut v, n)?;

    let mut order: Vec<(usize, f64)> = (0..n)
        .map(|j| {
            let col = &work[j * n..(j + 1) * n];
            (j, libm::sqrt(col.iter().map(|x| x * x).sum()))
        })
        .collect();
    order.sort_by(|x, y| y.1.partial_cmp(&x.1).unwrap_or(core::cmp::Ordering::Equal));

    let mut u = RealMatrix::zeros(m, n);
    let mut vm = RealMatrix::zeros(n, n);
    let mut s = Vec::with_capacity(n);
    for (dst, &(src, sigma)) in order.iter().enumerate() {
        s.push(sigma);
        let col = &work[src * n..(src + 1) * n];
        if sigma > 0.0 {
            for i in 0..n {
                u.data[i * n + dst] = col[i] / sigma;
            }
        }
        for i in 0..n {
            vm.data[i * n + dst] = v[src * n + i];
        }
    }
    qr.apply_q(&mut u);
    Ok(Svd { u, s, v: vm })
}

/// Orthogonalises the columns of `w` by plane rotations, accumulating them in `v`.
fn jacobi_sweeps(w: &mut [f64], v: &mut [f64], n: usize) -> Result<()> {
    let tol = n as f64 * f64::EPSILON;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let (left, right) = w.split_at_mut(q * n);
                let wp = &mut left[p * n..(p + 1) * n];
                let wq = &mut right[..n];
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = 0.0;
                for (a, b) in wp.iter().zip(wq.iter()) {
                    alpha += a * a;
                    beta += b * b;
                    gamma += a * b;
                }
                if gamma == 0.0 || libm::fabs(gamma) <= tol * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = libm::copysign(1.0, zeta) / (libm::fabs(zeta) + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                rotate(wp, wq, c, s);
                let (vl, vr) = v.split_at_mut(q * n);
                rotate(&mut vl[p * n..(p + 1) * n], &mut vr[..n], c, s);
            }
        }
        if !rotated {
            return Ok(());
        }
    }
    Err(Error::ConvergenceFailure(MAX_SWEEPS))
}

#[inline]
fn rotate(xp: &mut [f64], xq: &mut [f64], c: f64, s: f64) {
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let (x, y) = (*a, *b);
        *a = c * x - s * y;
        *b = s * x + c * y;
    }
}
