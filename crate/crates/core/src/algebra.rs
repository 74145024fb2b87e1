//! Hypercomplex algebras given by a multiplication table of their
//! hyperimaginary units, and scalar arithmetic over them.
//!
//! An algebra of dimension `dim` has the basis `{1, i_1, ..., i_{dim-1}}`.
//! The table stores, for every ordered pair of hyperimaginary units, the
//! coefficient vector of their product. Products involving the real unit
//! are fixed (it is a two-sided identity) and are not stored.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{shape_err, Error, Result};

/// A real algebra defined by the products `i_i * i_j` of its hyperimaginary units.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraSpec {
    name: String,
    dim: usize,
    /// `(dim-1)^2` coefficient vectors of length `dim`, row `i` column `j`
    /// holding `i_{i+1} * i_{j+1}`.
    table: Vec<f64>,
}

impl AlgebraSpec {
    /// Builds an algebra from a nested table where `table[i][j]` is the
    /// coefficient vector of `i_{i+1} * i_{j+1}`.
    pub fn new(name: impl Into<String>, dim: usize, table: &[Vec<Vec<f64>>]) -> Result<Self> {
        if dim == 0 {
            return Err(shape_err!("algebra dimension must be at least 1"));
        }
        let units = dim - 1;
        if table.len() != units {
            return Err(shape_err!(
                "table has {} rows, expected {} for dimension {}",
                table.len(),
                units,
                dim
            ));
        }
        let mut flat = Vec::with_capacity(units * units * dim);
        for (i, row) in table.iter().enumerate() {
            if row.len() != units {
                return Err(shape_err!(
                    "table row {} has {} entries, expected {}",
                    i,
                    row.len(),
                    units
                ));
            }
            for (j, entry) in row.iter().enumerate() {
                if entry.len() != dim {
                    return Err(shape_err!(
                        "table entry ({}, {}) has length {}, expected {}",
                        i,
                        j,
                        entry.len(),
                        dim
                    ));
                }
                flat.extend_from_slice(entry);
            }
        }
        Self::from_flat(name, dim, flat)
    }

    /// Builds an algebra from a flat row-major `(dim-1) x (dim-1) x dim` table.
    pub fn from_flat(name: impl Into<String>, dim: usize, table: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(shape_err!("algebra dimension must be at least 1"));
        }
        let expected = (dim - 1) * (dim - 1) * dim;
        if table.len() != expected {
            return Err(shape_err!(
                "flat table has {} coefficients, expected {}",
                table.len(),
                expected
            ));
        }
        if table.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("multiplication table"));
        }
        Ok(Self {
            name: name.into(),
            dim,
            table,
        })
    }

    /// The real numbers: dimension one, no hyperimaginary units.
    pub fn reals() -> Self {
        Self {
            name: String::from("real"),
            dim: 1,
            table: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn flat_table(&self) -> &[f64] {
        &self.table
    }

    /// Coefficients of `i_i * i_j` for hyperimaginary units, `1 <= i, j < dim`.
    pub fn unit_product(&self, i: usize, j: usize) -> &[f64] {
        assert!(i >= 1 && i < self.dim && j >= 1 && j < self.dim, "not a hyperimaginary unit");
        let units = self.dim - 1;
        let start = ((i - 1) * units + (j - 1)) * self.dim;
        &self.table[start..start + self.dim]
    }

    /// The table in the nested layout accepted by [`AlgebraSpec::new`].
    pub fn nested_table(&self) -> Vec<Vec<Vec<f64>>> {
        let units = self.dim - 1;
        (1..=units)
            .map(|i| (1..=units).map(|j| self.unit_product(i, j).to_vec()).collect())
            .collect()
    }

    /// Algebras are interchangeable only when both name and table agree.
    pub fn same_as(&self, other: &AlgebraSpec) -> bool {
        self.dim == other.dim && self.name == other.name && self.table == other.table
    }

    /// Product of two coefficient vectors, accumulated into `out` (which is overwritten).
    ///
    /// Evaluates the distributive expansion term by term: the real-unit
    /// interactions `x_0 y_k + x_k y_0` plus `sum_{i,j} x_i y_j mu_ij` over the table.
    pub fn mul_coeffs(&self, x: &[f64], y: &[f64], out: &mut [f64]) {
        let n = self.dim;
        debug_assert!(x.len() == n && y.len() == n && out.len() == n);
        out[0] = x[0] * y[0];
        for k in 1..n {
            out[k] = x[0] * y[k] + x[k] * y[0];
        }
        let units = n - 1;
        for i in 1..n {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            for j in 1..n {
                let w = xi * y[j];
                let start = ((i - 1) * units + (j - 1)) * n;
                let mu = &self.table[start..start + n];
                for (o, m) in out.iter_mut().zip(mu) {
                    *o += w * m;
                }
            }
        }
    }
}

pub(crate) fn ensure_same(a: &Arc<AlgebraSpec>, b: &Arc<AlgebraSpec>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a.same_as(b) {
        Ok(())
    } else {
        Err(Error::AlgebraMismatch {
            left: a.name.clone(),
            right: b.name.clone(),
        })
    }
}

/// An element `x_0 + x_1 i_1 + ... + x_n i_n` of an algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct HNumber {
    algebra: Arc<AlgebraSpec>,
    coeffs: Vec<f64>,
}

impl HNumber {
    pub fn new(algebra: Arc<AlgebraSpec>, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != algebra.dim {
            return Err(shape_err!(
                "{} coefficients for algebra `{}` of dimension {}",
                coeffs.len(),
                algebra.name,
                algebra.dim
            ));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("hypercomplex number"));
        }
        Ok(Self { algebra, coeffs })
    }

    pub fn zero(algebra: Arc<AlgebraSpec>) -> Self {
        let coeffs = alloc::vec![0.0; algebra.dim];
        Self { algebra, coeffs }
    }

    /// The real number `alpha` embedded as `alpha + 0 i_1 + ... + 0 i_n`.
    pub fn from_real(algebra: Arc<AlgebraSpec>, alpha: f64) -> Self {
        let mut x = Self::zero(algebra);
        x.coeffs[0] = alpha;
        x
    }

    pub fn one(algebra: Arc<AlgebraSpec>) -> Self {
        Self::from_real(algebra, 1.0)
    }

    /// Basis element `k` (0 is the real unit).
    pub fn basis(algebra: Arc<AlgebraSpec>, k: usize) -> Self {
        assert!(k < algebra.dim, "basis index out of range");
        let mut x = Self::zero(algebra);
        x.coeffs[k] = 1.0;
        x
    }

    pub fn algebra(&self) -> &Arc<AlgebraSpec> {
        &self.algebra
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn add(&self, other: &HNumber) -> Result<HNumber> {
        ensure_same(&self.algebra, &other.algebra)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            algebra: self.algebra.clone(),
            coeffs,
        })
    }

    pub fn multiply(&self, other: &HNumber) -> Result<HNumber> {
        ensure_same(&self.algebra, &other.algebra)?;
        let mut coeffs = alloc::vec![0.0; self.algebra.dim];
        self.algebra.mul_coeffs(&self.coeffs, &other.coeffs, &mut coeffs);
        Ok(Self {
            algebra: self.algebra.clone(),
            coeffs,
        })
    }

    pub fn scale(&self, alpha: f64) -> HNumber {
        Self {
            algebra: self.algebra.clone(),
            coeffs: self.coeffs.iter().map(|c| alpha * c).collect(),
        }
    }

    /// Euclidean norm of the coefficient vector.
    pub fn abs(&self) -> f64 {
        libm::sqrt(self.coeffs.iter().map(|c| c * c).sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn quaternions() -> Arc<AlgebraSpec> {
        // i*i=-1, i*j=k, i*k=-j, j*i=-k, j*j=-1, j*k=i, k*i=j, k*j=-i, k*k=-1
        let table = vec![
            vec![vec![-1.0, 0.0, 0.0, 0.0], vec![0.0, 0.0, 0.0, 1.0], vec![0.0, 0.0, -1.0, 0.0]],
            vec![vec![0.0, 0.0, 0.0, -1.0], vec![-1.0, 0.0, 0.0, 0.0], vec![0.0, 1.0, 0.0, 0.0]],
            vec![vec![0.0, 0.0, 1.0, 0.0], vec![0.0, -1.0, 0.0, 0.0], vec![-1.0, 0.0, 0.0, 0.0]],
        ];
        Arc::new(AlgebraSpec::new("H", 4, &table).unwrap())
    }

    fn q(alg: &Arc<AlgebraSpec>, c: [f64; 4]) -> HNumber {
        HNumber::new(alg.clone(), c.to_vec()).unwrap()
    }

    #[test]
    fn builds_quaternions_and_reals() {
        let h = quaternions();
        assert_eq!(h.name(), "H");
        assert_eq!(h.dim(), 4);
        assert_eq!(h.unit_product(1, 2), &[0.0, 0.0, 0.0, 1.0]);
        let r = AlgebraSpec::new("real", 1, &[]).unwrap();
        assert_eq!(r, AlgebraSpec::reals());
    }

    #[test]
    fn rejects_malformed_tables() {
        let mut table = quaternions().nested_table();
        table[1][2] = vec![0.0, 1.0, 0.0];
        assert!(matches!(
            AlgebraSpec::new("bad", 4, &table),
            Err(Error::ShapeMismatch(_))
        ));
        table[1][2] = vec![0.0, f64::NAN, 0.0, 0.0];
        assert_eq!(
            AlgebraSpec::new("bad", 4, &table),
            Err(Error::NonFinite("multiplication table"))
        );
        assert!(matches!(
            AlgebraSpec::new("bad", 0, &[]),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(matches!(
            AlgebraSpec::new("bad", 3, &table),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn addition_is_componentwise() {
        let c = Arc::new(
            AlgebraSpec::new("complex", 2, &[vec![vec![-1.0, 0.0]]]).unwrap(),
        );
        let x = HNumber::new(c.clone(), vec![1.0, 2.0]).unwrap();
        let y = HNumber::new(c.clone(), vec![3.0, 4.0]).unwrap();
        assert_eq!(x.add(&y).unwrap().coeffs(), &[4.0, 6.0]);
        assert_eq!(x.add(&HNumber::zero(c)).unwrap(), x);

        let h = quaternions();
        let s = q(&h, [1.0, 1.0, 1.0, 1.0]).add(&q(&h, [1.0, -1.0, -1.0, -1.0])).unwrap();
        assert_eq!(s.coeffs(), &[2.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn quaternion_products() {
        let h = quaternions();
        let i = HNumber::basis(h.clone(), 1);
        let j = HNumber::basis(h.clone(), 2);
        assert_eq!(i.multiply(&j).unwrap().coeffs(), &[0.0, 0.0, 0.0, 1.0]);
        assert_eq!(j.multiply(&i).unwrap().coeffs(), &[0.0, 0.0, 0.0, -1.0]);
        // (1+i)(1+j) = 1 + j + i + ij = 1 + i + j + k
        let p = q(&h, [1.0, 1.0, 0.0, 0.0]).multiply(&q(&h, [1.0, 0.0, 1.0, 0.0])).unwrap();
        assert_eq!(p.coeffs(), &[1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn scaling_and_norm() {
        let h = quaternions();
        let x = q(&h, [1.0, 1.0, 1.0, 1.0]);
        assert_eq!(x.scale(2.0).coeffs(), &[2.0, 2.0, 2.0, 2.0]);
        assert_eq!(x.scale(0.0), HNumber::zero(h.clone()));
        assert_eq!(x.abs(), 2.0);
        assert_eq!(HNumber::zero(h).abs(), 0.0);
    }

    #[test]
    fn mixed_algebras_are_rejected() {
        let h = quaternions();
        let mut renamed = (*h).clone();
        renamed.name = String::from("other");
        let other = Arc::new(renamed);
        let x = HNumber::one(h);
        let y = HNumber::one(other);
        assert!(matches!(x.add(&y), Err(Error::AlgebraMismatch { .. })));
        assert!(matches!(x.multiply(&y), Err(Error::AlgebraMismatch { .. })));
    }

    #[test]
    fn structurally_equal_specs_are_compatible() {
        let a = quaternions();
        let b = quaternions();
        assert!(!Arc::ptr_eq(&a, &b));
        assert!(HNumber::one(a).multiply(&HNumber::one(b)).is_ok());
    }

    #[test]
    fn coefficient_count_is_validated() {
        let h = quaternions();
        assert!(matches!(
            HNumber::new(h.clone(), vec![1.0, 2.0]),
            Err(Error::ShapeMismatch(_))
        ));
        assert_eq!(
            HNumber::new(h, vec![1.0, f64::INFINITY, 0.0, 0.0]),
            Err(Error::NonFinite("hypercomplex number"))
        );
    }
}
