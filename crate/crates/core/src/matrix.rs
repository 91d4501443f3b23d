//! Dense matrices over an exact field and the elimination kernel used by
//! every dimension computation in the crate.
//!
//! Pivoting is always "first nonzero in column order": the arithmetic is
//! exact, so there is no numerical reason to pivot by magnitude, and a fixed
//! rule makes every result reproducible bit for bit.

use crate::error::{Error, Result};
use crate::scalar::{FieldSpec, Scalar};

/// Row-major rectangular matrix with entries in a single field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn new(field: FieldSpec, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::BadShape { rows, cols, len: entries.len() });
        }
        if entries.iter().any(|e| !field.contains(e)) {
            return Err(Error::FieldMismatch);
        }
        Ok(Matrix { field, rows, cols, entries })
    }

    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        let entries = vec![field.zero(); rows * cols];
        Matrix { field, rows, cols, entries }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Build from column vectors, each of length `rows`.
    pub fn from_cols(field: FieldSpec, rows: usize, cols: &[Vec<Scalar>]) -> Result<Self> {
        let mut m = Matrix::zeros(field, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch(col.len(), rows));
            }
            for (i, v) in col.iter().enumerate() {
                if !field.contains(v) {
                    return Err(Error::FieldMismatch);
                }
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    /// Integer literal constructor, row by row.
    pub fn from_int_rows(field: FieldSpec, rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = Matrix::zeros(field, nrows, ncols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, field.integer(v));
            }
        }
        m
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn col_slice(&self, lo: usize, hi: usize) -> Vec<Vec<Scalar>> {
        (lo..hi).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(self.rows, other.rows));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let mut m = Matrix::zeros(self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(m)
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(self.cols, other.rows));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = self.field.zero();
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `self * x`.
    pub fn mul_vec(&self, x: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (j, xj) in x.iter().enumerate() {
                    acc = acc.add(&self.get(i, j).mul(xj));
                }
                acc
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        let mut eb = EchelonBuilder::new(self.rows);
        for j in 0..self.cols {
            eb.insert(&self.col(j));
        }
        eb.rank()
    }

    /// Reduced row echelon form together with the pivot column indices.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            for j in 0..m.cols {
                let a = m.get(row, j).clone();
                let b = m.get(pr, j).clone();
                m.set(row, j, b);
                m.set(pr, j, a);
            }
            let inv = m.get(row, col).inv();
            for j in col..m.cols {
                m.set(row, j, m.get(row, j).mul(&inv));
            }
            for r in 0..m.rows {
                if r != row && !m.get(r, col).is_zero() {
                    let factor = m.get(r, col).clone();
                    for j in col..m.cols {
                        let v = m.get(r, j).sub(&factor.mul(m.get(row, j)));
                        m.set(r, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    /// Basis of the null space `{x : self * x = 0}`, one vector per free
    /// column, in ascending column order.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut piv_iter = pivots.iter().copied().peekable();
        let mut free_cols = Vec::new();
        for j in 0..self.cols {
            if piv_iter.peek() == Some(&j) {
                piv_iter.next();
            } else {
                free_cols.push(j);
            }
        }
        for &f in &free_cols {
            let mut x = vec![self.field.zero(); self.cols];
            x[f] = self.field.one();
            for (row, &p) in pivots.iter().enumerate() {
                x[p] = r.get(row, f).neg();
            }
            basis.push(x);
        }
        basis
    }
}

/// Incremental echelon form over a fixed ambient dimension.  Vectors are
/// inserted one at a time; the builder tracks the rank and answers span
/// membership.  This is the workhorse behind all the dimension tables.
#[derive(Clone, Debug)]
pub struct EchelonBuilder {
    len: usize,
    // Rows normalized to leading coefficient 1, kept sorted by pivot index.
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl EchelonBuilder {
    pub fn new(len: usize) -> Self {
        EchelonBuilder { len, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the stored rows; the remainder is zero exactly
    /// when `v` lies in the current span.
    fn residual(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.len);
        let mut w = v.to_vec();
        for (pivot, row) in &self.rows {
            if !w[*pivot].is_zero() {
                let factor = w[*pivot].clone();
                for j in *pivot..self.len {
                    w[j] = w[j].sub(&factor.mul(&row[j]));
                }
            }
        }
        w
    }

    /// Insert `v`; returns true when the rank grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let w = self.residual(v);
        let Some(pivot) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[pivot].inv();
        let row: Vec<Scalar> = w.iter().map(|x| x.mul(&inv)).collect();
        let at = self.rows.partition_point(|(p, _)| *p < pivot);
        self.rows.insert(at, (pivot, row));
        true
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.residual(v).iter().all(Scalar::is_zero)
    }
}
