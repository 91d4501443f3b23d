//! Subspaces of K^d represented by an explicit basis, plus the witness
//! search that picks a vector inside one subspace while avoiding up to three
//! others.

use crate::error::{Error, Result};
use crate::matrix::{EchelonBuilder, Matrix};
use crate::scalar::{FieldSpec, Scalar};

/// A linear subspace of K^d.  The basis matrix has one column per basis
/// vector; the zero subspace has zero columns.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
}

impl Subspace {
    /// Wrap an explicit basis; the columns must be independent.
    pub fn from_basis(basis: Matrix) -> Result<Self> {
        if basis.rank() != basis.cols() {
            return Err(Error::DependentColumns);
        }
        Ok(Subspace { ambient: basis.rows(), basis })
    }

    /// Span of an arbitrary family: keeps the first maximal independent
    /// subfamily as the basis.
    pub fn span(field: FieldSpec, ambient: usize, vectors: &[Vec<Scalar>]) -> Result<Self> {
        let mut eb = EchelonBuilder::new(ambient);
        let mut keep: Vec<Vec<Scalar>> = Vec::new();
        for v in vectors {
            if v.len() != ambient {
                return Err(Error::DimensionMismatch(v.len(), ambient));
            }
            if eb.insert(v) {
                keep.push(v.clone());
            }
        }
        Ok(Subspace { ambient, basis: Matrix::from_cols(field, ambient, &keep)? })
    }

    pub fn zero(field: FieldSpec, ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zeros(field, ambient, 0) }
    }

    pub fn full(field: FieldSpec, ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(field, ambient) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn field(&self) -> FieldSpec {
        self.basis.field()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_cols(&self) -> Vec<Vec<Scalar>> {
        self.basis.col_slice(0, self.basis.cols())
    }

    /// Span membership.
    pub fn contains(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let mut eb = EchelonBuilder::new(self.ambient);
        for col in self.basis_cols() {
            eb.insert(&col);
        }
        eb.contains(v)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis_cols().iter().all(|v| self.contains(v))
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(self.ambient, other.ambient));
        }
        if self.field() != other.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// Basis of `self + other`.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let mut cols = self.basis_cols();
        cols.extend(other.basis_cols());
        Subspace::span(self.field(), self.ambient, &cols)
    }

    /// Basis of `self ∩ other`, via the kernel of `[A | B]`: a kernel vector
    /// (x, y) satisfies `A x = -B y`, so `A x` runs over the intersection.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Subspace::zero(self.field(), self.ambient));
        }
        let stacked = self.basis.hstack(&other.basis)?;
        let kernel = stacked.kernel();
        let a_cols = self.basis.cols();
        let vectors: Vec<Vec<Scalar>> = kernel
            .iter()
            .map(|x| self.basis.mul_vec(&x[..a_cols]))
            .collect();
        // Independence of these images follows from the bases being
        // independent, so `span` keeps them all.
        let s = Subspace::span(self.field(), self.ambient, &vectors)?;
        debug_assert_eq!(s.dim(), vectors.len());
        Ok(s)
    }

    pub fn intersect_dim(&self, other: &Subspace) -> Result<usize> {
        self.check_compatible(other)?;
        let stacked = self.basis.hstack(&other.basis)?;
        Ok(self.dim() + other.dim() - stacked.rank())
    }
}

/// Pick a vector of `w` lying outside every subspace in `avoid`.
///
/// The search is incremental: maintain a vector `v` clear of the subspaces
/// processed so far.  When the next subspace `a` captures `v`, take a basis
/// vector `u` of `w` outside `a` and scan `v + c·u` over distinct nonzero
/// scalars `c`; every candidate leaves `a`, and each already-avoided
/// subspace can reject at most one value of `c`, so `k+1` candidates
/// suffice after `k` subspaces.  Fields too small for the scan fall back to
/// exhausting `w`, which is finite there.
///
/// Deterministic for fixed inputs.
pub fn avoid_subspaces(w: &Subspace, avoid: &[&Subspace]) -> Result<Vec<Scalar>> {
    let field = w.field();
    for a in avoid {
        if a.ambient_dim() != w.ambient_dim() {
            return Err(Error::DimensionMismatch(a.ambient_dim(), w.ambient_dim()));
        }
        if a.field() != field {
            return Err(Error::FieldMismatch);
        }
        if a.intersect_dim(w)? == w.dim() {
            return Err(Error::CoverageImpossible);
        }
    }
    if w.dim() == 0 {
        // Only the zero vector lives here; it avoids nothing, but the guard
        // above already rejected every nonempty avoid list.
        return Ok(vec![field.zero(); w.ambient_dim()]);
    }

    let basis = w.basis_cols();
    let mut v = basis[0].clone();
    let mut processed: Vec<&Subspace> = Vec::new();
    for a in avoid {
        if a.contains(&v) {
            let u = basis
                .iter()
                .find(|u| !a.contains(u))
                .expect("w not contained in a, checked above");
            if processed.is_empty() {
                v = u.clone();
            } else {
                let mut found = None;
                for idx in 0..=processed.len() as u64 {
                    let Some(c) = field.nth_nonzero(idx) else {
                        break;
                    };
                    let cand: Vec<Scalar> =
                        v.iter().zip(u).map(|(x, y)| x.add(&c.mul(y))).collect();
                    if !a.contains(&cand) && processed.iter().all(|b| !b.contains(&cand)) {
                        found = Some(cand);
                        break;
                    }
                }
                match found {
                    Some(cand) => v = cand,
                    None => return exhaustive_search(w, avoid),
                }
            }
        }
        processed.push(a);
    }
    Ok(v)
}

/// Enumerate all of `w` over a finite field, in coefficient order.
fn exhaustive_search(w: &Subspace, avoid: &[&Subspace]) -> Result<Vec<Scalar>> {
    let field = w.field();
    let Some(elements) = field.elements() else {
        return Err(Error::FieldTooSmall);
    };
    let k = w.dim();
    let basis = w.basis_cols();
    let mut coeffs = vec![0usize; k];
    loop {
        let mut v = vec![field.zero(); w.ambient_dim()];
        for (i, &c) in coeffs.iter().enumerate() {
            let s = &elements[c];
            for (vj, bj) in v.iter_mut().zip(&basis[i]) {
                *vj = vj.add(&s.mul(bj));
            }
        }
        if !v.iter().all(Scalar::is_zero) && avoid.iter().all(|a| !a.contains(&v)) {
            return Ok(v);
        }
        // Odometer step.
        let mut pos = 0;
        loop {
            if pos == k {
                return Err(Error::FieldTooSmall);
            }
            coeffs[pos] += 1;
            if coeffs[pos] < elements.len() {
                break;
            }
            coeffs[pos] = 0;
            pos += 1;
        }
    }
}
