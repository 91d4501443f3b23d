//! Complete flags and tuples of flags: construction, sampling, the
//! transversality test, direct sums, and the grid of triple-intersection
//! dimensions.

use crate::error::{Error, Result};
use crate::matrix::{EchelonBuilder, Matrix};
use crate::rng::SplitMix64;
use crate::scalar::{FieldSpec, Scalar};
use crate::subspace::Subspace;

const SAMPLE_RETRY_LIMIT: usize = 1000;

/// A complete flag in K^d, stored as an ordered basis: layer `i` is the span
/// of the first `i` columns.
#[derive(Clone, Debug)]
pub struct Flag {
    basis: Matrix,
}

impl Flag {
    pub fn new(basis: Matrix) -> Result<Self> {
        let d = basis.rows();
        if basis.cols() != d {
            return Err(Error::DimensionMismatch(basis.cols(), d));
        }
        let rank = basis.rank();
        if rank != d {
            return Err(Error::SingularBasis { rank, dim: d });
        }
        Ok(Flag { basis })
    }

    /// The flag of coordinate subspaces: basis the identity matrix.
    pub fn standard(field: FieldSpec, d: usize) -> Self {
        Flag { basis: Matrix::identity(field, d) }
    }

    /// Seeded random flag.  Over the rationals the entries are integers in
    /// `[-coeff_bound, coeff_bound]`; over F_p they are uniform residues.
    /// Resamples until the basis is invertible.
    pub fn random(field: FieldSpec, d: usize, seed: u64, coeff_bound: i64) -> Result<Self> {
        let mut rng = SplitMix64::new(seed);
        Flag::sample(field, d, &mut rng, coeff_bound)
    }

    pub(crate) fn sample(
        field: FieldSpec,
        d: usize,
        rng: &mut SplitMix64,
        coeff_bound: i64,
    ) -> Result<Self> {
        assert!(d >= 1);
        for _ in 0..SAMPLE_RETRY_LIMIT {
            let mut m = Matrix::zeros(field, d, d);
            for i in 0..d {
                for j in 0..d {
                    let entry = match field {
                        FieldSpec::Rationals => field.integer(rng.int_in(-coeff_bound, coeff_bound)),
                        FieldSpec::Prime(p) => field.integer(rng.below(p) as i64),
                    };
                    m.set(i, j, entry);
                }
            }
            if m.rank() == d {
                return Ok(Flag { basis: m });
            }
        }
        Err(Error::RetriesExhausted)
    }

    pub fn d(&self) -> usize {
        self.basis.rows()
    }

    pub fn field(&self) -> FieldSpec {
        self.basis.field()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// The `i`-th layer as a subspace, `0 <= i <= d`.
    pub fn layer(&self, i: usize) -> Subspace {
        assert!(i <= self.d());
        let cols = self.basis.col_slice(0, i);
        Subspace::span(self.field(), self.d(), &cols)
            .expect("flag columns are independent")
    }

    /// The unique level `v` is new for: the least `i` with `v` in layer `i`.
    /// `None` for the zero vector.
    pub fn new_level_of(&self, v: &[Scalar]) -> Option<usize> {
        if v.iter().all(Scalar::is_zero) {
            return None;
        }
        let mut eb = EchelonBuilder::new(self.d());
        for i in 1..=self.d() {
            eb.insert(&self.basis.col(i - 1));
            if eb.contains(v) {
                return Some(i);
            }
        }
        None
    }

    /// True when `v` lies in layer `i` but not layer `i-1`.
    pub fn is_new_at(&self, v: &[Scalar], i: usize) -> bool {
        self.new_level_of(v) == Some(i)
    }
}

/// An ordered tuple of flags sharing an ambient dimension and field.
#[derive(Clone, Debug)]
pub struct FlagTuple {
    flags: Vec<Flag>,
}

impl FlagTuple {
    pub fn new(flags: Vec<Flag>) -> Result<Self> {
        let Some(first) = flags.first() else {
            return Err(Error::Parse("a flag tuple needs at least one flag".into()));
        };
        let (d, field) = (first.d(), first.field());
        for f in &flags {
            if f.d() != d {
                return Err(Error::DimensionMismatch(f.d(), d));
            }
            if f.field() != field {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(FlagTuple { flags })
    }

    pub fn m(&self) -> usize {
        self.flags.len()
    }

    pub fn d(&self) -> usize {
        self.flags[0].d()
    }

    pub fn field(&self) -> FieldSpec {
        self.flags[0].field()
    }

    pub fn flag(&self, i: usize) -> &Flag {
        &self.flags[i]
    }

    pub fn flags(&self) -> &[Flag] {
        &self.flags
    }

    pub fn layer(&self, flag: usize, level: usize) -> Subspace {
        self.flags[flag].layer(level)
    }

    /// First `k` flags as their own tuple.
    pub fn prefix(&self, k: usize) -> FlagTuple {
        FlagTuple { flags: self.flags[..k].to_vec() }
    }

    pub fn random(
        field: FieldSpec,
        d: usize,
        m: usize,
        seed: u64,
        coeff_bound: i64,
    ) -> Result<Self> {
        let mut rng = SplitMix64::new(seed);
        let flags = (0..m)
            .map(|_| Flag::sample(field, d, &mut rng, coeff_bound))
            .collect::<Result<Vec<_>>>()?;
        FlagTuple::new(flags)
    }

    /// Draw random tuples until one passes `is_transverse`; returns the
    /// tuple and the number of attempts used.
    pub fn random_transverse(
        field: FieldSpec,
        d: usize,
        m: usize,
        seed: u64,
        coeff_bound: i64,
    ) -> Result<(Self, usize)> {
        let mut rng = SplitMix64::new(seed);
        for attempt in 1..=SAMPLE_RETRY_LIMIT {
            let flags = (0..m)
                .map(|_| Flag::sample(field, d, &mut rng, coeff_bound))
                .collect::<Result<Vec<_>>>()?;
            let t = FlagTuple::new(flags)?;
            if t.is_transverse() {
                return Ok((t, attempt));
            }
        }
        Err(Error::RetriesExhausted)
    }

    /// Definition check: for every subset of the flags and every choice of
    /// levels, the intersection codimension equals the sum of codimensions
    /// capped at `d`.  Subsets of size one hold for any flag.
    pub fn is_transverse(&self) -> bool {
        let (m, d) = (self.m(), self.d());
        for subset in 1u32..(1 << m) {
            if subset.count_ones() < 2 {
                continue;
            }
            let members: Vec<usize> = (0..m).filter(|i| subset >> i & 1 == 1).collect();
            let mut levels = vec![1usize; members.len()];
            loop {
                let codim_sum: usize = levels.iter().map(|&l| d - l).sum();
                let expected = codim_sum.min(d);
                let mut meet = self.flags[members[0]].layer(levels[0]);
                for (f, &l) in members.iter().zip(&levels).skip(1) {
                    meet = self.flags[*f]
                        .layer(l)
                        .intersect(&meet)
                        .expect("same ambient space");
                }
                if d - meet.dim() != expected {
                    return false;
                }
                // Odometer over level choices.
                let mut pos = 0;
                loop {
                    if pos == levels.len() {
                        break;
                    }
                    levels[pos] += 1;
                    if levels[pos] <= d {
                        break;
                    }
                    levels[pos] = 1;
                    pos += 1;
                }
                if pos == levels.len() {
                    break;
                }
            }
        }
        true
    }

    /// Blockwise direct sum: flag `i` of the result has the flag `i` of
    /// `self` in the leading coordinates and the flag `i` of `other` in the
    /// trailing ones, so its layers are U_j x {0} below the split and
    /// K^d x V_{j-d} above it.
    pub fn direct_sum(&self, other: &FlagTuple) -> Result<FlagTuple> {
        if self.m() != other.m() {
            return Err(Error::DimensionMismatch(self.m(), other.m()));
        }
        if self.field() != other.field() {
            return Err(Error::FieldMismatch);
        }
        let (d, e, field) = (self.d(), other.d(), self.field());
        let flags = self
            .flags
            .iter()
            .zip(&other.flags)
            .map(|(a, b)| {
                let mut m = Matrix::zeros(field, d + e, d + e);
                for i in 0..d {
                    for j in 0..d {
                        m.set(i, j, a.basis().get(i, j).clone());
                    }
                }
                for i in 0..e {
                    for j in 0..e {
                        m.set(d + i, d + j, b.basis().get(i, j).clone());
                    }
                }
                Flag::new(m)
            })
            .collect::<Result<Vec<_>>>()?;
        FlagTuple::new(flags)
    }

    /// Apply one invertible change of basis to every flag simultaneously.
    pub fn change_basis(&self, m: &Matrix) -> Result<FlagTuple> {
        let flags = self
            .flags
            .iter()
            .map(|f| Flag::new(m.mul(f.basis())?))
            .collect::<Result<Vec<_>>>()?;
        FlagTuple::new(flags)
    }

    /// Full table of triple-intersection dimensions for a triple of flags.
    pub fn dim_grid(&self) -> Result<DimGrid> {
        if self.m() != 3 {
            return Err(Error::DimensionMismatch(self.m(), 3));
        }
        let d = self.d();
        let (u, v, w) = (&self.flags[0], &self.flags[1], &self.flags[2]);
        let w_cols: Vec<Vec<Scalar>> = (0..d).map(|k| w.basis().col(k)).collect();
        let mut table = vec![0usize; (d + 1) * (d + 1) * (d + 1)];
        for i in 0..=d {
            let ui = u.layer(i);
            for j in 0..=d {
                // Pairwise intersection once, then sweep the W chain with an
                // incremental rank so the whole k-row costs one elimination.
                let pair = ui.intersect(&v.layer(j))?;
                let p = pair.dim();
                let mut eb = EchelonBuilder::new(d);
                for col in pair.basis_cols() {
                    eb.insert(&col);
                }
                for k in 0..=d {
                    if k > 0 {
                        eb.insert(&w_cols[k - 1]);
                    }
                    // dim(P ∩ W_k) = dim P + k - rank [P | W_k]
                    table[(i * (d + 1) + j) * (d + 1) + k] = p + k - eb.rank();
                }
            }
        }
        Ok(DimGrid { d, table })
    }
}

/// The `(d+1)^3` table `dim(i, j, k)` of triple-intersection dimensions.
#[derive(Clone, Debug)]
pub struct DimGrid {
    d: usize,
    table: Vec<usize>,
}

impl DimGrid {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> usize {
        assert!(i <= self.d && j <= self.d && k <= self.d);
        self.table[(i * (self.d + 1) + j) * (self.d + 1) + k]
    }

    /// Monotonicity with unit steps in each coordinate.
    pub fn steps_are_unit(&self) -> bool {
        let d = self.d;
        let unit = |hi: usize, lo: usize| hi >= lo && hi - lo <= 1;
        for i in 0..=d {
            for j in 0..=d {
                for k in 0..=d {
                    let v = self.get(i, j, k);
                    if i > 0 && !unit(v, self.get(i - 1, j, k)) {
                        return false;
                    }
                    if j > 0 && !unit(v, self.get(i, j - 1, k)) {
                        return false;
                    }
                    if k > 0 && !unit(v, self.get(i, j, k - 1)) {
                        return false;
                    }
                }
            }
        }
        true
    }
}
