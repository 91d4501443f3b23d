//! Independent ground truth for small instances.  A generating set of size
//! n exists exactly when n compatible sets of layers cover every layer, and
//! every compatible set carries its own witness vector, so the minimum
//! generating-set size is a minimum set cover over the compatible-set
//! catalog.  The catalog is enumerated with explicit witnesses (decided by
//! exhaustive search over tiny fields, never by a cardinality shortcut) and
//! the cover is solved exactly by memoized branch-and-bound.

use std::collections::HashMap;

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::cover::{CompatibleSet, GeneratingSet};
use crate::error::{Error, Result};
use crate::flag::{Flag, FlagTuple};
use crate::matrix::Matrix;
use crate::prism::{pair_witness, triple_witness, LayerRef};
use crate::scalar::{FieldSpec, Scalar};
use crate::subspace::avoid_subspaces;

/// Upper bound on m*d: covers are searched over bitmasks of layer slots.
const MAX_SLOTS: usize = 24;

/// One compatible set with its layers encoded as a bitmask over the
/// `m * d` layer slots (bit `flag * d + level - 1`).
#[derive(Clone, Debug)]
pub struct CatalogSet {
    pub mask: u32,
    pub layers: Vec<LayerRef>,
    pub witness: Vec<Scalar>,
}

/// Every compatible singleton, pair, and triple of layers for a tuple.
#[derive(Clone, Debug)]
pub struct CompatibleCatalog {
    pub m: usize,
    pub d: usize,
    pub sets: Vec<CatalogSet>,
}

impl CompatibleCatalog {
    fn bit(&self, l: LayerRef) -> u32 {
        1 << (l.flag * self.d + l.level - 1)
    }

    pub fn find(&self, layers: &[LayerRef]) -> Option<&CatalogSet> {
        let mask = layers.iter().map(|&l| self.bit(l)).fold(0, |a, b| a | b);
        self.sets.iter().find(|s| s.mask == mask)
    }
}

/// Enumerate the catalog: all singletons, all pairs of layers from distinct
/// flags that admit a common new vector, and likewise all triples.  No
/// larger set can be compatible, and two layers of one flag never share a
/// witness.
pub fn enumerate_compatible(t: &FlagTuple) -> Result<CompatibleCatalog> {
    let (m, d) = (t.m(), t.d());
    let mut catalog = CompatibleCatalog { m, d, sets: Vec::new() };
    let mut push = |layers: Vec<LayerRef>, witness: Vec<Scalar>| {
        let mask = layers.iter().map(|&l| 1u32 << (l.flag * d + l.level - 1)).fold(0, |a, b| a | b);
        catalog.sets.push(CatalogSet { mask, layers, witness });
    };

    for flag in 0..m {
        for level in 1..=d {
            let layer = t.layer(flag, level);
            let below = t.layer(flag, level - 1);
            let witness = avoid_subspaces(&layer, &[&below]).map_err(|e| {
                Error::InternalInconsistency(format!("layer without new vector: {e}"))
            })?;
            push(vec![LayerRef::new(flag, level)], witness);
        }
    }
    for f1 in 0..m {
        for f2 in f1 + 1..m {
            for l1 in 1..=d {
                for l2 in 1..=d {
                    let (a, b) = (LayerRef::new(f1, l1), LayerRef::new(f2, l2));
                    if let Some(w) = pair_witness(t, a, b)? {
                        push(vec![a, b], w);
                    }
                }
            }
        }
    }
    for f1 in 0..m {
        for f2 in f1 + 1..m {
            for f3 in f2 + 1..m {
                for l1 in 1..=d {
                    for l2 in 1..=d {
                        for l3 in 1..=d {
                            let (a, b, c) = (
                                LayerRef::new(f1, l1),
                                LayerRef::new(f2, l2),
                                LayerRef::new(f3, l3),
                            );
                            if let Some(w) = triple_witness(t, a, b, c)? {
                                push(vec![a, b, c], w);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(catalog)
}

/// Exact minimum with one witness-backed optimal cover.
#[derive(Clone, Debug)]
pub struct MuExact {
    pub mu: usize,
    pub cover: GeneratingSet,
}

struct CoverSolver<'a> {
    sets: &'a [CatalogSet],
    covers_by_slot: Vec<Vec<usize>>,
    // Largest budget already proven insufficient for a mask.
    memo_fail: HashMap<u32, usize>,
}

impl<'a> CoverSolver<'a> {
    fn new(slots: usize, sets: &'a [CatalogSet]) -> Self {
        let mut covers_by_slot = vec![Vec::new(); slots];
        for (idx, s) in sets.iter().enumerate() {
            for (slot, covers) in covers_by_slot.iter_mut().enumerate() {
                if s.mask >> slot & 1 == 1 {
                    covers.push(idx);
                }
            }
        }
        CoverSolver { sets, covers_by_slot, memo_fail: HashMap::new() }
    }

    /// Can `mask` be covered with at most `budget` sets?  Branches on the
    /// uncovered slot with the fewest covering sets.
    fn solvable(&mut self, mask: u32, budget: usize) -> bool {
        if mask == 0 {
            return true;
        }
        if (mask.count_ones() as usize).div_ceil(3) > budget {
            return false;
        }
        if let Some(&b) = self.memo_fail.get(&mask) {
            if budget <= b {
                return false;
            }
        }
        let pivot = (0..self.covers_by_slot.len())
            .filter(|&s| mask >> s & 1 == 1)
            .min_by_key(|&s| self.covers_by_slot[s].len())
            .expect("mask nonzero");
        let candidates = self.covers_by_slot[pivot].clone();
        for s in candidates {
            if self.solvable(mask & !self.sets[s].mask, budget - 1) {
                return true;
            }
        }
        let entry = self.memo_fail.entry(mask).or_insert(0);
        *entry = (*entry).max(budget);
        false
    }
}

/// Exact minimum cover of all layer slots.  Deterministic: among optimal
/// covers, the lexicographically least index sequence is returned.
pub fn mu_exact(t: &FlagTuple) -> Result<MuExact> {
    let (m, d) = (t.m(), t.d());
    let slots = m * d;
    if slots > MAX_SLOTS || m > 4 || (m == 4 && d > 4) {
        return Err(Error::InstanceTooLarge(slots));
    }
    let catalog = enumerate_compatible(t)?;
    mu_exact_from_catalog(&catalog)
}

fn mu_exact_from_catalog(catalog: &CompatibleCatalog) -> Result<MuExact> {
    let slots = catalog.m * catalog.d;
    let full: u32 = if slots == 32 { u32::MAX } else { (1 << slots) - 1 };
    let mut solver = CoverSolver::new(slots, &catalog.sets);
    let mut mu = (full.count_ones() as usize).div_ceil(3);
    while !solver.solvable(full, mu) {
        mu += 1;
    }

    let mut remaining = full;
    let mut budget = mu;
    let mut cover = GeneratingSet::default();
    while remaining != 0 {
        let pick = (0..catalog.sets.len())
            .find(|&s| {
                catalog.sets[s].mask & remaining != 0
                    && solver.solvable(remaining & !catalog.sets[s].mask, budget - 1)
            })
            .ok_or_else(|| {
                Error::InternalInconsistency("optimal cover reconstruction failed".into())
            })?;
        cover.sets.push(CompatibleSet {
            layers: catalog.sets[pick].layers.clone(),
            witness: catalog.sets[pick].witness.clone(),
        });
        remaining &= !catalog.sets[pick].mask;
        budget -= 1;
    }
    Ok(MuExact { mu, cover })
}

/// Exact minimum over another coefficient field: a rational tuple is
/// reduced entrywise mod p first.
pub fn mu_exact_over_field(t: &FlagTuple, field: FieldSpec) -> Result<MuExact> {
    if t.field() == field {
        return mu_exact(t);
    }
    match (t.field(), field) {
        (FieldSpec::Rationals, FieldSpec::Prime(p)) => mu_exact(&reduce_mod_p(t, p)?),
        _ => Err(Error::FieldMismatch),
    }
}

/// Entrywise reduction of a rational tuple mod p.  Fails when a denominator
/// vanishes mod p, or when a reduced basis loses rank.
pub fn reduce_mod_p(t: &FlagTuple, p: u64) -> Result<FlagTuple> {
    let field = FieldSpec::prime(p)?;
    let d = t.d();
    let flags = t
        .flags()
        .iter()
        .map(|f| {
            let mut m = Matrix::zeros(field, d, d);
            for i in 0..d {
                for j in 0..d {
                    m.set(i, j, reduce_scalar(f.basis().get(i, j), p, field)?);
                }
            }
            Flag::new(m)
        })
        .collect::<Result<Vec<_>>>()?;
    FlagTuple::new(flags)
}

fn reduce_scalar(s: &Scalar, p: u64, field: FieldSpec) -> Result<Scalar> {
    match s {
        Scalar::Rational(r) => {
            let big_p = num_bigint::BigInt::from(p);
            let num = r.numer().mod_floor(&big_p).to_u64().expect("residue fits");
            let den = r.denom().mod_floor(&big_p).to_u64().expect("residue fits");
            if den == 0 {
                return Err(Error::ReductionFailure { p });
            }
            let den_inv = field.integer(den as i64).inv();
            Ok(field.integer(num as i64).mul(&den_inv))
        }
        Scalar::Residue { .. } => Err(Error::FieldMismatch),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{synth3, verify_generating_set};
    use crate::flag::Flag;
    use crate::prism::PrismGraph;

    fn generic_triple(d: usize, seed: u64) -> FlagTuple {
        FlagTuple::random_transverse(FieldSpec::Rationals, d, 3, seed, 10).unwrap().0
    }

    #[test]
    fn identical_flags_catalog_has_diagonal_triples() {
        let f = Flag::random(FieldSpec::Rationals, 2, 3, 10).unwrap();
        let t = FlagTuple::new(vec![f.clone(), f.clone(), f]).unwrap();
        let cat = enumerate_compatible(&t).unwrap();
        for i in 1..=2 {
            let triple =
                [LayerRef::new(0, i), LayerRef::new(1, i), LayerRef::new(2, i)];
            assert!(cat.find(&triple).is_some());
        }
    }

    #[test]
    fn transverse_level_one_layers_share_nothing() {
        let t = generic_triple(2, 47);
        let cat = enumerate_compatible(&t).unwrap();
        for f1 in 0..3 {
            for f2 in f1 + 1..3 {
                assert!(cat.find(&[LayerRef::new(f1, 1), LayerRef::new(f2, 1)]).is_none());
            }
        }
    }

    #[test]
    fn generic_k3_matching_triangle_is_not_in_the_catalog() {
        // For a transverse triple the grid is max(0, i+j+k-2d), so triples
        // are compatible exactly when i+j+k > 2d; the matching triangle at
        // (2,2,2) falls below that line, which is what pushes the minimum
        // to 5.
        let t = generic_triple(3, 7);
        let cat = enumerate_compatible(&t).unwrap();
        assert!(cat
            .find(&[LayerRef::new(0, 2), LayerRef::new(1, 2), LayerRef::new(2, 2)])
            .is_none());
        for s in cat.sets.iter().filter(|s| s.layers.len() == 3) {
            let sum: usize = s.layers.iter().map(|l| l.level).sum();
            assert!(sum >= 7);
        }
    }

    #[test]
    fn any_pair_needs_exactly_d() {
        for d in 1..=6 {
            let t = FlagTuple::random(FieldSpec::Rationals, d, 2, 500 + d as u64, 10).unwrap();
            let r = mu_exact(&t).unwrap();
            assert_eq!(r.mu, d);
            assert!(verify_generating_set(&t, &r.cover).pass);
        }
    }

    #[test]
    fn transverse_triple_in_k3_needs_five() {
        let t = generic_triple(3, 7);
        let r = mu_exact(&t).unwrap();
        assert_eq!(r.mu, 5);
        assert!(verify_generating_set(&t, &r.cover).pass);
    }

    #[test]
    fn block_sum_needs_ten() {
        let t = generic_triple(3, 19).direct_sum(&generic_triple(3, 23)).unwrap();
        let r = mu_exact(&t).unwrap();
        assert_eq!(r.mu, 10);
        let s = synth3(&t).unwrap();
        assert_eq!(s.size(), 10);
    }

    #[test]
    fn oracle_never_beats_impossible_and_never_exceeds_synthesis() {
        for seed in 0..4u64 {
            let t = FlagTuple::random(FieldSpec::Rationals, 4, 3, 700 + seed, 10).unwrap();
            let r = mu_exact(&t).unwrap();
            let s = synth3(&t).unwrap();
            assert!(r.mu <= s.size());
            assert!(s.size() <= 5 * 4 / 3);
        }
    }

    #[test]
    fn oversize_instances_are_rejected() {
        let t = FlagTuple::random(FieldSpec::Rationals, 9, 3, 61, 10).unwrap();
        assert!(matches!(mu_exact(&t), Err(Error::InstanceTooLarge(27))));
        let t5 = FlagTuple::random(FieldSpec::Rationals, 2, 5, 62, 10).unwrap();
        assert!(matches!(mu_exact(&t5), Err(Error::InstanceTooLarge(_))));
    }

    #[test]
    fn reduction_mod_five_preserves_small_answers() {
        // Over F_5 every compatibility question is still decided by the
        // dimension grid, so whenever reduction mod 5 keeps the grid intact
        // the exact minimum must not move.
        let mut compared = 0;
        for seed in 0..20u64 {
            let t = generic_triple(3, seed);
            let Ok(reduced) = reduce_mod_p(&t, 5) else {
                continue; // basis degenerated mod 5
            };
            assert_eq!(reduced.field(), FieldSpec::Prime(5));
            let gq = t.dim_grid().unwrap();
            let gf = reduced.dim_grid().unwrap();
            let grid_preserved = (0..=3).all(|i| {
                (0..=3).all(|j| (0..=3).all(|k| gq.get(i, j, k) == gf.get(i, j, k)))
            });
            if !grid_preserved {
                continue;
            }
            let over_q = mu_exact(&t).unwrap().mu;
            let over_f5 = mu_exact(&reduced).unwrap().mu;
            assert_eq!(over_q, over_f5, "seed {seed}");
            compared += 1;
        }
        assert!(compared >= 3, "only {compared} grid-preserving reductions found");
    }

    #[test]
    fn reduction_rejects_bad_denominators() {
        let q = FieldSpec::Rationals;
        let mut m = Matrix::identity(q, 2);
        m.set(0, 0, q.parse("1/5").unwrap());
        let t = FlagTuple::new(vec![Flag::new(m).unwrap()]).unwrap();
        assert!(matches!(reduce_mod_p(&t, 5), Err(Error::ReductionFailure { p: 5 })));
    }

    #[test]
    fn f2_respects_the_upper_bound_and_reaches_it() {
        let f2 = FieldSpec::prime(2).unwrap();
        let mut best = 0;
        for seed in 0..40u64 {
            let t = FlagTuple::random(f2, 3, 3, 800 + seed, 1).unwrap();
            let mu = mu_exact(&t).unwrap().mu;
            assert!(mu <= 5);
            best = best.max(mu);
        }
        // Two-element fields still admit extremal triples at d = 3.
        assert_eq!(best, 5);
    }

    #[test]
    fn equality_candidates_reach_the_bound() {
        let t = generic_triple(3, 19).direct_sum(&generic_triple(3, 23)).unwrap();
        let g = PrismGraph::build(&t).unwrap();
        assert!(crate::cover::is_equality_candidate(&g, &t).unwrap().candidate);
        assert_eq!(mu_exact(&t).unwrap().mu, 10);
    }

    #[test]
    fn equality_verdict_matches_oracle_at_small_scale() {
        // Both directions at d = 3: the combinatorial constraints hold
        // exactly when the minimum reaches 5d/3 = 5.
        for field in [FieldSpec::Rationals, FieldSpec::Prime(2)] {
            let cb = if field == FieldSpec::Rationals { 4 } else { 10 };
            let mut candidates = 0;
            for seed in 0..60u64 {
                let Ok(t) = FlagTuple::random(field, 3, 3, 90_000 + seed, cb) else {
                    continue;
                };
                let g = PrismGraph::build(&t).unwrap();
                let eq = crate::cover::is_equality_candidate(&g, &t).unwrap().candidate;
                let mu = mu_exact(&t).unwrap().mu;
                assert_eq!(eq, mu == 5, "{field} seed {seed}: eq={eq} mu={mu}");
                candidates += eq as usize;
            }
            assert!(candidates > 0, "no extremal instance sampled over {field}");
        }
    }

    #[test]
    fn block_sums_add_minima_exactly() {
        // The block construction splits any cover into per-block covers, so
        // its minimum is the sum of the block minima.
        let a = generic_triple(2, 57);
        let b = FlagTuple::random(FieldSpec::Rationals, 2, 3, 58, 10).unwrap();
        let sum = a.direct_sum(&b).unwrap();
        let mu_sum = mu_exact(&sum).unwrap().mu;
        assert_eq!(mu_sum, mu_exact(&a).unwrap().mu + mu_exact(&b).unwrap().mu);
    }

    #[test]
    fn transverse_counting_bound_holds() {
        // Pairwise-trivial low layers force m*floor(d/2) vectors, and the
        // middle layers of odd d force ceil(m/2) more.
        for d in 2..=4usize {
            let t = generic_triple(d, 60 + d as u64);
            let mu = mu_exact(&t).unwrap().mu;
            let lower = 3 * (d / 2) + if d % 2 == 1 { 2 } else { 0 };
            assert!(mu >= lower, "d={d}: {mu} < {lower}");
        }
    }

    #[test]
    fn cross_field_entry_point_reduces_and_solves() {
        // Equal coordinate flags: every layer chain coincides, so the
        // minimum is d over any field and the reduction is trivially
        // faithful.
        let std3 = Flag::standard(FieldSpec::Rationals, 3);
        let t = FlagTuple::new(vec![std3.clone(), std3.clone(), std3]).unwrap();
        assert_eq!(mu_exact(&t).unwrap().mu, 3);
        assert_eq!(mu_exact_over_field(&t, FieldSpec::Prime(7)).unwrap().mu, 3);
        assert_eq!(mu_exact_over_field(&t, FieldSpec::Rationals).unwrap().mu, 3);
        let f5 = FlagTuple::random(FieldSpec::Prime(5), 2, 2, 3, 10).unwrap();
        assert!(matches!(
            mu_exact_over_field(&f5, FieldSpec::Prime(7)),
            Err(Error::FieldMismatch)
        ));
    }

    #[test]
    fn returned_cover_is_deterministic() {
        let t = generic_triple(3, 7);
        let a = mu_exact(&t).unwrap();
        let b = mu_exact(&t).unwrap();
        assert_eq!(format!("{:?}", a.cover), format!("{:?}", b.cover));
    }
}
