//! The m-flag layer: the closed-form worst-case value, synthesis by
//! splitting into a triple plus pairs, and the tighter construction
//! available for transverse tuples.

use crate::bruhat::{bruhat_perm, two_flag_generators, BruhatPerm};
use crate::cover::{synth3, CompatibleSet, GeneratingSet};
use crate::error::{Error, Result};
use crate::flag::FlagTuple;
use crate::prism::LayerRef;
use crate::subspace::avoid_subspaces;

/// The worst-case minimum generating-set size over all m-tuples in K^d.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MuValue {
    pub m: usize,
    pub d: usize,
    pub value: usize,
}

/// Closed form: d when m = 1 or d = 1; md/2 for even m; and
/// md/2 + floor(2d/3) - d/2 for odd m >= 3 (integral since (m-1)d is even).
pub fn mu_formula(m: usize, d: usize) -> MuValue {
    assert!(m >= 1 && d >= 1);
    let value = if m == 1 || d == 1 {
        d
    } else if m.is_multiple_of(2) {
        m * d / 2
    } else {
        (m - 1) * d / 2 + 2 * d / 3
    };
    MuValue { m, d, value }
}

fn singleton(t: &FlagTuple, l: LayerRef) -> Result<CompatibleSet> {
    let layer = t.layer(l.flag, l.level);
    let below = t.layer(l.flag, l.level - 1);
    let witness = avoid_subspaces(&layer, &[&below]).map_err(|e| {
        Error::InternalInconsistency(format!("layer {l} has no new vector: {e}"))
    })?;
    Ok(CompatibleSet { layers: vec![l], witness })
}

/// Generating set for any tuple, within the closed-form bound: even m pairs
/// the flags off two at a time; odd m >= 3 runs the triple synthesis on the
/// first three flags and pairs the rest; a single flag takes its own chain.
/// In a one-dimensional space a single nonzero vector is new for every
/// flag's only layer, so d = 1 always needs exactly one set.
pub fn synth_m(t: &FlagTuple) -> Result<GeneratingSet> {
    let m = t.m();
    let mut gs = GeneratingSet::default();
    let mut pair_start = 0;
    if m == 1 {
        for level in 1..=t.d() {
            gs.sets.push(singleton(t, LayerRef::new(0, level))?);
        }
        return Ok(gs);
    }
    if t.d() == 1 {
        let witness = singleton(t, LayerRef::new(0, 1))?.witness;
        gs.sets.push(CompatibleSet {
            layers: (0..m).map(|f| LayerRef::new(f, 1)).collect(),
            witness,
        });
        return Ok(gs);
    }
    if m % 2 == 1 {
        gs.extend(synth3(&t.prefix(3))?);
        pair_start = 3;
    }
    for base in (pair_start..m).step_by(2) {
        let pair = two_flag_generators(t.flag(base), t.flag(base + 1))?;
        gs.extend(pair.relabeled(&[base, base + 1]));
    }
    debug_assert!(gs.size() <= mu_formula(m, t.d()).value);
    Ok(gs)
}

/// The ceil(md/2) construction for transverse pairs and triples.  For a
/// triple, level i of each flag shares a witness with level d+1-i of the
/// next flag around the cycle U -> V -> W; odd d additionally spends one
/// witness on the middle layers of the first two flags and one on the
/// third.
pub fn transverse_synth(t: &FlagTuple, require_transverse: bool) -> Result<GeneratingSet> {
    let (m, d) = (t.m(), t.d());
    if m != 2 && m != 3 {
        return Err(Error::DimensionMismatch(m, 3));
    }
    if require_transverse && !t.is_transverse() {
        return Err(Error::NotTransverse);
    }

    if m == 2 {
        // The pairing permutation of a transverse pair reverses order, so
        // the two-flag pairing already realizes the sigma-reversal cover.
        let sigma = bruhat_perm(t.flag(0), t.flag(1))?;
        if sigma != BruhatPerm::reversal(d) {
            return Err(Error::NotTransverse);
        }
        return two_flag_generators(t.flag(0), t.flag(1));
    }

    let mut gs = GeneratingSet::default();
    for i in 1..=d / 2 {
        for f in 0..3 {
            gs.sets.push(line_pair(t, f, i, (f + 1) % 3, d + 1 - i)?);
        }
    }
    if d % 2 == 1 {
        let mid = d / 2 + 1;
        gs.sets.push(line_pair(t, 0, mid, 1, mid)?);
        gs.sets.push(singleton(t, LayerRef::new(2, mid))?);
    }
    debug_assert_eq!(gs.size(), (3 * d).div_ceil(2));
    Ok(gs)
}

/// A witness shared by two layers whose meet is a line, as transversality
/// guarantees for complementary levels.
fn line_pair(
    t: &FlagTuple,
    fa: usize,
    la: usize,
    fb: usize,
    lb: usize,
) -> Result<CompatibleSet> {
    let (a, b) = (t.layer(fa, la), t.layer(fb, lb));
    let meet = a.intersect(&b)?;
    if meet.dim() != 1 {
        return Err(Error::NotTransverse);
    }
    let below_a = t.layer(fa, la - 1);
    let below_b = t.layer(fb, lb - 1);
    let witness =
        avoid_subspaces(&meet, &[&below_a, &below_b]).map_err(|_| Error::NotTransverse)?;
    Ok(CompatibleSet {
        layers: vec![LayerRef::new(fa, la), LayerRef::new(fb, lb)],
        witness,
    })
}
