//! The two tripartite graphs on the 3d layers of a triple of flags: the
//! matching graph G assembled from the three pairing permutations, and the
//! compatibility graph containing it.  G is 2-regular, so it decomposes
//! into cycles whose lengths are multiples of three; crossings and the
//! height order of cycles drive the covering argument.

use std::fmt;

use crate::bruhat::{bruhat_perm, BruhatPerm};
use crate::error::{Error, Result};
use crate::flag::FlagTuple;
use crate::scalar::{FieldSpec, Scalar};
use crate::subspace::{avoid_subspaces, Subspace};

/// Display names for the first three flags; higher indices print as F3, F4, ...
pub const FLAG_NAMES: [&str; 3] = ["U", "V", "W"];

/// One layer of one flag, identified by flag index and level in `1..=d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LayerRef {
    pub flag: usize,
    pub level: usize,
}

impl LayerRef {
    pub fn new(flag: usize, level: usize) -> Self {
        LayerRef { flag, level }
    }

    pub fn flag_name(&self) -> String {
        match FLAG_NAMES.get(self.flag) {
            Some(n) => n.to_string(),
            None => format!("F{}", self.flag),
        }
    }
}

impl fmt::Display for LayerRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.flag_name(), self.level)
    }
}

/// A cycle of the matching graph, listed in traversal order U -> V -> W.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    vertices: Vec<LayerRef>,
}

impl Cycle {
    pub fn vertices(&self) -> &[LayerRef] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_even(&self) -> bool {
        self.len().is_multiple_of(2)
    }

    pub fn is_triangle(&self) -> bool {
        self.len() == 3
    }

    pub fn contains(&self, v: LayerRef) -> bool {
        self.vertices.contains(&v)
    }

    /// Consecutive pairs around the cycle, including the closing edge.
    pub fn edges(&self) -> Vec<(LayerRef, LayerRef)> {
        let n = self.len();
        (0..n).map(|i| (self.vertices[i], self.vertices[(i + 1) % n])).collect()
    }

    pub fn levels_of(&self, flag: usize) -> Vec<usize> {
        let mut ls: Vec<usize> =
            self.vertices.iter().filter(|v| v.flag == flag).map(|v| v.level).collect();
        ls.sort_unstable();
        ls
    }

    pub fn min_level(&self, flag: usize) -> usize {
        *self.levels_of(flag).first().expect("cycle has a vertex in every column")
    }

    pub fn max_level(&self, flag: usize) -> usize {
        *self.levels_of(flag).last().expect("cycle has a vertex in every column")
    }
}

const FACES: [(usize, usize); 3] = [(0, 1), (1, 2), (2, 0)];

/// The matching graph of a triple, with its cycle decomposition.  The
/// compatibility graph is not materialized: the pairing permutations
/// determine it, and `gtilde_edge` answers queries in O(d).
#[derive(Clone, Debug)]
pub struct PrismGraph {
    d: usize,
    // Matchings U->V, V->W, W->U.
    sigma: [BruhatPerm; 3],
    cycles: Vec<Cycle>,
}

impl PrismGraph {
    pub fn build(t: &FlagTuple) -> Result<Self> {
        if t.m() != 3 {
            return Err(Error::DimensionMismatch(t.m(), 3));
        }
        let sigma_uv = bruhat_perm(t.flag(0), t.flag(1))?;
        let sigma_vw = bruhat_perm(t.flag(1), t.flag(2))?;
        let sigma_wu = bruhat_perm(t.flag(2), t.flag(0))?;
        Self::from_sigmas(sigma_uv, sigma_vw, sigma_wu)
    }

    /// Assemble the graph directly from three matchings.
    pub fn from_sigmas(
        sigma_uv: BruhatPerm,
        sigma_vw: BruhatPerm,
        sigma_wu: BruhatPerm,
    ) -> Result<Self> {
        let d = sigma_uv.d();
        if sigma_vw.d() != d || sigma_wu.d() != d {
            return Err(Error::DimensionMismatch(sigma_vw.d().min(sigma_wu.d()), d));
        }
        let mut g = PrismGraph { d, sigma: [sigma_uv, sigma_vw, sigma_wu], cycles: Vec::new() };
        g.cycles = g.trace_cycles();
        Ok(g)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn sigma_uv(&self) -> &BruhatPerm {
        &self.sigma[0]
    }

    pub fn sigma_vw(&self) -> &BruhatPerm {
        &self.sigma[1]
    }

    pub fn sigma_wu(&self) -> &BruhatPerm {
        &self.sigma[2]
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    /// Successor along the matching direction U -> V -> W -> U.
    pub fn next_vertex(&self, v: LayerRef) -> LayerRef {
        let to = (v.flag + 1) % 3;
        LayerRef::new(to, self.sigma[v.flag].apply(v.level))
    }

    /// All 3d matching edges, by face then level.
    pub fn g_edges(&self) -> Vec<(LayerRef, LayerRef)> {
        let mut edges = Vec::with_capacity(3 * self.d);
        for flag in 0..3 {
            for i in 1..=self.d {
                let a = LayerRef::new(flag, i);
                edges.push((a, self.next_vertex(a)));
            }
        }
        edges
    }

    /// The matching permutation seen from column `x` toward column `y`:
    /// the level on `y` matched to `level` on `x`.
    pub fn matching_partner(&self, x: usize, y: usize, level: usize) -> usize {
        self.sigma_apply(x, y, level)
    }

    fn sigma_apply(&self, x: usize, y: usize, level: usize) -> usize {
        for (idx, &(fx, fy)) in FACES.iter().enumerate() {
            if (fx, fy) == (x, y) {
                return self.sigma[idx].apply(level);
            }
            if (fx, fy) == (y, x) {
                return self.sigma[idx].apply_inv(level);
            }
        }
        unreachable!("distinct flags below 3 always share a face")
    }

    /// Compatibility-graph adjacency by the partner rule: with `i'`, `j'`
    /// the matching partners of the two levels, the pair is adjacent if and
    /// only if `i >= i'` and `j >= j'`.
    pub fn gtilde_edge(&self, a: LayerRef, b: LayerRef) -> Result<bool> {
        if a.flag == b.flag {
            return Err(Error::SameColumn);
        }
        if a.flag > 2 || b.flag > 2 {
            return Err(Error::Parse("layer outside the three columns".into()));
        }
        let j_partner = self.sigma_apply(a.flag, b.flag, a.level);
        let i_partner = self.sigma_apply(b.flag, a.flag, b.level);
        Ok(a.level >= i_partner && b.level >= j_partner)
    }

    /// Edges of the compatibility graph that are not matching edges; one
    /// per crossing pair of matching edges.
    pub fn gtilde_only_edges(&self) -> Vec<(LayerRef, LayerRef)> {
        let mut out = Vec::new();
        for &(x, y) in FACES.iter() {
            for i in 1..=self.d {
                for j in 1..=self.d {
                    if self.sigma_apply(x, y, i) == j {
                        continue;
                    }
                    let (a, b) = (LayerRef::new(x, i), LayerRef::new(y, j));
                    if self.gtilde_edge(a, b).expect("distinct columns") {
                        out.push((a, b));
                    }
                }
            }
        }
        out
    }

    /// Canonical cycle decomposition: start each walk at the smallest
    /// unvisited (flag, level) and follow the matching direction.
    fn trace_cycles(&self) -> Vec<Cycle> {
        let mut visited = vec![[false; 3]; self.d + 1];
        let mut cycles = Vec::new();
        for flag in 0..3 {
            for level in 1..=self.d {
                if visited[level][flag] {
                    continue;
                }
                let start = LayerRef::new(flag, level);
                let mut vertices = Vec::new();
                let mut cur = start;
                loop {
                    visited[cur.level][cur.flag] = true;
                    vertices.push(cur);
                    cur = self.next_vertex(cur);
                    if cur == start {
                        break;
                    }
                }
                debug_assert_eq!(vertices.len() % 3, 0);
                cycles.push(Cycle { vertices });
            }
        }
        debug_assert_eq!(cycles.iter().map(Cycle::len).sum::<usize>(), 3 * self.d);
        cycles
    }
}

/// Normalize an edge onto its face: returns (face index, level on the first
/// column of the face, level on the second).
fn orient(e: (LayerRef, LayerRef)) -> Option<(usize, usize, usize)> {
    for (idx, &(x, y)) in FACES.iter().enumerate() {
        if (e.0.flag, e.1.flag) == (x, y) {
            return Some((idx, e.0.level, e.1.level));
        }
        if (e.1.flag, e.0.flag) == (x, y) {
            return Some((idx, e.1.level, e.0.level));
        }
    }
    None
}

/// Two edges cross when they lie on the same face and their endpoints
/// interleave strictly.  Edges on different faces never cross.
pub fn edges_cross(e: (LayerRef, LayerRef), f: (LayerRef, LayerRef)) -> bool {
    let (Some((fe, i, j)), Some((ff, i2, j2))) = (orient(e), orient(f)) else {
        return false;
    };
    if fe != ff {
        return false;
    }
    (i > i2 && j < j2) || (i < i2 && j > j2)
}

/// Whether any edge of one cycle crosses an edge of the other.  A cycle
/// never crosses itself by convention.
pub fn cycles_cross(a: &Cycle, b: &Cycle) -> bool {
    if a == b {
        return false;
    }
    a.edges().iter().any(|&e| b.edges().iter().any(|&f| edges_cross(e, f)))
}

/// Sort pairwise non-crossing cycles from bottom to top.  Returns indices
/// into the input; fails when some pair is not fully separated on all
/// three columns.
pub fn height_order(cycles: &[Cycle]) -> Result<Vec<usize>> {
    let mut order: Vec<usize> = (0..cycles.len()).collect();
    order.sort_by_key(|&i| cycles[i].min_level(0));
    for pair in order.windows(2) {
        let (lo, hi) = (&cycles[pair[0]], &cycles[pair[1]]);
        for flag in 0..3 {
            if lo.max_level(flag) >= hi.min_level(flag) {
                return Err(Error::NotComparable);
            }
        }
    }
    Ok(order)
}

fn check_layer(t: &FlagTuple, l: LayerRef) -> Result<()> {
    if l.flag >= t.m() {
        return Err(Error::Parse(format!("flag index {} out of range", l.flag)));
    }
    if l.level == 0 || l.level > t.d() {
        return Err(Error::Parse(format!("level {} out of range", l.level)));
    }
    Ok(())
}

/// Whether one vector can be new for both layers, decided by two dimension
/// comparisons: the meet must strictly exceed both lowered meets.
pub fn compatible_pair(t: &FlagTuple, a: LayerRef, b: LayerRef) -> Result<bool> {
    check_layer(t, a)?;
    check_layer(t, b)?;
    if a.flag == b.flag {
        return Err(Error::DuplicateFlag);
    }
    let la = t.layer(a.flag, a.level);
    let lb = t.layer(b.flag, b.level);
    let meet = la.intersect_dim(&lb)?;
    Ok(meet > t.layer(a.flag, a.level - 1).intersect_dim(&lb)?
        && meet > la.intersect_dim(&t.layer(b.flag, b.level - 1))?)
}

/// A vector new for both layers, when one exists.  Two proper subspaces
/// never cover over any field, so compatibility guarantees a witness.
pub fn pair_witness(t: &FlagTuple, a: LayerRef, b: LayerRef) -> Result<Option<Vec<Scalar>>> {
    if !compatible_pair(t, a, b)? {
        return Ok(None);
    }
    let meet = t.layer(a.flag, a.level).intersect(&t.layer(b.flag, b.level))?;
    let below_a = t.layer(a.flag, a.level - 1);
    let below_b = t.layer(b.flag, b.level - 1);
    let v = avoid_subspaces(&meet, &[&below_a, &below_b]).map_err(|e| {
        Error::InternalInconsistency(format!("compatible pair without witness: {e}"))
    })?;
    Ok(Some(v))
}

struct TripleMeets {
    meet: Subspace,
    lowered: [Subspace; 3],
    necessary: bool,
}

fn triple_meets(t: &FlagTuple, a: LayerRef, b: LayerRef, c: LayerRef) -> Result<TripleMeets> {
    for l in [a, b, c] {
        check_layer(t, l)?;
    }
    if a.flag == b.flag || a.flag == c.flag || b.flag == c.flag {
        return Err(Error::DuplicateFlag);
    }
    let la = t.layer(a.flag, a.level);
    let lb = t.layer(b.flag, b.level);
    let lc = t.layer(c.flag, c.level);
    let ab = la.intersect(&lb)?;
    let bc = lb.intersect(&lc)?;
    let ac = la.intersect(&lc)?;
    let meet = ab.intersect(&lc)?;
    let lowered = [
        t.layer(a.flag, a.level - 1).intersect(&bc)?,
        t.layer(b.flag, b.level - 1).intersect(&ac)?,
        t.layer(c.flag, c.level - 1).intersect(&ab)?,
    ];
    let necessary = lowered.iter().all(|s| meet.dim() > s.dim());
    Ok(TripleMeets { meet, lowered, necessary })
}

/// Whether one vector can be new for all three layers.  The dimension test
/// (the triple meet strictly exceeds each lowered meet) is necessary, and
/// over fields with at least three elements it is conclusive, since three
/// proper subspaces cannot cover a space there.  Over F_2 the witness
/// search decides.
pub fn compatible_triple(t: &FlagTuple, a: LayerRef, b: LayerRef, c: LayerRef) -> Result<bool> {
    let meets = triple_meets(t, a, b, c)?;
    if !meets.necessary {
        return Ok(false);
    }
    if t.field() != FieldSpec::Prime(2) {
        return Ok(true);
    }
    Ok(triple_witness_from(&meets)?.is_some())
}

/// A vector new for all three layers, when one exists.
pub fn triple_witness(
    t: &FlagTuple,
    a: LayerRef,
    b: LayerRef,
    c: LayerRef,
) -> Result<Option<Vec<Scalar>>> {
    let meets = triple_meets(t, a, b, c)?;
    if !meets.necessary {
        return Ok(None);
    }
    triple_witness_from(&meets)
}

fn triple_witness_from(meets: &TripleMeets) -> Result<Option<Vec<Scalar>>> {
    let avoid: Vec<&Subspace> = meets.lowered.iter().collect();
    match avoid_subspaces(&meets.meet, &avoid) {
        Ok(v) => Ok(Some(v)),
        // Only a tiny field can exhaust: the dimension test already made
        // each lowered meet proper.
        Err(Error::FieldTooSmall) => Ok(None),
        Err(e) => Err(Error::InternalInconsistency(format!(
            "triple witness search failed unexpectedly: {e}"
        ))),
    }
}
