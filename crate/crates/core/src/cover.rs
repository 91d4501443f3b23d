//! Covering all 3d layers by compatible sets.  Cycles of the matching
//! graph are grouped by how efficiently they can be covered:
//!
//!   A: even cycles, triangles that admit a common witness, and pairs of
//!      crossing odd cycles -- all covered at one set per two vertices;
//!   B: leftover odd cycles of length >= 9 -- (|S|+1)/2 sets;
//!   C: leftover incompatible triangles -- two sets for three vertices.
//!
//! The synthesis concatenates the per-unit covers and lands within
//! floor(5d/3) sets; the hop-cost certificate checks the counting
//! inequality that makes this work.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flag::FlagTuple;
use crate::prism::{
    compatible_triple, cycles_cross, edges_cross, height_order, pair_witness, triple_witness,
    Cycle, LayerRef, PrismGraph,
};
use crate::scalar::Scalar;
use crate::subspace::avoid_subspaces;

/// Layers from pairwise distinct flags together with a vector that is new
/// for every one of them.  A triple of flags caps these at three layers;
/// a vector can never be new for two layers of one flag.
#[derive(Clone, Debug)]
pub struct CompatibleSet {
    pub layers: Vec<LayerRef>,
    pub witness: Vec<Scalar>,
}

/// A family of compatible sets whose layers cover every flag completely.
#[derive(Clone, Debug, Default)]
pub struct GeneratingSet {
    pub sets: Vec<CompatibleSet>,
}

impl GeneratingSet {
    pub fn size(&self) -> usize {
        self.sets.len()
    }

    pub fn vectors(&self) -> Vec<Vec<Scalar>> {
        self.sets.iter().map(|s| s.witness.clone()).collect()
    }

    /// Remap flag indices, e.g. to splice a two-flag cover into a larger
    /// tuple.
    pub fn relabeled(mut self, map: &[usize]) -> Self {
        for set in &mut self.sets {
            for layer in &mut set.layers {
                layer.flag = map[layer.flag];
            }
        }
        self
    }

    pub fn extend(&mut self, other: GeneratingSet) {
        self.sets.extend(other.sets);
    }
}

/// One efficiently coverable unit of the A group.
#[derive(Clone, Debug)]
pub enum AUnit {
    EvenCycle(Cycle),
    CompatibleTriangle(Cycle),
    CrossingOddPair(Cycle, Cycle),
}

impl AUnit {
    pub fn vertex_count(&self) -> usize {
        match self {
            AUnit::EvenCycle(c) | AUnit::CompatibleTriangle(c) => c.len(),
            AUnit::CrossingOddPair(a, b) => a.len() + b.len(),
        }
    }

    pub fn cycles(&self) -> Vec<&Cycle> {
        match self {
            AUnit::EvenCycle(c) | AUnit::CompatibleTriangle(c) => vec![c],
            AUnit::CrossingOddPair(a, b) => vec![a, b],
        }
    }
}

/// The A/B/C grouping of the cycles of a matching graph.
#[derive(Clone, Debug)]
pub struct CycleClassification {
    pub a_units: Vec<AUnit>,
    /// Non-crossing odd cycles of length at least 9, bottom to top.
    pub b_cycles: Vec<Cycle>,
    /// Incompatible triangles, bottom to top.
    pub c_triangles: Vec<Cycle>,
}

/// Borrowed view of one unit to cover.
#[derive(Clone, Copy, Debug)]
pub enum UnitRef<'a> {
    Even(&'a Cycle),
    CompatTriangle(&'a Cycle),
    CrossingPair(&'a Cycle, &'a Cycle),
    LongOdd(&'a Cycle),
    BadTriangle(&'a Cycle),
}

impl CycleClassification {
    pub fn a_size(&self) -> usize {
        self.a_units.iter().map(AUnit::vertex_count).sum()
    }

    pub fn b_size(&self) -> usize {
        self.b_cycles.iter().map(Cycle::len).sum()
    }

    pub fn c_size(&self) -> usize {
        3 * self.c_triangles.len()
    }

    /// Every unit in canonical cover order: A, then B, then C.
    pub fn units(&self) -> Vec<UnitRef<'_>> {
        let mut out = Vec::new();
        for u in &self.a_units {
            out.push(match u {
                AUnit::EvenCycle(c) => UnitRef::Even(c),
                AUnit::CompatibleTriangle(c) => UnitRef::CompatTriangle(c),
                AUnit::CrossingOddPair(a, b) => UnitRef::CrossingPair(a, b),
            });
        }
        out.extend(self.b_cycles.iter().map(UnitRef::LongOdd));
        out.extend(self.c_triangles.iter().map(UnitRef::BadTriangle));
        out
    }
}

/// Group the cycles: even cycles and witness-bearing triangles go straight
/// to A; among the remaining odd cycles, crossing pairs are greedily moved
/// to A (scanning in height-then-discovery order and restarting after each
/// removal); what survives is non-crossing, and splits into C (triangles)
/// and B (the rest), each ordered by height.
pub fn classify(g: &PrismGraph, t: &FlagTuple) -> Result<CycleClassification> {
    let mut a_units = Vec::new();
    let mut odd: Vec<Cycle> = Vec::new();
    for cycle in g.cycles() {
        if cycle.is_even() {
            a_units.push(AUnit::EvenCycle(cycle.clone()));
        } else if cycle.is_triangle() {
            let v = cycle.vertices();
            if compatible_triple(t, v[0], v[1], v[2])? {
                a_units.push(AUnit::CompatibleTriangle(cycle.clone()));
            } else {
                odd.push(cycle.clone());
            }
        } else {
            odd.push(cycle.clone());
        }
    }

    odd.sort_by_key(|c| c.min_level(0));
    'pairing: loop {
        for x in 0..odd.len() {
            for y in x + 1..odd.len() {
                if cycles_cross(&odd[x], &odd[y]) {
                    let cy = odd.remove(y);
                    let cx = odd.remove(x);
                    a_units.push(AUnit::CrossingOddPair(cx, cy));
                    continue 'pairing;
                }
            }
        }
        break;
    }

    let (triangles, long): (Vec<Cycle>, Vec<Cycle>) =
        odd.into_iter().partition(Cycle::is_triangle);
    for c in &long {
        debug_assert!(c.len() >= 9);
    }

    let internal = |e: Error| {
        Error::InternalInconsistency(format!("leftover cycles admit no height order: {e}"))
    };
    let mut all: Vec<Cycle> = triangles;
    let split = all.len();
    all.extend(long);
    // Everything left is pairwise non-crossing, so the whole leftover
    // family stacks by height; order the two groups through one call.
    let order = height_order(&all).map_err(internal)?;
    let mut c_triangles = Vec::new();
    let mut b_cycles = Vec::new();
    for idx in order {
        if idx < split {
            c_triangles.push(all[idx].clone());
        } else {
            b_cycles.push(all[idx].clone());
        }
    }

    let cls = CycleClassification { a_units, b_cycles, c_triangles };
    debug_assert_eq!(cls.a_size() + cls.b_size() + cls.c_size(), 3 * g.d());
    Ok(cls)
}

fn pair_set(t: &FlagTuple, a: LayerRef, b: LayerRef) -> Result<CompatibleSet> {
    match pair_witness(t, a, b)? {
        Some(witness) => Ok(CompatibleSet { layers: vec![a, b], witness }),
        None => Err(Error::InternalInconsistency(format!(
            "claimed compatible pair ({a}, {b}) has no witness"
        ))),
    }
}

fn singleton_set(t: &FlagTuple, l: LayerRef) -> Result<CompatibleSet> {
    let layer = t.layer(l.flag, l.level);
    let below = t.layer(l.flag, l.level - 1);
    let witness = avoid_subspaces(&layer, &[&below]).map_err(|e| {
        Error::InternalInconsistency(format!("layer {l} has no new vector: {e}"))
    })?;
    Ok(CompatibleSet { layers: vec![l], witness })
}

/// Pair off the vertices of a cycle along its edges, skipping the vertex at
/// `skip` (for odd cycles with one vertex already handled).
fn matching_along(
    t: &FlagTuple,
    cycle: &Cycle,
    skip: Option<LayerRef>,
) -> Result<Vec<CompatibleSet>> {
    let verts = cycle.vertices();
    let path: Vec<LayerRef> = match skip {
        None => verts.to_vec(),
        Some(s) => {
            let pos = verts.iter().position(|&v| v == s).expect("skip vertex in cycle");
            let mut p = verts[pos + 1..].to_vec();
            p.extend_from_slice(&verts[..pos]);
            p
        }
    };
    debug_assert_eq!(path.len() % 2, 0);
    path.chunks(2).map(|pair| pair_set(t, pair[0], pair[1])).collect()
}

/// Cover one unit by compatible sets, with per-kind counts:
/// even cycle |S|/2, witnessed triangle 1, crossing odd pair |S|/2,
/// long odd cycle (|S|+1)/2, incompatible triangle 2.
pub fn cover_unit(unit: UnitRef<'_>, g: &PrismGraph, t: &FlagTuple) -> Result<Vec<CompatibleSet>> {
    match unit {
        UnitRef::Even(c) => matching_along(t, c, None),
        UnitRef::CompatTriangle(c) => {
            let v = c.vertices();
            match triple_witness(t, v[0], v[1], v[2])? {
                Some(witness) => {
                    Ok(vec![CompatibleSet { layers: vec![v[0], v[1], v[2]], witness }])
                }
                None => Err(Error::InternalInconsistency(format!(
                    "triangle ({}, {}, {}) lost its witness",
                    v[0], v[1], v[2]
                ))),
            }
        }
        UnitRef::CrossingPair(c1, c2) => {
            // The crossing guarantees a compatibility edge between the two
            // cycles; scan faces in order, then levels, for the first one.
            let mut connector = None;
            'faces: for (x, y) in [(0usize, 1usize), (1, 2), (2, 0)] {
                for i in 1..=g.d() {
                    for j in 1..=g.d() {
                        let a = LayerRef::new(x, i);
                        let b = LayerRef::new(y, j);
                        let across = (c1.contains(a) && c2.contains(b))
                            || (c2.contains(a) && c1.contains(b));
                        if across && g.gtilde_edge(a, b)? {
                            connector = Some((a, b));
                            break 'faces;
                        }
                    }
                }
            }
            let (a, b) = connector.ok_or_else(|| {
                Error::InternalInconsistency("crossing cycles with no connecting edge".into())
            })?;
            let mut sets = vec![pair_set(t, a, b)?];
            for cycle in [c1, c2] {
                let endpoint = if cycle.contains(a) { a } else { b };
                sets.extend(matching_along(t, cycle, Some(endpoint))?);
            }
            Ok(sets)
        }
        UnitRef::LongOdd(c) => {
            let start = c.vertices()[0];
            let mut sets = vec![singleton_set(t, start)?];
            sets.extend(matching_along(t, c, Some(start))?);
            Ok(sets)
        }
        UnitRef::BadTriangle(c) => {
            // The two matching edges at the triangle's first-column vertex.
            let v = c.vertices();
            Ok(vec![pair_set(t, v[0], v[1])?, pair_set(t, v[2], v[0])?])
        }
    }
}

/// Simultaneous generating set for a triple of flags, of size at most
/// floor(5d/3).
pub fn synth3(t: &FlagTuple) -> Result<GeneratingSet> {
    if t.m() != 3 {
        return Err(Error::DimensionMismatch(t.m(), 3));
    }
    let g = PrismGraph::build(t)?;
    let cls = classify(&g, t)?;
    let mut gs = GeneratingSet::default();
    for unit in cls.units() {
        gs.sets.extend(cover_unit(unit, &g, t)?);
    }

    let d = t.d();
    let (a, b, c) = (cls.a_size(), cls.b_size(), cls.c_size());
    // Per-class accounting: 18*sets <= 9|A| + 10|B| + 12|C| <= 30d, using
    // the certified inequality 3|A| + 2|B| >= 6d.
    let bound = 5 * d / 3;
    if 18 * gs.size() > 9 * a + 10 * b + 12 * c || gs.size() > bound {
        return Err(Error::InternalInconsistency(format!(
            "cover of {} sets exceeds the guaranteed bound {bound} (|A|={a}, |B|={b}, |C|={c})",
            gs.size()
        )));
    }

    #[cfg(debug_assertions)]
    {
        let grid = t.dim_grid()?;
        let path = crate::certificate::build_lattice_path(&cls, d);
        let report = crate::certificate::cost_report(&path, &grid, &cls)?;
        report.ensure()?;
        let check = verify_generating_set(t, &gs);
        if !check.pass {
            return Err(Error::InternalInconsistency(format!(
                "synthesized cover fails verification: missing {:?}",
                check.missing
            )));
        }
    }

    Ok(gs)
}

/// Per-layer coverage report.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub m: usize,
    pub d: usize,
    /// `coverage[flag][level-1]`: index of the first vector new there.
    pub coverage: Vec<Vec<Option<usize>>>,
    pub missing: Vec<LayerRef>,
    /// Sets whose witness is not new for a layer they claim.
    pub witness_failures: Vec<(usize, LayerRef)>,
    pub pass: bool,
}

/// Check a bare vector family: every layer of every flag must see a new
/// vector.
pub fn verify_vectors(t: &FlagTuple, vectors: &[Vec<Scalar>]) -> VerifyReport {
    let (m, d) = (t.m(), t.d());
    let mut coverage = vec![vec![None; d]; m];
    for (vi, v) in vectors.iter().enumerate() {
        if v.len() != d {
            continue;
        }
        for (f, cov) in coverage.iter_mut().enumerate() {
            if let Some(level) = t.flag(f).new_level_of(v) {
                cov[level - 1].get_or_insert(vi);
            }
        }
    }
    let mut missing = Vec::new();
    for (f, cov) in coverage.iter().enumerate() {
        for (l, slot) in cov.iter().enumerate() {
            if slot.is_none() {
                missing.push(LayerRef::new(f, l + 1));
            }
        }
    }
    let pass = missing.is_empty();
    VerifyReport { m, d, coverage, missing, witness_failures: Vec::new(), pass }
}

/// Check a structured generating set: coverage as above, plus each witness
/// must actually be new for every layer its set declares.
pub fn verify_generating_set(t: &FlagTuple, gs: &GeneratingSet) -> VerifyReport {
    let mut report = verify_vectors(t, &gs.vectors());
    for (si, set) in gs.sets.iter().enumerate() {
        for &layer in &set.layers {
            let ok = layer.flag < t.m()
                && layer.level >= 1
                && layer.level <= t.d()
                && set.witness.len() == t.d()
                && t.flag(layer.flag).is_new_at(&set.witness, layer.level);
            if !ok {
                report.witness_failures.push((si, layer));
            }
        }
    }
    report.pass = report.pass && report.witness_failures.is_empty();
    report
}

/// The combinatorial constraints a triple must satisfy for its minimum
/// cover to reach 5d/3 exactly.
#[derive(Clone, Debug, Serialize)]
pub struct EqualityReport {
    pub candidate: bool,
    pub d_multiple_of_3: bool,
    pub triangle_count: usize,
    pub triangle_count_ok: bool,
    pub triangles_all_incompatible: bool,
    pub non_triangle_cycles_all_even: bool,
    pub triangles_pairwise_noncrossing: bool,
    pub consecutive_edges_cross_common_triangle: bool,
}

/// Test the extremal-case constraints: the graph must consist of exactly
/// d/3 incompatible, pairwise non-crossing triangles plus even cycles, and
/// every two consecutive edges of every even cycle must cross a common
/// triangle.
pub fn is_equality_candidate(g: &PrismGraph, t: &FlagTuple) -> Result<EqualityReport> {
    let d = g.d();
    let d_multiple_of_3 = d.is_multiple_of(3);
    let triangles: Vec<&Cycle> = g.cycles().iter().filter(|c| c.is_triangle()).collect();
    let others: Vec<&Cycle> = g.cycles().iter().filter(|c| !c.is_triangle()).collect();

    let triangle_count_ok = d_multiple_of_3 && triangles.len() == d / 3;
    let mut triangles_all_incompatible = true;
    for c in &triangles {
        let v = c.vertices();
        if compatible_triple(t, v[0], v[1], v[2])? {
            triangles_all_incompatible = false;
        }
    }
    let non_triangle_cycles_all_even = others.iter().all(|c| c.is_even());
    let triangles_pairwise_noncrossing = triangles
        .iter()
        .enumerate()
        .all(|(i, a)| triangles[i + 1..].iter().all(|b| !cycles_cross(a, b)));

    let crosses_triangle = |e: (LayerRef, LayerRef), tri: &Cycle| {
        tri.edges().iter().any(|&f| edges_cross(e, f))
    };
    let mut consecutive_edges_cross_common_triangle = true;
    for cycle in others.iter().filter(|c| c.is_even()) {
        let edges = cycle.edges();
        let n = edges.len();
        for i in 0..n {
            let (e1, e2) = (edges[i], edges[(i + 1) % n]);
            let ok = triangles
                .iter()
                .any(|tri| crosses_triangle(e1, tri) && crosses_triangle(e2, tri));
            if !ok {
                consecutive_edges_cross_common_triangle = false;
            }
        }
    }

    let candidate = d_multiple_of_3
        && triangle_count_ok
        && triangles_all_incompatible
        && non_triangle_cycles_all_even
        && triangles_pairwise_noncrossing
        && consecutive_edges_cross_common_triangle;
    Ok(EqualityReport {
        candidate,
        d_multiple_of_3,
        triangle_count: triangles.len(),
        triangle_count_ok,
        triangles_all_incompatible,
        non_triangle_cycles_all_even,
        triangles_pairwise_noncrossing,
        consecutive_edges_cross_common_triangle,
    })
}
