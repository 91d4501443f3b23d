//! Machine-checkable certificates for the covering bound.  A lattice walk
//! from (0,0,0) to (d,d,d) hops once on every layer; the cost of a hop is
//! the jump it causes in the triple-intersection dimension.  Total cost is
//! always d, and a walk scheduled around the incompatible triangles forces
//! cost(S) <= |S|/2 on the A cycles, <= |S|/3 on the B cycles, and 0 on the
//! C triangles, which together certify 1/2|A| + 1/3|B| >= d.

use serde::Serialize;

use crate::cover::CycleClassification;
use crate::error::{Error, Result};
use crate::flag::{DimGrid, FlagTuple};
use crate::prism::{compatible_triple, triple_witness, Cycle, LayerRef, PrismGraph};
use crate::rng::SplitMix64;

/// One step of the walk: the layer hopped on and the position reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Hop {
    pub layer: LayerRef,
    pub position: [usize; 3],
}

/// A monotone walk visiting each of the 3d layers exactly once.
#[derive(Clone, Debug)]
pub struct LatticePath {
    hops: Vec<Hop>,
}

impl LatticePath {
    pub fn hops(&self) -> &[Hop] {
        &self.hops
    }

    pub fn len(&self) -> usize {
        self.hops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hops.is_empty()
    }
}

struct PathBuilder {
    pos: [usize; 3],
    hops: Vec<Hop>,
}

impl PathBuilder {
    fn new() -> Self {
        PathBuilder { pos: [0, 0, 0], hops: Vec::new() }
    }

    fn hop(&mut self, flag: usize) {
        self.pos[flag] += 1;
        self.hops.push(Hop { layer: LayerRef::new(flag, self.pos[flag]), position: self.pos });
    }

    fn hop_until(&mut self, flag: usize, target_exclusive: usize) {
        while self.pos[flag] + 1 < target_exclusive {
            self.hop(flag);
        }
    }
}

/// The canonical schedule: walk each column up to just below the next
/// incompatible triangle (first column, then second, then third), hop the
/// triangle's three layers in column order, and repeat; finish the columns
/// after the last triangle.  Relies on the C triangles being ordered by
/// height.
pub fn build_lattice_path(cls: &CycleClassification, d: usize) -> LatticePath {
    let mut b = PathBuilder::new();
    for tri in &cls.c_triangles {
        let (i, j, k) = (tri.min_level(0), tri.min_level(1), tri.min_level(2));
        b.hop_until(0, i);
        b.hop_until(1, j);
        b.hop_until(2, k);
        b.hop(0);
        b.hop(1);
        b.hop(2);
    }
    b.hop_until(0, d + 1);
    b.hop_until(1, d + 1);
    b.hop_until(2, d + 1);
    debug_assert_eq!(b.pos, [d, d, d]);
    LatticePath { hops: b.hops }
}

/// A seeded uniformly random monotone walk, for property tests that hold
/// on every path.
pub fn random_lattice_path(d: usize, seed: u64) -> LatticePath {
    let mut rng = SplitMix64::new(seed);
    let mut b = PathBuilder::new();
    while b.pos != [d, d, d] {
        let open: Vec<usize> = (0..3).filter(|&f| b.pos[f] < d).collect();
        let f = open[rng.below(open.len() as u64) as usize];
        b.hop(f);
    }
    LatticePath { hops: b.hops }
}

/// Per-layer costs along a path: the dimension increment each hop causes.
pub fn vertex_costs(path: &LatticePath, grid: &DimGrid) -> Vec<(LayerRef, usize)> {
    let mut prev = 0;
    path.hops
        .iter()
        .map(|h| {
            let dim = grid.get(h.position[0], h.position[1], h.position[2]);
            let cost = dim - prev;
            prev = dim;
            (h.layer, cost)
        })
        .collect()
}

/// No two layers of cost 1 are joined by a matching edge.  This holds for
/// every monotone walk, not just the canonical one.
pub fn cost_one_is_independent(g: &PrismGraph, costs: &[(LayerRef, usize)]) -> bool {
    let mut table = vec![[0usize; 3]; g.d() + 1];
    for (l, c) in costs {
        table[l.level][l.flag] = *c;
    }
    g.g_edges()
        .iter()
        .all(|(a, b)| table[a.level][a.flag] == 0 || table[b.level][b.flag] == 0)
}

#[derive(Clone, Debug, Serialize)]
pub struct CycleCost {
    pub class: char,
    pub start: String,
    pub length: usize,
    pub cost: usize,
}

/// The full certificate: classification sizes, per-cycle costs, the class
/// totals, and the inequality 1/2|A| + 1/3|B| >= d evaluated in sixths so
/// everything stays integral.
#[derive(Clone, Debug, Serialize)]
pub struct CostReport {
    pub d: usize,
    pub size_a: usize,
    pub size_b: usize,
    pub size_c: usize,
    pub cost_a: usize,
    pub cost_b: usize,
    pub cost_c: usize,
    pub total_cost: usize,
    pub per_cycle: Vec<CycleCost>,
    /// 3|A| + 2|B|, to compare against 6d.
    pub inequality_lhs_sixths: usize,
    pub inequality_rhs_sixths: usize,
    pub violations: Vec<String>,
    pub pass: bool,
}

impl CostReport {
    pub fn ensure(&self) -> Result<()> {
        if self.pass {
            Ok(())
        } else {
            Err(Error::CertificateViolation(self.violations.join("; ")))
        }
    }
}

/// Evaluate the certificate for a walk against the grid and classification.
/// Bound violations are collected, not panicked on: they indicate a bug in
/// the caller's inputs and surface through `ensure`.
pub fn cost_report(
    path: &LatticePath,
    grid: &DimGrid,
    cls: &CycleClassification,
) -> Result<CostReport> {
    let d = grid.d();
    if path.len() != 3 * d {
        return Err(Error::DimensionMismatch(path.len(), 3 * d));
    }
    let costs = vertex_costs(path, grid);
    let mut table = vec![[usize::MAX; 3]; d + 1];
    for (l, c) in &costs {
        if *c > 1 || table[l.level][l.flag] != usize::MAX {
            return Err(Error::InternalInconsistency(format!(
                "bad hop on {l}: cost {c} or repeated visit"
            )));
        }
        table[l.level][l.flag] = *c;
    }

    let cycle_cost = |cycle: &Cycle| -> usize {
        cycle.vertices().iter().map(|v| table[v.level][v.flag]).sum()
    };

    let mut violations = Vec::new();
    let mut per_cycle = Vec::new();
    let (mut cost_a, mut cost_b, mut cost_c) = (0, 0, 0);
    for unit in &cls.a_units {
        for cycle in unit.cycles() {
            let cost = cycle_cost(cycle);
            cost_a += cost;
            if 2 * cost > cycle.len() {
                violations.push(format!(
                    "A-cycle at {} has cost {cost} > {}/2",
                    cycle.vertices()[0],
                    cycle.len()
                ));
            }
            per_cycle.push(CycleCost {
                class: 'A',
                start: cycle.vertices()[0].to_string(),
                length: cycle.len(),
                cost,
            });
        }
    }
    for cycle in &cls.b_cycles {
        let cost = cycle_cost(cycle);
        cost_b += cost;
        if 3 * cost > cycle.len() {
            violations.push(format!(
                "B-cycle at {} has cost {cost} > {}/3",
                cycle.vertices()[0],
                cycle.len()
            ));
        }
        per_cycle.push(CycleCost {
            class: 'B',
            start: cycle.vertices()[0].to_string(),
            length: cycle.len(),
            cost,
        });
    }
    for cycle in &cls.c_triangles {
        let cost = cycle_cost(cycle);
        cost_c += cost;
        if cost != 0 {
            violations.push(format!(
                "C-triangle at {} has nonzero cost {cost}",
                cycle.vertices()[0]
            ));
        }
        per_cycle.push(CycleCost {
            class: 'C',
            start: cycle.vertices()[0].to_string(),
            length: cycle.len(),
            cost,
        });
    }

    let total_cost = cost_a + cost_b + cost_c;
    if total_cost != d {
        violations.push(format!("total cost {total_cost} != {d}"));
    }
    let (size_a, size_b, size_c) = (cls.a_size(), cls.b_size(), cls.c_size());
    let inequality_lhs_sixths = 3 * size_a + 2 * size_b;
    let inequality_rhs_sixths = 6 * d;
    if inequality_lhs_sixths < inequality_rhs_sixths {
        violations.push(format!(
            "1/2|A| + 1/3|B| = {inequality_lhs_sixths}/6 < d = {inequality_rhs_sixths}/6"
        ));
    }

    let pass = violations.is_empty();
    Ok(CostReport {
        d,
        size_a,
        size_b,
        size_c,
        cost_a,
        cost_b,
        cost_c,
        total_cost,
        per_cycle,
        inequality_lhs_sixths,
        inequality_rhs_sixths,
        violations,
        pass,
    })
}

/// When a column-`x` layer's matching partner on column `y` sits strictly
/// higher than the walk's current `y`-coordinate, hopping it cannot raise
/// the triple intersection: the meet at level `i` equals the meet at
/// `i - 1`.  Returns `None` when the precondition `j < sigma_xy(i)` fails
/// (nothing is claimed there).
pub fn check_partner_collapse(
    t: &FlagTuple,
    g: &PrismGraph,
    x: usize,
    y: usize,
    i: usize,
    j: usize,
    k: usize,
) -> Result<Option<bool>> {
    if x > 2 || y > 2 || x == y {
        return Err(Error::DuplicateFlag);
    }
    let d = t.d();
    if i == 0 || j == 0 || k == 0 || i > d || j > d || k > d {
        return Err(Error::Parse("levels out of range".into()));
    }
    if j >= g.matching_partner(x, y, i) {
        return Ok(None);
    }
    let z = 3 - x - y;
    let meet_yz = t.layer(y, j).intersect(&t.layer(z, k))?;
    let hi = t.layer(x, i).intersect(&meet_yz)?.dim();
    let lo = t.layer(x, i - 1).intersect(&meet_yz)?.dim();
    Ok(Some(hi == lo))
}

/// For a matching triangle: if no common witness exists, the triple meet
/// collapses to the meet one level down in every coordinate; if a witness
/// exists, it must be new for all three layers and the meet must strictly
/// grow.
pub fn check_triangle_collapse(t: &FlagTuple, g: &PrismGraph, tri: &Cycle) -> Result<bool> {
    let v = tri.vertices();
    if tri.len() != 3
        || g.next_vertex(v[0]) != v[1]
        || g.next_vertex(v[1]) != v[2]
        || g.next_vertex(v[2]) != v[0]
    {
        return Err(Error::Parse("not a matching triangle".into()));
    }
    let (i, j, k) = (v[0].level, v[1].level, v[2].level);
    let meet = t
        .layer(0, i)
        .intersect(&t.layer(1, j))?
        .intersect(&t.layer(2, k))?;
    let lowered = t
        .layer(0, i - 1)
        .intersect(&t.layer(1, j - 1))?
        .intersect(&t.layer(2, k - 1))?;
    if compatible_triple(t, v[0], v[1], v[2])? {
        let w = triple_witness(t, v[0], v[1], v[2])?
            .ok_or_else(|| Error::InternalInconsistency("compatible without witness".into()))?;
        Ok(meet.contains(&w)
            && t.flag(0).is_new_at(&w, i)
            && t.flag(1).is_new_at(&w, j)
            && t.flag(2).is_new_at(&w, k)
            && meet.dim() > lowered.dim())
    } else {
        Ok(meet.dim() == lowered.dim())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::classify;
    use crate::flag::Flag;
    use crate::scalar::FieldSpec;

    fn generic_triple(d: usize, seed: u64) -> FlagTuple {
        FlagTuple::random_transverse(FieldSpec::Rationals, d, 3, seed, 10).unwrap().0
    }

    fn layer_names(p: &LatticePath) -> Vec<String> {
        p.hops().iter().map(|h| h.layer.to_string()).collect()
    }

    #[test]
    fn schedule_without_triangles_walks_column_by_column() {
        let cls = CycleClassification {
            a_units: Vec::new(),
            b_cycles: Vec::new(),
            c_triangles: Vec::new(),
        };
        let p = build_lattice_path(&cls, 2);
        assert_eq!(layer_names(&p), vec!["U1", "U2", "V1", "V2", "W1", "W2"]);
    }

    #[test]
    fn schedule_wraps_each_triangle() {
        // The generic K^3 triangle sits at the middle levels (2,2,2), so
        // the walk reaches it after one hop per column.
        let t = generic_triple(3, 7);
        let g = PrismGraph::build(&t).unwrap();
        let cls = classify(&g, &t).unwrap();
        let p = build_lattice_path(&cls, 3);
        assert_eq!(
            layer_names(&p),
            vec!["U1", "V1", "W1", "U2", "V2", "W2", "U3", "V3", "W3"]
        );
        assert_eq!(p.len(), 9);
    }

    #[test]
    fn paths_always_have_3d_hops() {
        for d in 1..=5 {
            let p = random_lattice_path(d, 7 * d as u64);
            assert_eq!(p.len(), 3 * d);
            assert_eq!(p.hops().last().unwrap().position, [d, d, d]);
        }
    }

    #[test]
    fn generic_k3_certificate() {
        let t = generic_triple(3, 7);
        let g = PrismGraph::build(&t).unwrap();
        let cls = classify(&g, &t).unwrap();
        let grid = t.dim_grid().unwrap();
        let path = build_lattice_path(&cls, 3);
        let report = cost_report(&path, &grid, &cls).unwrap();
        assert!(report.pass, "{:?}", report.violations);
        assert_eq!(report.total_cost, 3);
        assert_eq!(report.cost_c, 0);
        // 1/2 * 6 + 1/3 * 0 = 3 = d: the block is extremal.
        assert_eq!(report.inequality_lhs_sixths, report.inequality_rhs_sixths);
    }

    #[test]
    fn equal_flags_concentrate_cost_on_triangles() {
        let f = Flag::random(FieldSpec::Rationals, 4, 3, 10).unwrap();
        let t = FlagTuple::new(vec![f.clone(), f.clone(), f]).unwrap();
        let g = PrismGraph::build(&t).unwrap();
        let cls = classify(&g, &t).unwrap();
        let grid = t.dim_grid().unwrap();
        let path = build_lattice_path(&cls, 4);
        let report = cost_report(&path, &grid, &cls).unwrap();
        assert!(report.pass);
        assert_eq!(report.total_cost, 4);
        // Each witnessed triangle in A absorbs exactly one unit of cost.
        for cc in &report.per_cycle {
            assert_eq!(cc.class, 'A');
            assert_eq!(cc.cost, 1);
        }
    }

    #[test]
    fn b_cycles_pay_only_on_the_last_column() {
        // A generic block (even hexagon in A, triangle in C) summed with a
        // lone-9-cycle block (B).  On the canonical walk every first- and
        // second-column vertex of the B cycle still has an unhopped
        // matching partner in the third column, so only its d/3 third-column
        // vertices can cost anything.
        let t = FlagTuple::random_transverse(FieldSpec::Rationals, 3, 3, 7, 10)
            .unwrap()
            .0
            .direct_sum(&FlagTuple::random(FieldSpec::Rationals, 3, 3, 2, 3).unwrap())
            .unwrap();
        let g = PrismGraph::build(&t).unwrap();
        let cls = classify(&g, &t).unwrap();
        assert_eq!(cls.b_size(), 9);
        let grid = t.dim_grid().unwrap();
        let path = build_lattice_path(&cls, 6);
        let report = cost_report(&path, &grid, &cls).unwrap();
        assert!(report.pass, "{:?}", report.violations);
        let costs = vertex_costs(&path, &grid);
        let lookup = |v: &LayerRef| costs.iter().find(|(l, _)| l == v).unwrap().1;
        for cycle in &cls.b_cycles {
            for v in cycle.vertices() {
                if v.flag < 2 {
                    assert_eq!(lookup(v), 0, "B vertex {v} must cost 0");
                }
            }
            let total: usize = cycle.vertices().iter().map(&lookup).sum();
            assert!(3 * total <= cycle.len());
        }
    }

    #[test]
    fn cost_one_layers_are_independent_on_any_path() {
        for seed in 0..4u64 {
            let t = FlagTuple::random(FieldSpec::Rationals, 4, 3, 600 + seed, 10).unwrap();
            let g = PrismGraph::build(&t).unwrap();
            let grid = t.dim_grid().unwrap();
            for path_seed in 0..10 {
                let p = random_lattice_path(4, 1000 * seed + path_seed);
                let costs = vertex_costs(&p, &grid);
                assert!(cost_one_is_independent(&g, &costs));
                let total: usize = costs.iter().map(|(_, c)| *c).sum();
                assert_eq!(total, 4);
            }
        }
    }

    #[test]
    fn partner_collapse_holds_everywhere() {
        for (d, seed) in [(3usize, 71u64), (4, 72)] {
            let t = FlagTuple::random(FieldSpec::Rationals, d, 3, seed, 10).unwrap();
            let g = PrismGraph::build(&t).unwrap();
            for x in 0..3 {
                for y in 0..3 {
                    if x == y {
                        continue;
                    }
                    for i in 1..=d {
                        for j in 1..=d {
                            for k in 1..=d {
                                if let Some(ok) =
                                    check_partner_collapse(&t, &g, x, y, i, j, k).unwrap()
                                {
                                    assert!(ok, "x={x} y={y} i={i} j={j} k={k} seed={seed}");
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn triangle_collapse_holds_for_matching_triangles() {
        // Incompatible triangle: the generic block.
        let t = generic_triple(3, 7);
        let g = PrismGraph::build(&t).unwrap();
        let tri = g.cycles().iter().find(|c| c.is_triangle()).unwrap();
        assert!(check_triangle_collapse(&t, &g, tri).unwrap());

        // Compatible triangles: equal flags.
        let f = Flag::random(FieldSpec::Rationals, 3, 8, 10).unwrap();
        let eq = FlagTuple::new(vec![f.clone(), f.clone(), f]).unwrap();
        let ge = PrismGraph::build(&eq).unwrap();
        for tri in ge.cycles() {
            assert!(check_triangle_collapse(&eq, &ge, tri).unwrap());
        }
    }

    #[test]
    fn non_triangles_are_rejected() {
        let t = generic_triple(3, 7);
        let g = PrismGraph::build(&t).unwrap();
        let hex = g.cycles().iter().find(|c| c.len() == 6).unwrap();
        assert!(check_triangle_collapse(&t, &g, hex).is_err());
    }
}
