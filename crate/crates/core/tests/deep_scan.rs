//! Extended randomized cross-validation, too slow for the default suite.
//! Run with:
//!
//!     cargo test -p flagspan --test deep_scan --release -- --ignored

use flagspan::certificate::{build_lattice_path, cost_report};
use flagspan::cover::{classify, is_equality_candidate, synth3, verify_generating_set};
use flagspan::oracle::mu_exact;
use flagspan::prism::PrismGraph;
use flagspan::{FieldSpec, FlagTuple};

/// Sweep hundreds of tuples over four fields at d = 3 and d = 6, checking
/// the whole pipeline agrees with the exact oracle: certificates pass, the
/// synthesis is never beaten, and the extremality verdict matches the
/// oracle in both directions.
#[test]
#[ignore = "minutes-long randomized sweep; run with --ignored"]
fn oracle_cross_validation_sweep() {
    let fields = [
        FieldSpec::Rationals,
        FieldSpec::Prime(2),
        FieldSpec::Prime(3),
        FieldSpec::Prime(5),
    ];
    let mut checked = 0usize;
    let mut extremal = 0usize;
    for &field in &fields {
        for d in [3usize, 6] {
            let cb = if field == FieldSpec::Rationals { 4 } else { 10 };
            let seeds = if d == 3 { 0..300u64 } else { 0..60u64 };
            for seed in seeds {
                let Ok(t) = FlagTuple::random(field, d, 3, 90_000 + seed, cb) else {
                    continue;
                };
                let g = PrismGraph::build(&t).unwrap();
                let cls = classify(&g, &t).unwrap();
                let grid = t.dim_grid().unwrap();
                let path = build_lattice_path(&cls, d);
                let report = cost_report(&path, &grid, &cls).unwrap();
                assert!(report.pass, "{field} d={d} seed={seed}: {:?}", report.violations);

                let gs = synth3(&t).unwrap();
                assert!(verify_generating_set(&t, &gs).pass, "{field} d={d} seed={seed}");
                let mu = mu_exact(&t).unwrap().mu;
                assert!(mu <= gs.size(), "{field} d={d} seed={seed}");

                let eq = is_equality_candidate(&g, &t).unwrap().candidate;
                assert_eq!(
                    eq,
                    mu == 5 * d / 3,
                    "{field} d={d} seed={seed}: verdict {eq} vs mu {mu}"
                );
                extremal += eq as usize;
                checked += 1;
            }
        }
    }
    println!("deep scan: {checked} instances, {extremal} extremal");
    assert!(checked > 1000 && extremal > 100);
}
