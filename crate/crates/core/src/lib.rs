//! Exact-arithmetic library for simultaneous generating sets of complete
//! flags: the two-flag permutation pairing, the tripartite cycle analysis
//! behind the three-flag bound, multi-flag synthesis, verifiable cost
//! certificates, and a brute-force optimum oracle for small instances.

pub mod bruhat;
pub mod certificate;
pub mod cover;
pub mod error;
pub mod flag;
pub mod json;
pub mod matrix;
pub mod multiflag;
pub mod oracle;
pub mod prism;
pub mod rng;
pub mod scalar;
pub mod subspace;
pub mod svg;

pub use bruhat::{bruhat_perm, two_flag_generators, BruhatPerm};
pub use cover::{
    classify, cover_unit, is_equality_candidate, synth3, verify_generating_set, verify_vectors,
    CompatibleSet, CycleClassification, GeneratingSet, VerifyReport,
};
pub use certificate::{build_lattice_path, cost_report, CostReport, LatticePath};
pub use error::{Error, Result};
pub use flag::{DimGrid, Flag, FlagTuple};
pub use matrix::{EchelonBuilder, Matrix};
pub use multiflag::{mu_formula, synth_m, transverse_synth, MuValue};
pub use oracle::{enumerate_compatible, mu_exact, mu_exact_over_field, CompatibleCatalog, MuExact};
pub use prism::{
    compatible_pair, compatible_triple, cycles_cross, edges_cross, height_order, Cycle, LayerRef,
    PrismGraph,
};
pub use scalar::{FieldSpec, Scalar};
pub use subspace::{avoid_subspaces, Subspace};
