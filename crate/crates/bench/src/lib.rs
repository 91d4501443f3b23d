//! Shared fixtures for the benchmark suite.

use flagspan::{FieldSpec, FlagTuple};

/// A seeded random tuple over the rationals.
pub fn rational_tuple(d: usize, m: usize, seed: u64) -> FlagTuple {
    FlagTuple::random(FieldSpec::Rationals, d, m, seed, 10).expect("sampling succeeds")
}

/// A seeded random tuple over F_5.
pub fn f5_tuple(d: usize, m: usize, seed: u64) -> FlagTuple {
    FlagTuple::random(FieldSpec::prime(5).unwrap(), d, m, seed, 10).expect("sampling succeeds")
}

/// A transverse triple over the rationals.
pub fn transverse_triple(d: usize, seed: u64) -> FlagTuple {
    FlagTuple::random_transverse(FieldSpec::Rationals, d, 3, seed, 10)
        .expect("transversality is generic")
        .0
}
