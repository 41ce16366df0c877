//! Subset codes: families of disjoint subsets of `F_2^n` whose points in
//! different subsets are far apart. The subset index survives errors; the
//! position inside the subset is only recoverable from an exact word.

mod code;
mod construct;

pub use code::{verify_subset_distance, SubsetCode, SubsetCodeParams, MAX_DIMENSION, MAX_VERIFY_POINTS};
pub use construct::{
    greedy_construct, greedy_radii, harper_impossibility_t, linear_subset_bound_exponent,
    subset_diagnostics, trivial_two_set, GreedyRadii, GreedyState, SubsetDiagnostics,
    FULL_SCAN_DIMENSION, MAX_BITMAP_DIMENSION,
};
