//! Rank, redundancy and prefix-entropy profiles, and checkers for the
//! inequalities an unbounded code must satisfy.

mod entropy;
mod profile;

pub use entropy::{prefix_entropy_profile, PaddedEncoder, PrefixEncoder, MAX_ENTROPY_MESSAGE};
pub use profile::{
    check_entropy_r_upper, check_linearsub, check_redundancy_upper, profile_records,
    rank_profile, RankProfile, RedundancyProfile,
};
