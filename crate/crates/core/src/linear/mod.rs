//! Prefix-supported random linear unbounded codes: parameters, sampling,
//! encoding and the exhaustive distance verifier.

mod plan;
mod schedule;
mod verify;

pub use plan::{bij_log_prob_bound, default_tau, feasibility_margin, LinearCodePlan};
pub use schedule::{sample_generator, GeneratorSchedule};
pub use verify::{
    construct_with_criterion, construct_with_retries, prefix_distance, verify_distance,
    verify_random_error_distance, verify_unbounded_distance, DistanceCriterion, DEFAULT_CAP,
};

pub(crate) use schedule::{parse_header, parse_num};
