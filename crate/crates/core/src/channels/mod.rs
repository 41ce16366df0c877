//! Noise models, nearest-codeword decoding and failure-rate estimation.

mod decode;
mod pattern;
mod sim;

pub use decode::{
    decode_nearest, decode_nearest_capped, DecodeOutcome, DecodeRoute, DECODE_CAP, SCAN_LIMIT,
};
pub use pattern::{sample_pattern, ChannelSpec, ErrorPattern};
pub use sim::{
    monte_carlo_bsc, packetized_baseline, wilson_half_width, MonteCarloSummary, TrialRecord,
    MAX_PACKET_MESSAGE,
};
