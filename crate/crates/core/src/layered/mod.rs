//! The layered construction: a seed block code followed by subset-code
//! blocks and checksums, with exhaustive verification for short messages.

mod build;
mod checksum;
mod code;
mod verify;

pub use build::{extend, seed_code, LayeredPlan};
pub use checksum::{
    make_checksum, make_checksum_with_rows, parity_rows_for, SystematicChecksum,
    MAX_CHECKSUM_INPUT,
};
pub use code::{encode_layered, LayeredCode, Segment};
pub use verify::{all_codewords, verify_layered, MAX_LAYERED_CODEWORD, MAX_LAYERED_MESSAGE};
