//! Finite-horizon unbounded error-correcting codes over GF(2).
//!
//! An *unbounded* code encodes an endless message stream so that, for every
//! long enough prefix length `j`, the first `R·j` message bits are determined
//! by the first `j` codeword bits even after `ε·j` adversarial flips. This
//! crate materializes such codes up to a finite horizon, together with the
//! subset codes and checksums used by the layered construction, and checks
//! every claimed property with exhaustive oracles.

pub mod analysis;
pub mod channels;
pub mod error;
pub mod f2;
pub mod layered;
pub mod linear;
pub mod report;
pub mod subset;

pub use error::{Error, Result};
pub use report::{Counterexample, VerificationReport};
