//! GF(2) vectors and matrices, Hamming metrics and the entropy / ball-size
//! numerics shared by the rest of the crate.

mod bitvec;
pub mod entropy;
mod matrix;
pub mod rng;

pub use bitvec::{hamming_distance, BitVector};
pub use entropy::{ball_size, binary_entropy, binary_entropy_inverse, log2_ball_size};
pub use matrix::{lex_min_in_coset, rank_gf2, BitMatrix, Eliminator};
pub use rng::SeededRandomSource;

/// Tolerance for rounding real products like `0.7 * 10` that land a hair
/// above or below an integer.
const ROUND_SLACK: f64 = 1e-9;

/// `ceil(x)`, treating values within `1e-9` of an integer as that integer.
pub fn ceil_tol(x: f64) -> usize {
    if x <= 0.0 {
        0
    } else {
        (x - ROUND_SLACK).ceil().max(0.0) as usize
    }
}

/// `floor(x)`, treating values within `1e-9` of an integer as that integer.
pub fn floor_tol(x: f64) -> usize {
    if x <= 0.0 {
        0
    } else {
        (x + ROUND_SLACK).floor() as usize
    }
}

/// Visits every `w`-subset of `0..n` in lexicographic order, stopping early
/// when the callback returns `false`. Returns whether the walk completed.
pub fn for_each_combination(n: usize, w: usize, mut visit: impl FnMut(&[usize]) -> bool) -> bool {
    if w > n {
        return true;
    }
    let mut idx: Vec<usize> = (0..w).collect();
    loop {
        if !visit(&idx) {
            return false;
        }
        // advance to the next combination
        let mut t = w;
        loop {
            if t == 0 {
                return true;
            }
            t -= 1;
            if idx[t] != t + n - w {
                break;
            }
            if t == 0 {
                return true;
            }
        }
        idx[t] += 1;
        for u in t + 1..w {
            idx[u] = idx[u - 1] + 1;
        }
    }
}
