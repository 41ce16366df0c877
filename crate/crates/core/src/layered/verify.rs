use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::f2::{ceil_tol, BitVector};
use crate::layered::code::{encode_layered, LayeredCode};
use crate::report::{Counterexample, VerificationReport};

/// Largest message length the pairwise verifier enumerates.
pub const MAX_LAYERED_MESSAGE: usize = 13;
/// Codewords are packed into a `u128` during enumeration.
pub const MAX_LAYERED_CODEWORD: usize = 128;

/// Distance requirement at prefix `j`: `max(1, ceil(eps j))`, raised to
/// `ceil(2 eps j)` at checksum boundaries and at the full length, where the
/// code must again have relative distance `2 eps` as a block code.
pub(crate) fn requirement(code: &LayeredCode, boundaries: &[usize], j: usize) -> (usize, f64) {
    let eps = code.epsilon();
    let n = code.codeword_length();
    let mut real = eps * j as f64;
    if j == n || boundaries.contains(&j) {
        real = 2.0 * eps * j as f64;
    }
    (ceil_tol(real).max(1), real)
}

/// For every first-difference position `i` (1-based), the prefix lengths at
/// which a pair must be checked: the first `j` whose decodable prefix
/// reaches `i`, then every `j` where the requirement steps up.
pub(crate) fn critical_points(code: &LayeredCode) -> Vec<Vec<(usize, usize, f64)>> {
    let n = code.codeword_length();
    let m = code.message_length();
    let boundaries = code.checksum_boundaries();
    let reqs: Vec<(usize, f64)> = (0..=n).map(|j| requirement(code, &boundaries, j)).collect();
    let decodable: Vec<usize> = (0..=n).map(|j| code.decodable_prefix_length(j)).collect();
    let mut out = vec![Vec::new(); m + 1];
    for (i, list) in out.iter_mut().enumerate().skip(1) {
        let Some(first) = (1..=n).find(|&j| decodable[j] >= i) else {
            continue;
        };
        list.push((first, reqs[first].0, reqs[first].1));
        for j in first + 1..=n {
            if reqs[j].0 > reqs[j - 1].0 {
                list.push((j, reqs[j].0, reqs[j].1));
            }
        }
    }
    out
}

pub(crate) fn pack(v: &BitVector) -> u128 {
    v.iter_ones().fold(0u128, |acc, t| acc | 1u128 << t)
}

pub(crate) fn prefix_mask(j: usize) -> u128 {
    if j >= 128 {
        u128::MAX
    } else {
        (1u128 << j) - 1
    }
}

/// 1-based position of the first differing bit of two `m`-bit messages
/// indexed numerically (position 0 is the most significant bit).
pub(crate) fn first_difference(m: usize, x: u64, y: u64) -> usize {
    m - (63 - (x ^ y).leading_zeros() as usize)
}

pub(crate) fn check_scale(code: &LayeredCode) -> Result<()> {
    if code.message_length() > MAX_LAYERED_MESSAGE {
        return Err(Error::ScaleExceeded {
            needed: 1u128 << (2 * code.message_length()),
            cap: 1u128 << (2 * MAX_LAYERED_MESSAGE),
        });
    }
    if code.codeword_length() > MAX_LAYERED_CODEWORD {
        return Err(Error::ScaleExceeded {
            needed: code.codeword_length() as u128,
            cap: MAX_LAYERED_CODEWORD as u128,
        });
    }
    Ok(())
}

/// Every codeword, indexed by the message read as a big-endian integer.
pub fn all_codewords(code: &LayeredCode) -> Result<Vec<BitVector>> {
    check_scale(code)?;
    let m = code.message_length();
    (0..1u64 << m)
        .map(|x| encode_layered(code, &BitVector::from_u64(m, x)))
        .collect()
}

/// Pairwise check of the layered distance property: for every two messages
/// first differing at position `i` and every `j` with
/// `decodable_prefix_length(j) >= i`, the length-`j` prefixes differ in at
/// least `max(1, ceil(eps j))` places (`ceil(2 eps j)` at checksum
/// boundaries and at the full length). Reports the violation with the
/// smallest `(i, j, x, y)`.
pub fn verify_layered(code: &LayeredCode) -> Result<VerificationReport> {
    check_scale(code)?;
    let m = code.message_length();
    let words: Vec<u128> = all_codewords(code)?.iter().map(pack).collect();
    let critical = critical_points(code);
    let count = words.len() as u64;
    let worst = (0..count)
        .into_par_iter()
        .filter_map(|x| {
            let mut best: Option<(usize, usize, u64, usize, f64)> = None;
            for y in x + 1..count {
                let i = first_difference(m, x, y);
                let diff = words[x as usize] ^ words[y as usize];
                for &(j, req, real) in &critical[i] {
                    let d = (diff & prefix_mask(j)).count_ones() as usize;
                    if d < req {
                        if best.is_none_or(|b| (i, j) < (b.0, b.1)) {
                            best = Some((i, j, y, d, real));
                        }
                        break;
                    }
                }
            }
            best.map(|(i, j, y, d, real)| (i, j, x, y, d, real))
        })
        .min_by(|a, b| (a.0, a.1, a.2, a.3).cmp(&(b.0, b.1, b.2, b.3)));
    let pairs = count * count.saturating_sub(1) / 2;
    let report = match worst {
        None => VerificationReport::pass(pairs),
        Some((i, j, x, y, achieved, required)) => VerificationReport::fail(
            Counterexample::MessagePair {
                i,
                j,
                x: BitVector::from_u64(m, x),
                y: BitVector::from_u64(m, y),
                achieved,
                required,
            },
            pairs,
        ),
    };
    Ok(report.with_note(format!(
        "all {pairs} message pairs of length {m}, prefixes up to {}",
        code.codeword_length()
    )))
}
