use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Binary entropy `H(p) = -p log2 p - (1-p) log2 (1-p)`, with `H(0) = H(1) = 0`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain {
            what: "binary entropy argument",
            value: p,
        });
    }
    Ok(entropy_unchecked(p))
}

pub(crate) fn entropy_unchecked(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

/// The unique `p` in `[0, 1/2]` with `|H(p) - y| <= 1e-12`, by bisection.
pub fn binary_entropy_inverse(y: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::Domain {
            what: "binary entropy value",
            value: y,
        });
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    if y == 1.0 {
        return Ok(0.5);
    }
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let h = entropy_unchecked(mid);
        if (h - y).abs() <= 1e-13 {
            return Ok(mid);
        }
        if h < y {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo).abs() < f64::EPSILON {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= BigUint::from(n - i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

/// `|B(r)|` in `F_2^n`: the exact sum of `C(n, i)` for `i <= min(r, n)`.
pub fn ball_size(n: usize, r: usize) -> BigUint {
    let mut term = BigUint::one();
    let mut total = BigUint::one();
    for i in 0..r.min(n) {
        term = term * BigUint::from(n - i) / BigUint::from(i + 1);
        total += &term;
    }
    total
}

/// `|B(r)|` as a `u64`, for callers that enumerate the ball explicitly.
pub fn ball_size_u64(n: usize, r: usize) -> Option<u64> {
    u64::try_from(ball_size(n, r)).ok()
}

/// `log2 |B(r)|` evaluated in log space, for dimensions where the exact
/// count is unwieldy.
pub fn log2_ball_size(n: usize, r: usize) -> f64 {
    let r = r.min(n);
    let mut ln_terms = Vec::with_capacity(r + 1);
    let mut ln_c = 0.0f64;
    ln_terms.push(ln_c);
    for i in 0..r {
        ln_c += ((n - i) as f64).ln() - ((i + 1) as f64).ln();
        ln_terms.push(ln_c);
    }
    let max = ln_terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = ln_terms.iter().map(|t| (t - max).exp()).sum();
    (max + sum.ln()) / std::f64::consts::LN_2
}

/// Largest `r` with `|B(r)| <= bound`; `None` if even `|B(0)| = 1` exceeds it.
pub fn max_radius_within(n: usize, bound: &BigUint) -> Option<usize> {
    (0..=n).take_while(|&r| ball_size(n, r) <= *bound).last()
}

/// Smallest `r` with `|B(r)| >= bound` (at most `n`).
pub fn min_radius_reaching(n: usize, bound: &BigUint) -> usize {
    (0..=n).find(|&r| ball_size(n, r) >= *bound).unwrap_or(n)
}
