use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::f2::entropy::{ball_size, max_radius_within, min_radius_reaching};
use crate::f2::{binary_entropy, binary_entropy_inverse, ceil_tol, floor_tol, BitVector, SeededRandomSource};
use crate::subset::code::{ball_masks, SubsetCode, SubsetCodeParams};

/// Dimension limit for constructions that keep a bitmap over `F_2^n`.
pub const MAX_BITMAP_DIMENSION: usize = 24;

/// Dimension up to which an exhausted candidate search falls back to a
/// full scan of the space.
pub const FULL_SCAN_DIMENSION: usize = 20;

/// Two subsets: the light vectors (weight `< (1-delta)n/2`) and the heavy
/// ones (weight `> (1+delta)n/2`).
///
/// The thresholds are clamped to `0` and `n` so that `delta = 1` gives the
/// pair `{0...0}`, `{1...1}`.
pub fn trivial_two_set(n: usize, delta: f64) -> Result<SubsetCode> {
    if n == 0 || n > MAX_BITMAP_DIMENSION {
        return Err(Error::Degenerate(format!(
            "dimension {n} outside 1..={MAX_BITMAP_DIMENSION}"
        )));
    }
    if !(delta > 0.0 && delta <= 1.0) || (delta * n as f64) < 1.0 - 1e-9 {
        return Err(Error::Degenerate(format!(
            "delta={delta} gives delta*n below one bit at n={n}"
        )));
    }
    let a = (1.0 - delta) * n as f64 / 2.0;
    let b = (1.0 + delta) * n as f64 / 2.0;
    let low_max = ceil_tol(a).saturating_sub(1);
    let high_min = (floor_tol(b) + 1).min(n);
    let required = ceil_tol(delta * n as f64);
    if high_min <= low_max || high_min - low_max < required {
        return Err(Error::Degenerate(format!(
            "weight thresholds {low_max} and {high_min} leave no room for distance {required}"
        )));
    }
    let mut low = Vec::new();
    let mut high = Vec::new();
    for v in 0u64..(1u64 << n) {
        let w = v.count_ones() as usize;
        if w <= low_max {
            low.push(BitVector::from_u64(n, v));
        } else if w >= high_min {
            high.push(BitVector::from_u64(n, v));
        }
    }
    let t = low.len().min(high.len());
    SubsetCode::new(
        SubsetCodeParams { k: 2, t, delta, n },
        vec![low, high],
        None,
    )
}

/// Radii used by the greedy construction for `K = 2^(k-1)` subsets.
#[derive(Clone, Debug, PartialEq)]
pub struct GreedyRadii {
    /// Largest `r` with `|B(r)| <= 2^(n-k)`.
    pub outer: usize,
    /// `outer - floor(delta n)`.
    pub inner: usize,
    /// `ceil(|B(inner)| / 2)`, the size each subset must reach.
    pub target: usize,
}

pub fn greedy_radii(n: usize, k: usize, delta: f64) -> Result<GreedyRadii> {
    if k == 0 || k > n {
        return Err(Error::Degenerate(format!("need 1 <= k <= n, got k={k} n={n}")));
    }
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::Domain {
            what: "relative distance delta",
            value: delta,
        });
    }
    let budget = BigUint::one() << (n - k);
    let outer = max_radius_within(n, &budget).expect("the radius-0 ball has one point");
    let shrink = floor_tol(delta * n as f64);
    if shrink > outer {
        return Err(Error::Degenerate(format!(
            "outer radius {outer} is smaller than floor(delta n) = {shrink}"
        )));
    }
    let inner = outer - shrink;
    let ball = u64::try_from(ball_size(n, inner)).expect("n <= 24");
    Ok(GreedyRadii {
        outer,
        inner,
        target: ball.div_ceil(2) as usize,
    })
}

/// The greedy loop in progress: the unclaimed points `P` and the subsets
/// built so far.
pub struct GreedyState {
    n: usize,
    delta: f64,
    radii: GreedyRadii,
    remaining: Vec<u64>,
    remaining_count: u64,
    inner_masks: Vec<u64>,
    outer_masks: Vec<u64>,
    subsets: Vec<Vec<BitVector>>,
    centers: Vec<BitVector>,
}

impl GreedyState {
    pub fn new(n: usize, k: usize, delta: f64) -> Result<Self> {
        if n > MAX_BITMAP_DIMENSION {
            return Err(Error::Degenerate(format!(
                "dimension {n} above the bitmap limit {MAX_BITMAP_DIMENSION}"
            )));
        }
        let radii = greedy_radii(n, k, delta)?;
        let points = 1u64 << n;
        let mut remaining = vec![u64::MAX; points.div_ceil(64) as usize];
        if !points.is_multiple_of(64) {
            remaining[0] = (1u64 << points) - 1;
        }
        Ok(GreedyState {
            n,
            delta,
            inner_masks: ball_masks(n, radii.inner),
            outer_masks: ball_masks(n, radii.outer),
            radii,
            remaining,
            remaining_count: points,
            subsets: Vec::new(),
            centers: Vec::new(),
        })
    }

    pub fn radii(&self) -> &GreedyRadii {
        &self.radii
    }

    pub fn is_remaining(&self, point: u64) -> bool {
        self.remaining[(point / 64) as usize] >> (point % 64) & 1 == 1
    }

    pub fn remaining_count(&self) -> u64 {
        self.remaining_count
    }

    pub fn subsets(&self) -> &[Vec<BitVector>] {
        &self.subsets
    }

    fn clear(&mut self, point: u64) {
        self.remaining[(point / 64) as usize] &= !(1u64 << (point % 64));
    }

    fn inner_hits(&self, center: u64) -> usize {
        self.inner_masks
            .iter()
            .filter(|&&m| self.is_remaining(center ^ m))
            .count()
    }

    /// One iteration: pick a center whose inner ball keeps at least
    /// `radii.target` unclaimed points (sampling up to `candidate_cap`
    /// uniform candidates, then scanning when `n <= 20`), claim those points
    /// as the next subset and remove the outer ball from `P`. Returns the
    /// number of points removed.
    pub fn step(&mut self, rng: &mut SeededRandomSource, candidate_cap: usize) -> Result<u64> {
        let space = 1u64 << self.n;
        let mut center = None;
        for _ in 0..candidate_cap {
            let c = rng.below(space);
            if self.inner_hits(c) >= self.radii.target {
                center = Some(c);
                break;
            }
        }
        if center.is_none() && self.n <= FULL_SCAN_DIMENSION {
            center = (0..space).find(|&c| self.inner_hits(c) >= self.radii.target);
        }
        let center = center.ok_or(Error::ConstructionFailed {
            attempts: candidate_cap,
            last: None,
        })?;
        let mut subset: Vec<BitVector> = self
            .inner_masks
            .iter()
            .map(|&m| center ^ m)
            .filter(|&p| self.is_remaining(p))
            .map(|p| BitVector::from_u64(self.n, p))
            .collect();
        subset.sort();
        let mut removed = 0;
        for m in self.outer_masks.clone() {
            let p = center ^ m;
            if self.is_remaining(p) {
                self.clear(p);
                removed += 1;
            }
        }
        self.remaining_count -= removed;
        self.subsets.push(subset);
        self.centers.push(BitVector::from_u64(self.n, center));
        Ok(removed)
    }

    /// Packages the subsets; `T` is the smallest subset size.
    pub fn finish(self) -> Result<SubsetCode> {
        let t = self.subsets.iter().map(Vec::len).min().unwrap_or(0);
        SubsetCode::new(
            SubsetCodeParams {
                k: self.subsets.len(),
                t,
                delta: self.delta,
                n: self.n,
            },
            self.subsets,
            Some(self.centers),
        )
    }
}

/// Greedy construction of `2^(k-1)` subsets: each is the unclaimed part of a
/// ball of radius `r - floor(delta n)` around a fresh center, after which the
/// radius-`r` ball around that center is withdrawn from play.
pub fn greedy_construct(
    n: usize,
    k: usize,
    delta: f64,
    seed: u64,
    candidate_cap: usize,
) -> Result<SubsetCode> {
    let mut state = GreedyState::new(n, k, delta)?;
    let mut rng = SeededRandomSource::new(seed);
    for _ in 0..1usize << (k - 1) {
        state.step(&mut rng, candidate_cap)?;
    }
    state.finish()
}

/// Size that no `(2^k, T, delta, n)` subset code can reach:
/// `|B(ceil(r - delta n / 2) + 2)|` with `r` the smallest radius such that
/// `|B(r)| >= 2^(n-k)`. Returns 1 when the radius is negative.
pub fn harper_impossibility_t(n: usize, k: usize, delta: f64) -> BigUint {
    let budget = BigUint::one() << n.saturating_sub(k);
    let r = min_radius_reaching(n, &budget);
    let radius = (r as f64 - delta * n as f64 / 2.0 - 1e-9).ceil() as i64 + 2;
    if radius < 0 {
        return BigUint::one();
    }
    ball_size(n, radius as usize)
}

/// Per-coordinate exponent bounding the subset size of a linear subset
/// code with `2^((1-alpha) n)` subsets: `alpha - (delta/2) log2(alpha / (delta/2))`.
/// A leading-order diagnostic.
pub fn linear_subset_bound_exponent(alpha: f64, delta: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain {
            what: "alpha",
            value: alpha,
        });
    }
    if !(delta > 0.0 && delta < alpha) {
        return Err(Error::Domain {
            what: "delta (needs 0 < delta < alpha)",
            value: delta,
        });
    }
    let half = delta / 2.0;
    Ok(alpha - half * (alpha / half).log2())
}

/// Leading-order subset-code exponents at the operating point of the
/// layered construction for a given `eps`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubsetDiagnostics {
    pub delta: f64,
    pub ell: f64,
    pub alpha: f64,
    /// `H(H^-1(alpha) - delta/2)`: no subset code exceeds this exponent.
    pub harper: f64,
    /// `H(H^-1(alpha) - delta)`: the greedy construction reaches this.
    pub greedy: f64,
    /// Bound for linear subset codes, NaN when `delta >= alpha`.
    pub linear: f64,
    /// Whether `delta <= alpha / (10 log2(1/alpha))`, the reading adopted
    /// for "delta much smaller than alpha / log(1/alpha)".
    pub small_delta: bool,
}

/// `delta = 2 sqrt(eps / log2 log2(1/eps))`,
/// `ell = log2(1/eps) / sqrt(log2 log2(1/eps))`, `alpha = 1 / (ell + 1)`.
pub fn subset_diagnostics(eps: f64) -> Result<SubsetDiagnostics> {
    if !(eps > 0.0 && eps < 0.25) {
        return Err(Error::Domain {
            what: "epsilon for subset diagnostics",
            value: eps,
        });
    }
    let lg = (1.0 / eps).log2();
    let lglg = lg.log2();
    let delta = 2.0 * (eps / lglg).sqrt();
    let ell = lg / lglg.sqrt();
    let alpha = 1.0 / (ell + 1.0);
    let rho = binary_entropy_inverse(alpha)?;
    let exponent = |shrink: f64| {
        let x = rho - shrink;
        if x < 0.0 {
            f64::NAN
        } else {
            binary_entropy(x).unwrap_or(f64::NAN)
        }
    };
    Ok(SubsetDiagnostics {
        delta,
        ell,
        alpha,
        harper: exponent(delta / 2.0),
        greedy: exponent(delta),
        linear: linear_subset_bound_exponent(alpha, delta).unwrap_or(f64::NAN),
        small_delta: delta <= alpha / (10.0 * (1.0 / alpha).log2()),
    })
}
