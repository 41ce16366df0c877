use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::f2::{ceil_tol, hamming_distance, BitVector};
use crate::linear::{parse_header, parse_num};
use crate::report::{Counterexample, VerificationReport};

/// Largest ambient dimension supported; points are handled as machine
/// integers internally.
pub const MAX_DIMENSION: usize = 32;

/// Largest total point count accepted by [`verify_subset_distance`].
pub const MAX_VERIFY_POINTS: usize = 1 << 20;

/// `(K, T, delta, n)`: `K` disjoint subsets of `F_2^n`, each with at least
/// `T` points, points of different subsets at distance `>= ceil(delta n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubsetCodeParams {
    pub k: usize,
    pub t: usize,
    pub delta: f64,
    pub n: usize,
}

impl SubsetCodeParams {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.t == 0 {
            return Err(Error::Degenerate("K and T must be positive".into()));
        }
        if !(self.delta >= 0.0 && self.delta <= 1.0) {
            return Err(Error::Domain {
                what: "relative distance delta",
                value: self.delta,
            });
        }
        if self.n == 0 || self.n > MAX_DIMENSION {
            return Err(Error::Degenerate(format!(
                "dimension {} outside 1..={MAX_DIMENSION}",
                self.n
            )));
        }
        let room = 1u128 << self.n;
        if (self.k as u128) * (self.t as u128) > room {
            return Err(Error::Degenerate(format!(
                "K*T = {} exceeds 2^{}",
                self.k * self.t,
                self.n
            )));
        }
        Ok(())
    }

    /// `ceil(delta n)`, the cross-subset distance that is verified.
    pub fn required_distance(&self) -> usize {
        ceil_tol(self.delta * self.n as f64)
    }

    /// Largest error weight under which the subset index stays recoverable.
    pub fn robust_radius(&self) -> usize {
        self.required_distance().saturating_sub(1) / 2
    }
}

/// A subset code together with its encoder `[K] x [T] -> F_2^n`: the pair
/// `(k, t)` maps to the `t`-th point of subset `k` in lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct SubsetCode {
    params: SubsetCodeParams,
    subsets: Vec<Vec<BitVector>>,
    centers: Option<Vec<BitVector>>,
}

impl SubsetCode {
    /// Sorts each subset and checks the structural invariants (dimension,
    /// counts, distinct points within a subset). Distances are left to
    /// [`verify_subset_distance`].
    pub fn new(
        params: SubsetCodeParams,
        mut subsets: Vec<Vec<BitVector>>,
        centers: Option<Vec<BitVector>>,
    ) -> Result<Self> {
        params.validate()?;
        if subsets.len() != params.k {
            return Err(Error::Degenerate(format!(
                "{} subsets supplied for K={}",
                subsets.len(),
                params.k
            )));
        }
        for s in subsets.iter_mut() {
            if let Some(bad) = s.iter().find(|v| v.len() != params.n) {
                return Err(Error::LengthMismatch {
                    left: bad.len(),
                    right: params.n,
                });
            }
            s.sort();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Degenerate("repeated point inside a subset".into()));
            }
        }
        if let Some(c) = &centers {
            if c.len() != params.k || c.iter().any(|v| v.len() != params.n) {
                return Err(Error::Degenerate("centers do not match the subsets".into()));
            }
        }
        Ok(SubsetCode {
            params,
            subsets,
            centers,
        })
    }

    pub fn params(&self) -> &SubsetCodeParams {
        &self.params
    }

    pub fn subsets(&self) -> &[Vec<BitVector>] {
        &self.subsets
    }

    pub fn centers(&self) -> Option<&[BitVector]> {
        self.centers.as_deref()
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    /// The code restricted to the first `t` points of every subset.
    pub fn truncated(&self, t: usize) -> Result<SubsetCode> {
        if t == 0 || self.subsets.iter().any(|s| s.len() < t) {
            return Err(Error::Degenerate(format!("cannot keep {t} points per subset")));
        }
        SubsetCode::new(
            SubsetCodeParams {
                t,
                ..self.params.clone()
            },
            self.subsets.iter().map(|s| s[..t].to_vec()).collect(),
            self.centers.clone(),
        )
    }

    pub fn encode(&self, k_idx: usize, t_idx: usize) -> Result<BitVector> {
        if k_idx >= self.params.k {
            return Err(Error::IndexOutOfRange {
                what: "subset",
                index: k_idx,
                limit: self.params.k,
            });
        }
        if t_idx >= self.params.t {
            return Err(Error::IndexOutOfRange {
                what: "element",
                index: t_idx,
                limit: self.params.t,
            });
        }
        Ok(self.subsets[k_idx][t_idx].clone())
    }

    /// Index of the subset holding the point nearest to `word`. Ties go to
    /// the smaller subset index. Correct whenever `word` is within
    /// [`SubsetCodeParams::robust_radius`] of an encoding.
    pub fn decode_robust(&self, word: &BitVector) -> Result<usize> {
        let mut best = (usize::MAX, 0);
        for (k, s) in self.subsets.iter().enumerate() {
            for v in s {
                let d = hamming_distance(v, word)?;
                if d < best.0 {
                    best = (d, k);
                }
            }
        }
        Ok(best.1)
    }

    /// Inverts the encoder on exact codewords.
    pub fn decode_exact(&self, word: &BitVector) -> Result<(usize, usize)> {
        if word.len() != self.params.n {
            return Err(Error::LengthMismatch {
                left: word.len(),
                right: self.params.n,
            });
        }
        for (k, s) in self.subsets.iter().enumerate() {
            if let Ok(t) = s.binary_search(word) {
                if t < self.params.t {
                    return Ok((k, t));
                }
            }
        }
        Err(Error::NotACodeword)
    }

    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut out = format!(
            "subsetcode v1 K={} T={} delta={} n={}\n",
            p.k, p.t, p.delta, p.n
        );
        for (i, s) in self.subsets.iter().enumerate() {
            match &self.centers {
                Some(c) => {
                    let _ = writeln!(out, "set {i}: center={}", c[i].to_hex());
                }
                None => {
                    let _ = writeln!(out, "set {i}:");
                }
            }
            for v in s {
                let _ = writeln!(out, "{}", v.to_hex());
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<SubsetCode> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::parse("empty subsetcode file"))?;
        let f = parse_header(header, "subsetcode", &["K", "T", "delta", "n"])?;
        let params = SubsetCodeParams {
            k: parse_num(&f[0], "K")?,
            t: parse_num(&f[1], "T")?,
            delta: parse_num(&f[2], "delta")?,
            n: parse_num(&f[3], "n")?,
        };
        params.validate().map_err(|e| Error::parse(e.to_string()))?;
        let mut subsets: Vec<Vec<BitVector>> = Vec::new();
        let mut centers: Vec<BitVector> = Vec::new();
        for line in lines {
            if let Some(rest) = line.strip_prefix("set ") {
                let (idx, tail) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::parse(format!("bad set line `{line}`")))?;
                if parse_num::<usize>(idx, "set index")? != subsets.len() {
                    return Err(Error::parse("set indices must be consecutive from 0"));
                }
                let tail = tail.trim();
                if let Some(hex) = tail.strip_prefix("center=") {
                    centers.push(BitVector::from_hex(params.n, hex)?);
                } else if !tail.is_empty() {
                    return Err(Error::parse(format!("unexpected `{tail}` after set index")));
                }
                subsets.push(Vec::new());
            } else if line.trim().is_empty() {
                continue;
            } else {
                let current = subsets
                    .last_mut()
                    .ok_or_else(|| Error::parse("point listed before any `set` line"))?;
                current.push(BitVector::from_hex(params.n, line)?);
            }
        }
        if !centers.is_empty() && centers.len() != subsets.len() {
            return Err(Error::parse("centers given for only some sets"));
        }
        for s in &subsets {
            if s.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::parse("points of a set must be strictly increasing"));
            }
        }
        let centers = (!centers.is_empty()).then_some(centers);
        SubsetCode::new(params, subsets, centers).map_err(|e| Error::parse(e.to_string()))
    }
}

/// Exhaustive check of disjointness, subset sizes and the cross-subset
/// distance `>= ceil(delta n)`.
pub fn verify_subset_distance(code: &SubsetCode) -> Result<VerificationReport> {
    let p = code.params();
    let total: usize = code.subsets.iter().map(Vec::len).sum();
    if total > MAX_VERIFY_POINTS {
        return Err(Error::ScaleExceeded {
            needed: total as u128,
            cap: MAX_VERIFY_POINTS as u128,
        });
    }
    let mut notes = Vec::new();
    let exact = p.delta * p.n as f64;
    if (exact - exact.round()).abs() < 1e-9 && exact > 0.0 {
        notes.push(format!(
            "delta*n = {} is an integer: verified distance >= {}, a strict reading would need {}",
            exact.round(),
            exact.round(),
            exact.round() + 1.0
        ));
    }
    let finish = |report: VerificationReport| {
        notes
            .iter()
            .fold(report, |r, n| r.with_note(n.clone()))
    };

    for (i, s) in code.subsets.iter().enumerate() {
        if s.len() < p.t {
            return Ok(finish(VerificationReport::fail(
                Counterexample::Undersized {
                    subset: i,
                    size: s.len(),
                    required: p.t,
                },
                i as u64,
            )));
        }
    }

    let mut owner: HashMap<u64, usize> = HashMap::with_capacity(total);
    for (i, s) in code.subsets.iter().enumerate() {
        for v in s {
            if let Some(&prev) = owner.get(&v.to_u64()) {
                return Ok(finish(VerificationReport::fail(
                    Counterexample::Overlap {
                        subsets: (prev, i),
                        point: v.clone(),
                    },
                    owner.len() as u64,
                )));
            }
            owner.insert(v.to_u64(), i);
        }
    }

    let req = p.required_distance();
    if req <= 1 || code.subsets.len() < 2 {
        // distance >= 1 is disjointness, already established
        return Ok(finish(VerificationReport::pass(total as u64)));
    }
    let masks = ball_masks(p.n, req - 1);
    let pairwise = (total as u128).pow(2) / 2;
    let mut checked = 0u64;
    let mut violation = None;
    if pairwise <= (total as u128) * masks.len() as u128 {
        'outer: for (a, sa) in code.subsets.iter().enumerate() {
            for (b, sb) in code.subsets.iter().enumerate().skip(a + 1) {
                for x in sa {
                    for y in sb {
                        checked += 1;
                        let d = hamming_distance(x, y)?;
                        if d < req {
                            violation = Some((a, b, x.clone(), y.clone(), d));
                            break 'outer;
                        }
                    }
                }
            }
        }
    } else {
        'scan: for (a, sa) in code.subsets.iter().enumerate() {
            for x in sa {
                let xv = x.to_u64();
                for &m in &masks {
                    checked += 1;
                    if let Some(&b) = owner.get(&(xv ^ m)) {
                        if b != a {
                            let y = BitVector::from_u64(p.n, xv ^ m);
                            violation = Some((a, b, x.clone(), y, m.count_ones() as usize));
                            break 'scan;
                        }
                    }
                }
            }
        }
    }
    let ce = violation.map(|(a, b, x, y, d)| Counterexample::CrossPair {
        subsets: (a, b),
        points: (x, y),
        achieved: d,
        required: req,
    });
    Ok(finish(VerificationReport::from_outcome(ce, checked)))
}

/// All offsets of weight `<= r` in `n` bits, by increasing weight and then
/// lexicographically.
pub(crate) fn ball_masks(n: usize, r: usize) -> Vec<u64> {
    let mut out = Vec::new();
    for w in 0..=r.min(n) {
        crate::f2::for_each_combination(n, w, |pos| {
            out.push(pos.iter().fold(0u64, |m, &t| m | 1u64 << (n - 1 - t)));
            true
        });
    }
    out
}
