use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::f2::{ceil_tol, BitMatrix, BitVector, SeededRandomSource};
use crate::layered::checksum::{parity_rows_for, random_parity, MAX_CHECKSUM_INPUT};
use crate::layered::code::{LayeredCode, Segment};
use crate::layered::verify::{
    all_codewords, check_scale, first_difference, pack, prefix_mask, requirement,
};
use crate::report::Counterexample;
use crate::subset::{verify_subset_distance, SubsetCode};

/// A random `[ceil(k0/rate), k0]` linear block code whose minimum distance is
/// at least `max(1, ceil(2 eps n))`, found by rejection sampling (attempt `a`
/// uses seed `seed ^ a`).
pub fn seed_code(
    k0: usize,
    epsilon: f64,
    rate: f64,
    seed: u64,
    max_attempts: usize,
) -> Result<LayeredCode> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::Domain {
            what: "seed code rate",
            value: rate,
        });
    }
    if k0 == 0 || k0 > MAX_CHECKSUM_INPUT {
        return Err(Error::PlanInvalid(format!(
            "seed code message length {k0} outside 1..={MAX_CHECKSUM_INPUT}"
        )));
    }
    if max_attempts == 0 {
        return Err(Error::PlanInvalid("max_attempts must be at least 1".into()));
    }
    let n = ceil_tol(k0 as f64 / rate);
    if n > 128 {
        return Err(Error::ScaleExceeded {
            needed: n as u128,
            cap: 128,
        });
    }
    let required = ceil_tol(2.0 * epsilon * n as f64).max(1);
    let mut last = None;
    for attempt in 0..max_attempts {
        let mut rng = SeededRandomSource::new(seed ^ attempt as u64);
        let generator = random_parity(k0, n, &mut rng);
        let rows: Vec<u128> = generator.row_vectors().iter().map(pack).collect();
        // Gray-code walk over the nonzero messages
        let mut x = 0u64;
        let mut word = 0u128;
        let mut lightest: Option<(usize, u64)> = None;
        for g in 1u64..(1u64 << k0) {
            let t = g.trailing_zeros() as usize;
            x ^= 1 << t;
            word ^= rows[k0 - 1 - t];
            let w = word.count_ones() as usize;
            if lightest.is_none_or(|(bw, bx)| (w, x) < (bw, bx)) {
                lightest = Some((w, x));
            }
        }
        let (w, x) = lightest.expect("k0 >= 1");
        if w >= required {
            return LayeredCode::new(
                epsilon,
                k0,
                vec![Segment::Base {
                    start: 0,
                    msg: 0..k0,
                    generator,
                }],
            );
        }
        last = Some(Box::new(Counterexample::LightCodeword {
            message: BitVector::from_u64(k0, x),
            achieved: w,
            required,
        }));
    }
    Err(Error::ConstructionFailed {
        attempts: max_attempts,
        last,
    })
}

/// Parameters of one extension step.
#[derive(Clone, Debug, PartialEq)]
pub struct LayeredPlan {
    pub epsilon: f64,
    /// Number of subset-code blocks plus one.
    pub ell: usize,
    /// Bits of each block index `B_j`.
    pub block_bits: usize,
    /// Bits of each sub-block `b_j` of the last block.
    pub subblock_bits: usize,
    /// Encodes `(B_j, b_j)`; needs exactly `2^block_bits` subsets of
    /// `2^subblock_bits` points.
    pub subset: SubsetCode,
    /// Relative distance of the trailing checksum, normally `2 eps`.
    pub checksum_delta: f64,
    pub seed: u64,
    pub max_attempts: usize,
}

impl LayeredPlan {
    pub fn validate(&self) -> Result<()> {
        if self.ell < 2 {
            return Err(Error::PlanInvalid(format!("ell must be at least 2, got {}", self.ell)));
        }
        let p = self.subset.params();
        if 1usize.checked_shl(self.block_bits as u32) != Some(p.k)
            || 1usize.checked_shl(self.subblock_bits as u32) != Some(p.t)
        {
            return Err(Error::PlanInvalid(format!(
                "subset code (K={}, T={}) must encode exactly {} + {} bits",
                p.k, p.t, self.block_bits, self.subblock_bits
            )));
        }
        if !(0.0..0.5).contains(&self.checksum_delta) {
            return Err(Error::Domain {
                what: "checksum relative distance",
                value: self.checksum_delta,
            });
        }
        if self.max_attempts == 0 {
            return Err(Error::PlanInvalid("max_attempts must be at least 1".into()));
        }
        let report = verify_subset_distance(&self.subset)?;
        if !report.passed {
            return Err(Error::PlanInvalid(format!("subset code fails verification: {report}")));
        }
        Ok(())
    }

    /// Message bits added by one extension: `(ell-1)(s + s_sub)`.
    pub fn added_message_bits(&self) -> usize {
        (self.ell - 1) * (self.block_bits + self.subblock_bits)
    }
}

/// Lays out `ell - 1` subset blocks after `base`, then fits a checksum over
/// everything so far.
///
/// Message layout: the base message, then `B_1 .. B_{ell-1}`, then the
/// sub-blocks `b_1 .. b_{ell-1}` that make up `B_ell`. Block `j` is encoded
/// as `subset.encode(B_j, b_j)`. The checksum parity is rejection-sampled
/// (attempt `a` uses seed `seed ^ a`) until, for every pair of messages,
/// every prefix ending inside the checksum meets the layered distance
/// requirement; this is checked on the differences the code actually
/// realizes, grouped by value.
pub fn extend(base: &LayeredCode, plan: &LayeredPlan) -> Result<LayeredCode> {
    plan.validate()?;
    if (plan.epsilon - base.epsilon()).abs() > 1e-12 {
        return Err(Error::PlanInvalid(format!(
            "plan eps {} differs from the base code's {}",
            plan.epsilon,
            base.epsilon()
        )));
    }
    let m0 = base.message_length();
    let n0 = base.codeword_length();
    let (s, s_sub, blocks) = (plan.block_bits, plan.subblock_bits, plan.ell - 1);
    let n_sub = plan.subset.n();
    let mut segments = base.segments().to_vec();
    for j in 0..blocks {
        let block = m0 + j * s;
        let sub = m0 + blocks * s + j * s_sub;
        segments.push(Segment::Subset {
            start: n0 + j * n_sub,
            block: block..block + s,
            sub: sub..sub + s_sub,
            code: plan.subset.clone(),
        });
    }
    let m = m0 + plan.added_message_bits();
    let l = n0 + blocks * n_sub;
    let p = parity_rows_for(l, plan.checksum_delta)?;
    let with_parity = |parity: BitMatrix| {
        let mut segs = segments.clone();
        segs.push(Segment::Checksum {
            start: l,
            delta: plan.checksum_delta,
            parity,
        });
        LayeredCode::new(plan.epsilon, m, segs)
    };
    let placeholder = with_parity(BitMatrix::zeros(p, l))?;
    check_scale(&placeholder)?;

    // requirements at each prefix inside the checksum, with the decodable
    // prefix length there
    let boundaries = placeholder.checksum_boundaries();
    let n = placeholder.codeword_length();
    let targets: Vec<(usize, usize, usize, f64)> = (l + 1..=n)
        .map(|j| {
            let (req, real) = requirement(&placeholder, &boundaries, j);
            (j, placeholder.decodable_prefix_length(j), req, real)
        })
        .collect();

    let pre = LayeredCode::new(plan.epsilon, m, segments.clone())?;
    let words: Vec<u128> = all_codewords(&pre)?.iter().map(pack).collect();
    // difference -> (smallest first-difference position, a pair attaining it)
    let mut table: HashMap<u128, (usize, u64, u64)> = HashMap::new();
    let count = words.len() as u64;
    for x in 0..count {
        for y in x + 1..count {
            let i = first_difference(m, x, y);
            let e = table.entry(words[x as usize] ^ words[y as usize]).or_insert((i, x, y));
            if i < e.0 {
                *e = (i, x, y);
            }
        }
    }
    let mut diffs: Vec<(u128, (usize, u64, u64))> = table.into_iter().collect();
    diffs.sort_unstable_by_key(|&(d, info)| (info, d));

    let mut last = None;
    for attempt in 0..plan.max_attempts {
        let mut rng = SeededRandomSource::new(plan.seed ^ attempt as u64);
        let parity = random_parity(p, l, &mut rng);
        let lookup = ParityLookup::new(&parity, l);
        let mut violation = None;
        'diffs: for &(d, (i, x, y)) in &diffs {
            let q = lookup.apply(d);
            let base_weight = d.count_ones() as usize;
            for &(j, decodable, req, real) in &targets {
                if i > decodable {
                    continue;
                }
                let w = base_weight + (q & prefix_mask(j - l)).count_ones() as usize;
                if w < req {
                    violation = Some(Counterexample::MessagePair {
                        i,
                        j,
                        x: BitVector::from_u64(m, x),
                        y: BitVector::from_u64(m, y),
                        achieved: w,
                        required: real,
                    });
                    break 'diffs;
                }
            }
        }
        match violation {
            None => return with_parity(parity),
            Some(c) => last = Some(Box::new(c)),
        }
    }
    Err(Error::ConstructionFailed {
        attempts: plan.max_attempts,
        last,
    })
}

/// `P d` for packed `d`, eight input bits per table lookup.
struct ParityLookup {
    tables: Vec<[u128; 256]>,
}

impl ParityLookup {
    fn new(parity: &BitMatrix, cols: usize) -> Self {
        let columns: Vec<u128> = (0..cols).map(|c| pack(&parity.column(c))).collect();
        let tables = columns
            .chunks(8)
            .map(|chunk| {
                let mut t = [0u128; 256];
                for (b, slot) in t.iter_mut().enumerate() {
                    for (k, col) in chunk.iter().enumerate() {
                        if b >> k & 1 == 1 {
                            *slot ^= col;
                        }
                    }
                }
                t
            })
            .collect();
        ParityLookup { tables }
    }

    fn apply(&self, d: u128) -> u128 {
        self.tables
            .iter()
            .enumerate()
            .fold(0, |acc, (c, t)| acc ^ t[(d >> (8 * c) & 0xff) as usize])
    }
}
