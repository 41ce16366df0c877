use crate::error::{Error, Result};
use crate::f2::{floor_tol, for_each_combination, BitVector, Eliminator};
use crate::linear::GeneratorSchedule;

/// Candidate count above which the message scan gives way to the
/// coset-leader search.
pub const SCAN_LIMIT: u64 = 1 << 14;
/// Default bound on candidates (messages or error patterns) examined.
pub const DECODE_CAP: u64 = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecodeRoute {
    /// Every message of length `ceil(tau j)` encoded and compared.
    Scan,
    /// Error patterns by increasing weight until the received word minus the
    /// pattern is a codeword; all messages of every such codeword are
    /// considered.
    CosetLeader,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeOutcome {
    /// The nearest message (lexicographically smallest on ties), all
    /// `ceil(tau j)` bits.
    pub message: BitVector,
    pub recovered_prefix: BitVector,
    pub target_length: usize,
    /// Against the caller's ground truth; `None` without one.
    pub success: Option<bool>,
    pub distance: usize,
    pub candidates_scanned: u64,
    pub route: DecodeRoute,
}

pub fn decode_nearest(
    schedule: &GeneratorSchedule,
    received: &BitVector,
    target_i: usize,
    truth: Option<&BitVector>,
) -> Result<DecodeOutcome> {
    decode_nearest_capped(schedule, received, target_i, truth, DECODE_CAP)
}

/// Nearest-codeword decoding of a received prefix. Both routes return the
/// same answer: the lexicographically smallest message among those whose
/// encoding is closest to `received`.
pub fn decode_nearest_capped(
    schedule: &GeneratorSchedule,
    received: &BitVector,
    target_i: usize,
    truth: Option<&BitVector>,
    cap: u64,
) -> Result<DecodeOutcome> {
    let j = received.len();
    if j == 0 || j > schedule.horizon() {
        return Err(Error::OutOfHorizon {
            j,
            horizon: schedule.horizon(),
        });
    }
    let m = schedule.message_bits(j);
    let limit = floor_tol(schedule.plan().rate * j as f64).min(m);
    if target_i > limit {
        return Err(Error::IndexOutOfRange {
            what: "target prefix",
            index: target_i,
            limit: limit + 1,
        });
    }
    let columns = schedule.columns(j)?;
    let (message, distance, scanned, route) = if m < 64 && (1u64 << m) <= SCAN_LIMIT.min(cap) {
        let (x, d, s) = scan(&columns, received, m);
        (x, d, s, DecodeRoute::Scan)
    } else {
        let (x, d, s) = coset_leader(&columns, received, m, cap)?;
        (x, d, s, DecodeRoute::CosetLeader)
    };
    let recovered_prefix = message.prefix(target_i);
    let success = truth.map(|t| t.resized(target_i.max(t.len())).prefix(target_i) == recovered_prefix);
    Ok(DecodeOutcome {
        message,
        recovered_prefix,
        target_length: target_i,
        success,
        distance,
        candidates_scanned: scanned,
        route,
    })
}

fn scan(columns: &[BitVector], received: &BitVector, m: usize) -> (BitVector, usize, u64) {
    // Gray-code walk: step g flips message position m-1-t
    let mut word = BitVector::zeros(received.len());
    let mut x = 0u64;
    let mut best = (received.weight(), 0u64);
    for g in 1u64..(1u64 << m) {
        let t = g.trailing_zeros() as usize;
        x ^= 1 << t;
        word.xor_assign(&columns[m - 1 - t]);
        let d = word.xor(received).weight();
        if (d, x) < best {
            best = (d, x);
        }
    }
    (BitVector::from_u64(m, best.1), best.0, 1u64 << m)
}

fn coset_leader(
    columns: &[BitVector],
    received: &BitVector,
    m: usize,
    cap: u64,
) -> Result<(BitVector, usize, u64)> {
    let j = received.len();
    let mut elim = Eliminator::with_vars(j, m);
    for (p, c) in columns.iter().enumerate() {
        elim.push_var(c, p);
    }
    let target = elim.residual(received);
    let units: Vec<BitVector> = (0..j).map(|t| elim.residual(&BitVector::unit(j, t))).collect();
    let mut scanned = 0u64;
    for w in 0..=j {
        let mut leaders: Vec<Vec<usize>> = Vec::new();
        let mut over = false;
        for_each_combination(j, w, |combo| {
            scanned += 1;
            if scanned > cap {
                over = true;
                return false;
            }
            let mut r = BitVector::zeros(j);
            for &t in combo {
                r.xor_assign(&units[t]);
            }
            if r == target {
                leaders.push(combo.to_vec());
            }
            true
        });
        if over {
            return Err(Error::ScaleExceeded {
                needed: scanned as u128,
                cap: cap as u128,
            });
        }
        if leaders.is_empty() {
            continue;
        }
        let best = leaders
            .iter()
            .map(|combo| {
                let mut v = received.clone();
                for &t in combo {
                    v.flip(t);
                }
                let x = elim.solve(&v).expect("residual matched, so v is a codeword");
                elim.lex_min(&x)
            })
            .min()
            .expect("non-empty");
        return Ok((best, w, scanned));
    }
    unreachable!("the full-weight pattern set always contains a coset leader")
}
