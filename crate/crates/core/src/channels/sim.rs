use std::fmt;

use rayon::prelude::*;

use crate::channels::decode::decode_nearest;
use crate::channels::pattern::{bsc_pattern, ErrorPattern};
use crate::error::{Error, Result};
use crate::f2::{BitVector, SeededRandomSource};
use crate::layered::{make_checksum_with_rows, SystematicChecksum};
use crate::linear::GeneratorSchedule;

/// Largest packet message length decoded by full scan.
pub const MAX_PACKET_MESSAGE: usize = 16;

/// Splits `stream` into packets of `packet_message_bits` (zero-padding the
/// last), encodes each with a systematic packet code of distance `delta`,
/// applies `pattern`, decodes packet by packet by nearest codeword and
/// returns how many leading stream bits came back correct.
pub fn packetized_baseline(
    packet_message_bits: usize,
    packet_code_bits: usize,
    delta: f64,
    stream: &BitVector,
    pattern: &ErrorPattern,
    seed: u64,
) -> Result<usize> {
    if packet_message_bits == 0
        || packet_message_bits > MAX_PACKET_MESSAGE
        || packet_code_bits < packet_message_bits
    {
        return Err(Error::SpecInvalid(format!(
            "packet code [{packet_code_bits}, {packet_message_bits}] unsupported"
        )));
    }
    let code = make_checksum_with_rows(
        packet_message_bits,
        packet_code_bits - packet_message_bits,
        delta,
        seed,
        64,
    )?;
    let packets = stream.len().div_ceil(packet_message_bits);
    let padded = stream.resized(packets * packet_message_bits);
    let mut sent = BitVector::zeros(0);
    for p in 0..packets {
        let chunk = padded.slice(p * packet_message_bits, (p + 1) * packet_message_bits);
        sent = sent.concat(&code.encode(&chunk)?);
    }
    let received = pattern.apply(&sent)?;
    let mut recovered = 0;
    for p in 0..packets {
        let word = received.slice(p * packet_code_bits, (p + 1) * packet_code_bits);
        let decoded = nearest_packet(&code, &word)?;
        let truth = padded.slice(p * packet_message_bits, (p + 1) * packet_message_bits);
        let agree = (0..packet_message_bits)
            .take_while(|&t| decoded.get(t) == truth.get(t))
            .count();
        recovered += agree;
        if agree < packet_message_bits {
            break;
        }
    }
    Ok(recovered.min(stream.len()))
}

fn nearest_packet(code: &SystematicChecksum, word: &BitVector) -> Result<BitVector> {
    let k = code.input_length();
    let mut best: Option<(usize, BitVector)> = None;
    for v in 0u64..(1u64 << k) {
        let x = BitVector::from_u64(k, v);
        let d = code.encode(&x)?.xor(word).weight();
        if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
            best = Some((d, x));
        }
    }
    Ok(best.expect("k >= 1").1)
}

/// One Monte Carlo draw.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialRecord {
    pub trial: u64,
    pub j: usize,
    pub i: usize,
    pub flips: usize,
    pub ok: bool,
}

impl fmt::Display for TrialRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "trial={} j={} i={} flips={} ok={}",
            self.trial, self.j, self.i, self.flips, self.ok as u8
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonteCarloSummary {
    pub trials: u64,
    pub failures: u64,
    pub failure_rate: f64,
    /// Wilson 95% half-width.
    pub half_width: f64,
    pub records: Vec<TrialRecord>,
}

const Z95: f64 = 1.959963984540054;

/// Half-width of the Wilson score interval at 95%.
pub fn wilson_half_width(failures: u64, trials: u64) -> f64 {
    let n = trials as f64;
    let p = failures as f64 / n;
    let z2 = Z95 * Z95;
    Z95 / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt()
}

/// Failure rate of nearest-codeword decoding of the first `target_i` bits
/// from `j` bits sent over BSC(`epsilon`). Trial `t` draws its message and
/// noise from seed `seed ^ t`.
pub fn monte_carlo_bsc(
    schedule: &GeneratorSchedule,
    epsilon: f64,
    j: usize,
    target_i: usize,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloSummary> {
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::Domain {
            what: "channel epsilon",
            value: epsilon,
        });
    }
    if j == 0 || j > schedule.horizon() {
        return Err(Error::OutOfHorizon {
            j,
            horizon: schedule.horizon(),
        });
    }
    let m = schedule.message_bits(j);
    let records = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<TrialRecord> {
            let mut rng = SeededRandomSource::new(seed).derive(t);
            let message = rng.bits(m);
            let noise = bsc_pattern(&mut rng, epsilon, j);
            let received = noise.apply(&schedule.encode_prefix(&message, j)?)?;
            let out = decode_nearest(schedule, &received, target_i, Some(&message))?;
            Ok(TrialRecord {
                trial: t,
                j,
                i: target_i,
                flips: noise.weight(),
                ok: out.success == Some(true),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let failures = records.iter().filter(|r| !r.ok).count() as u64;
    Ok(MonteCarloSummary {
        trials,
        failures,
        failure_rate: failures as f64 / trials as f64,
        half_width: wilson_half_width(failures, trials),
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_values() {
        // 0 of 500: upper end z^2/(n + z^2)
        let h = wilson_half_width(0, 500);
        assert!((2.0 * h - Z95 * Z95 / (500.0 + Z95 * Z95)).abs() < 1e-12);
        let h = wilson_half_width(50, 100);
        assert!((h - 0.0962).abs() < 1e-3);
    }

    #[test]
    fn record_format() {
        let r = TrialRecord { trial: 3, j: 40, i: 20, flips: 1, ok: true };
        assert_eq!(r.to_string(), "trial=3 j=40 i=20 flips=1 ok=1");
    }
}
