use crate::error::{Error, Result};
use crate::f2::{binary_entropy, ceil_tol, BitMatrix, BitVector, SeededRandomSource};
use crate::linear::{parse_header, parse_num};
use crate::report::{Counterexample, VerificationReport};

/// Largest input length whose full weight distribution is enumerated.
pub const MAX_CHECKSUM_INPUT: usize = 22;

/// A parity map `P` such that `x -> (x || P x)` is a code of relative
/// distance at least `delta`.
#[derive(Clone, Debug, PartialEq)]
pub struct SystematicChecksum {
    parity: BitMatrix,
    delta: f64,
}

impl SystematicChecksum {
    pub fn new(parity: BitMatrix, delta: f64) -> Self {
        SystematicChecksum { parity, delta }
    }

    pub fn input_length(&self) -> usize {
        self.parity.cols()
    }

    pub fn parity_rows(&self) -> usize {
        self.parity.rows()
    }

    pub fn parity_matrix(&self) -> &BitMatrix {
        &self.parity
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn total_length(&self) -> usize {
        self.input_length() + self.parity_rows()
    }

    /// `ceil(delta * (input + parity))`.
    pub fn required_distance(&self) -> usize {
        ceil_tol(self.delta * self.total_length() as f64)
    }

    pub fn parity_of(&self, input: &BitVector) -> Result<BitVector> {
        self.parity.mul_vec(input)
    }

    /// `x || P x`.
    pub fn encode(&self, input: &BitVector) -> Result<BitVector> {
        Ok(input.concat(&self.parity_of(input)?))
    }

    /// Minimum weight of `x || P x` over nonzero `x`, by a Gray-code walk.
    pub fn minimum_distance(&self) -> Result<(usize, BitVector)> {
        let l = self.input_length();
        if l > MAX_CHECKSUM_INPUT {
            return Err(Error::ScaleExceeded {
                needed: 1u128 << l,
                cap: 1u128 << MAX_CHECKSUM_INPUT,
            });
        }
        if l == 0 {
            return Err(Error::Degenerate("checksum over zero input bits".into()));
        }
        let columns: Vec<BitVector> = (0..l).map(|c| self.parity.column(c)).collect();
        let mut x = BitVector::zeros(l);
        let mut parity = BitVector::zeros(self.parity_rows());
        let mut best: Option<(usize, BitVector)> = None;
        for g in 1u64..(1u64 << l) {
            let t = g.trailing_zeros() as usize;
            x.flip(t);
            parity.xor_assign(&columns[t]);
            let w = x.weight() + parity.weight();
            let better = match &best {
                None => true,
                Some((bw, bx)) => w < *bw || (w == *bw && x < *bx),
            };
            if better {
                best = Some((w, x.clone()));
            }
        }
        Ok(best.expect("at least one nonzero input"))
    }

    pub fn verify(&self) -> Result<VerificationReport> {
        let required = self.required_distance();
        if self.parity_rows() == 0 && required <= 1 {
            return Ok(VerificationReport::pass(0)
                .with_note("no parity rows: the identity map already has distance 1"));
        }
        let (w, x) = self.minimum_distance()?;
        let checked = (1u64 << self.input_length()) - 1;
        if w < required {
            Ok(VerificationReport::fail(
                Counterexample::LightCodeword {
                    message: x,
                    achieved: w,
                    required,
                },
                checked,
            ))
        } else {
            Ok(VerificationReport::pass(checked).with_note(format!("minimum distance {w}")))
        }
    }

    /// `checksum v1 input=<L> rows=<p> delta=<d>`, then one hex parity row
    /// per line.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "checksum v1 input={} rows={} delta={}\n",
            self.input_length(),
            self.parity_rows(),
            self.delta
        );
        for r in self.parity.row_vectors() {
            out.push_str(&r.to_hex());
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::parse("empty checksum file"))?;
        let f = parse_header(header, "checksum", &["input", "rows", "delta"])?;
        let input: usize = parse_num(&f[0], "input")?;
        let rows: usize = parse_num(&f[1], "rows")?;
        let delta: f64 = parse_num(&f[2], "delta")?;
        let parsed: Vec<BitVector> = lines
            .filter(|l| !l.trim().is_empty())
            .map(|l| BitVector::from_hex(input, l.trim()))
            .collect::<Result<_>>()?;
        if parsed.len() != rows {
            return Err(Error::parse(format!("expected {rows} parity rows, found {}", parsed.len())));
        }
        Ok(SystematicChecksum::new(BitMatrix::from_rows(input, parsed)?, delta))
    }
}

/// Parity-row count for a checksum of relative distance `delta` over
/// `input_length` bits: the least fixed point of
/// `p = ceil(H(delta) * (input_length + p))`, or zero when `delta *
/// input_length <= 1` (the bare input already has distance one).
pub fn parity_rows_for(input_length: usize, delta: f64) -> Result<usize> {
    if !(0.0..0.5).contains(&delta) {
        return Err(Error::Domain {
            what: "checksum relative distance",
            value: delta,
        });
    }
    if ceil_tol(delta * input_length as f64) <= 1 {
        return Ok(0);
    }
    let h = binary_entropy(delta)?;
    let mut p = 0usize;
    for _ in 0..10_000 {
        let next = ceil_tol(h * (input_length + p) as f64);
        if next == p {
            return Ok(p);
        }
        p = next;
    }
    Err(Error::Infeasible(format!(
        "parity size for delta={delta} does not settle"
    )))
}

pub(crate) fn random_parity(rows: usize, cols: usize, rng: &mut SeededRandomSource) -> BitMatrix {
    let rows = (0..rows).map(|_| rng.bits(cols)).collect();
    BitMatrix::from_rows(cols, rows).expect("rows drawn at the right width")
}

/// Rejection-samples a checksum of relative distance `delta`; attempt `a`
/// (0-based) uses seed `seed ^ a`. The distance is verified exhaustively.
pub fn make_checksum(
    input_length: usize,
    delta: f64,
    seed: u64,
    max_attempts: usize,
) -> Result<SystematicChecksum> {
    let rows = parity_rows_for(input_length, delta)?;
    make_checksum_with_rows(input_length, rows, delta, seed, max_attempts)
}

/// Like [`make_checksum`] with an explicit parity-row count.
pub fn make_checksum_with_rows(
    input_length: usize,
    parity_rows: usize,
    delta: f64,
    seed: u64,
    max_attempts: usize,
) -> Result<SystematicChecksum> {
    if input_length > MAX_CHECKSUM_INPUT {
        return Err(Error::ScaleExceeded {
            needed: 1u128 << input_length.min(127),
            cap: 1u128 << MAX_CHECKSUM_INPUT,
        });
    }
    if max_attempts == 0 {
        return Err(Error::PlanInvalid("max_attempts must be at least 1".into()));
    }
    let mut last = None;
    for attempt in 0..max_attempts {
        let mut rng = SeededRandomSource::new(seed ^ attempt as u64);
        let cs = SystematicChecksum::new(random_parity(parity_rows, input_length, &mut rng), delta);
        let report = cs.verify()?;
        if report.passed {
            return Ok(cs);
        }
        last = report.counterexample.map(Box::new);
    }
    Err(Error::ConstructionFailed {
        attempts: max_attempts,
        last,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_fixed_point() {
        assert_eq!(parity_rows_for(10, 0.2).unwrap(), 26);
        assert_eq!(parity_rows_for(30, 0.1).unwrap(), 27);
        assert_eq!(parity_rows_for(10, 0.05).unwrap(), 0);
        assert!(parity_rows_for(10, 0.6).is_err());
    }

    #[test]
    fn trivial_checksum() {
        let cs = make_checksum(10, 0.05, 1, 1).unwrap();
        assert_eq!(cs.parity_rows(), 0);
        assert!(cs.verify().unwrap().passed);
        let zero = BitVector::zeros(10);
        assert!(cs.encode(&zero).unwrap().is_zero());
    }

    #[test]
    fn text_round_trip() {
        let cs = make_checksum(6, 0.2, 3, 20).unwrap();
        let back = SystematicChecksum::from_text(&cs.to_text()).unwrap();
        assert_eq!(back, cs);
        assert!(SystematicChecksum::from_text("checksum v1 input=6 rows=2 delta=0.2\n3f\n").is_err());
    }

    #[test]
    fn single_parity_bit_has_distance_two() {
        let even = BitMatrix::from_rows(7, vec![BitVector::ones(7)]).unwrap();
        let cs = SystematicChecksum::new(even, 0.25);
        assert_eq!(cs.minimum_distance().unwrap().0, 2);
        assert!(cs.verify().unwrap().passed);
    }
}
