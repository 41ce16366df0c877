use crate::error::{Error, Result};
use crate::f2::{floor_tol, BitVector, SeededRandomSource};
use crate::linear::{parse_header, parse_num};

/// A noise vector: bit `t` set means position `t` is flipped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorPattern {
    flips: BitVector,
}

impl ErrorPattern {
    pub fn new(flips: BitVector) -> Self {
        ErrorPattern { flips }
    }

    pub fn zeros(len: usize) -> Self {
        ErrorPattern::new(BitVector::zeros(len))
    }

    pub fn from_positions(len: usize, positions: &[usize]) -> Result<Self> {
        let mut flips = BitVector::zeros(len);
        for &p in positions {
            if p >= len {
                return Err(Error::IndexOutOfRange {
                    what: "flip position",
                    index: p,
                    limit: len,
                });
            }
            flips.set(p, true);
        }
        Ok(ErrorPattern::new(flips))
    }

    pub fn len(&self) -> usize {
        self.flips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flips.is_empty()
    }

    pub fn flips(&self) -> &BitVector {
        &self.flips
    }

    pub fn weight(&self) -> usize {
        self.flips.weight()
    }

    pub fn fraction(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.weight() as f64 / self.len() as f64
        }
    }

    /// Truncated or zero-extended to `len`.
    pub fn resized(&self, len: usize) -> ErrorPattern {
        ErrorPattern::new(self.flips.resized(len))
    }

    pub fn apply(&self, word: &BitVector) -> Result<BitVector> {
        if word.len() != self.len() {
            return Err(Error::LengthMismatch {
                left: word.len(),
                right: self.len(),
            });
        }
        Ok(word.xor(&self.flips))
    }

    pub fn to_text(&self) -> String {
        format!("pattern v1 len={}\n{}\n", self.len(), self.flips.to_hex())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::parse("empty pattern file"))?;
        let f = parse_header(header, "pattern", &["len"])?;
        let len: usize = parse_num(&f[0], "len")?;
        let body = lines.next().unwrap_or("").trim();
        let flips = if len == 0 {
            BitVector::zeros(0)
        } else {
            BitVector::from_hex(len, body)?
        };
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::parse("trailing lines after pattern"));
        }
        Ok(ErrorPattern::new(flips))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ChannelSpec {
    /// Independent flips with probability `epsilon`.
    Bsc { epsilon: f64, seed: u64 },
    /// Caller-chosen flip positions, at most `floor(epsilon j)` of them.
    AdversarialBudget { epsilon: f64, positions: Vec<usize> },
    /// `floor(epsilon packet_len) + overshoot` flips at the start of every
    /// complete packet.
    PerPacket {
        packet_len: usize,
        epsilon: f64,
        overshoot: usize,
    },
}

impl ChannelSpec {
    pub fn validate(&self) -> Result<()> {
        let eps = match self {
            ChannelSpec::Bsc { epsilon, .. }
            | ChannelSpec::AdversarialBudget { epsilon, .. }
            | ChannelSpec::PerPacket { epsilon, .. } => *epsilon,
        };
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::SpecInvalid(format!("epsilon {eps} outside [0, 1]")));
        }
        if let ChannelSpec::PerPacket {
            packet_len,
            overshoot,
            ..
        } = self
        {
            if *packet_len < 2 {
                return Err(Error::SpecInvalid(format!("packet length {packet_len} below 2")));
            }
            if *overshoot < 1 {
                return Err(Error::SpecInvalid("overshoot must be at least 1".into()));
            }
            let f = self.flips_per_packet();
            if f > *packet_len {
                return Err(Error::SpecInvalid(format!(
                    "{f} flips per packet exceed the packet length {packet_len}"
                )));
            }
        }
        Ok(())
    }

    fn flips_per_packet(&self) -> usize {
        match self {
            ChannelSpec::PerPacket {
                packet_len,
                epsilon,
                overshoot,
            } => floor_tol(epsilon * *packet_len as f64) + overshoot,
            _ => 0,
        }
    }
}

/// Draws (or, for the adversarial variant, validates) a pattern of length `j`.
pub fn sample_pattern(spec: &ChannelSpec, j: usize) -> Result<ErrorPattern> {
    spec.validate()?;
    if j == 0 {
        return Err(Error::SpecInvalid("pattern length must be at least 1".into()));
    }
    match spec {
        ChannelSpec::Bsc { epsilon, seed } => {
            let mut rng = SeededRandomSource::new(*seed);
            Ok(bsc_pattern(&mut rng, *epsilon, j))
        }
        ChannelSpec::AdversarialBudget { epsilon, positions } => {
            let budget = floor_tol(epsilon * j as f64);
            let pattern = ErrorPattern::from_positions(j, positions)?;
            if pattern.weight() > budget {
                return Err(Error::SpecInvalid(format!(
                    "{} flips exceed the budget floor({epsilon} * {j}) = {budget}",
                    pattern.weight()
                )));
            }
            Ok(pattern)
        }
        ChannelSpec::PerPacket { packet_len, .. } => {
            let f = spec.flips_per_packet();
            let mut flips = BitVector::zeros(j);
            for packet in 0..j / packet_len {
                for t in 0..f {
                    flips.set(packet * packet_len + t, true);
                }
            }
            Ok(ErrorPattern::new(flips))
        }
    }
}

pub(crate) fn bsc_pattern(rng: &mut SeededRandomSource, epsilon: f64, j: usize) -> ErrorPattern {
    ErrorPattern::new(BitVector::from_bits((0..j).map(|_| rng.bernoulli(epsilon))))
}
