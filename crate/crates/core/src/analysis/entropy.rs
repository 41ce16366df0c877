use crate::error::{Error, Result};
use crate::f2::BitVector;
use crate::layered::{encode_layered, LayeredCode};
use crate::linear::GeneratorSchedule;

/// Largest message length enumerated by [`prefix_entropy_profile`].
pub const MAX_ENTROPY_MESSAGE: usize = 16;

/// Any deterministic encoder of fixed-length messages.
pub trait PrefixEncoder {
    fn message_length(&self) -> usize;
    fn codeword_length(&self) -> usize;
    fn encode(&self, message: &BitVector) -> Result<BitVector>;
}

impl PrefixEncoder for LayeredCode {
    fn message_length(&self) -> usize {
        LayeredCode::message_length(self)
    }

    fn codeword_length(&self) -> usize {
        LayeredCode::codeword_length(self)
    }

    fn encode(&self, message: &BitVector) -> Result<BitVector> {
        encode_layered(self, message)
    }
}

/// A linear schedule read up to its horizon: the message is the
/// `ceil(tau n)` bits the full horizon depends on.
impl PrefixEncoder for GeneratorSchedule {
    fn message_length(&self) -> usize {
        self.message_bits(self.horizon())
    }

    fn codeword_length(&self) -> usize {
        self.horizon()
    }

    fn encode(&self, message: &BitVector) -> Result<BitVector> {
        self.encode_prefix(message, self.horizon())
    }
}

/// `pad` constant zero bits in front of another encoder's output.
pub struct PaddedEncoder<'a, E: PrefixEncoder + ?Sized> {
    pub inner: &'a E,
    pub pad: usize,
}

impl<E: PrefixEncoder + ?Sized> PrefixEncoder for PaddedEncoder<'_, E> {
    fn message_length(&self) -> usize {
        self.inner.message_length()
    }

    fn codeword_length(&self) -> usize {
        self.pad + self.inner.codeword_length()
    }

    fn encode(&self, message: &BitVector) -> Result<BitVector> {
        Ok(BitVector::zeros(self.pad).concat(&self.inner.encode(message)?))
    }
}

/// Exact Shannon entropy of `C(x)[:i]` for uniform `x`, for `i = 0..=n`.
///
/// Codewords are sorted so that every prefix class is a contiguous run;
/// with class sizes `c` out of `N = 2^m` the entropy is
/// `m - (sum c log2 c) / N`, which is exact for linear codes (all classes
/// share one power-of-two size).
pub fn prefix_entropy_profile<E: PrefixEncoder + ?Sized>(code: &E, n: usize) -> Result<Vec<f64>> {
    let m = code.message_length();
    if m > MAX_ENTROPY_MESSAGE {
        return Err(Error::ScaleExceeded {
            needed: 1u128 << m.min(127),
            cap: 1u128 << MAX_ENTROPY_MESSAGE,
        });
    }
    if n > code.codeword_length() {
        return Err(Error::OutOfHorizon {
            j: n,
            horizon: code.codeword_length(),
        });
    }
    let mut words: Vec<BitVector> = (0..1u64 << m)
        .map(|x| code.encode(&BitVector::from_u64(m, x)).map(|w| w.prefix(n)))
        .collect::<Result<_>>()?;
    words.sort_unstable();
    // common prefix length of each sorted neighbour pair
    let lcp: Vec<usize> = words
        .windows(2)
        .map(|w| w[0].xor(&w[1]).first_one().unwrap_or(n))
        .collect();
    let total = words.len() as f64;
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut weighted = 0.0;
        let mut run = 1u64;
        for &l in &lcp {
            if l >= i {
                run += 1;
            } else {
                weighted += run as f64 * (run as f64).log2();
                run = 1;
            }
        }
        weighted += run as f64 * (run as f64).log2();
        out.push(m as f64 - weighted / total);
    }
    Ok(out)
}
