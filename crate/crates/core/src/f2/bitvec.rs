use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const WORD: usize = 64;

/// A dense vector over GF(2).
///
/// Position 0 is the first symbol of the word (the first transmitted bit,
/// or `x[1]` of a message). Ordering is lexicographic in that sense: the
/// vector with a zero at the first differing position is smaller.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVector {
            len,
            words: vec![u64::MAX; words_for(len)],
        };
        v.clear_tail();
        v
    }

    pub fn unit(len: usize, pos: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(pos, true);
        v
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut v = BitVector::zeros(0);
        for b in bits {
            v.push(b);
        }
        v
    }

    /// Builds a vector of `len` bits from the low `len` bits of `value`,
    /// most significant first: position 0 holds bit `len - 1` of `value`.
    /// Numeric order of `value` then coincides with lexicographic order.
    pub fn from_u64(len: usize, value: u64) -> Self {
        assert!(len <= 64, "from_u64 supports at most 64 bits");
        let mut v = Self::zeros(len);
        for pos in 0..len {
            if (value >> (len - 1 - pos)) & 1 == 1 {
                v.set(pos, true);
            }
        }
        v
    }

    /// Inverse of [`BitVector::from_u64`].
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= 64, "to_u64 supports at most 64 bits");
        self.iter_ones()
            .fold(0u64, |acc, pos| acc | 1u64 << (self.len - 1 - pos))
    }

    pub(crate) fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        let mut v = BitVector { len, words };
        v.clear_tail();
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, pos: usize) -> bool {
        assert!(pos < self.len, "bit {pos} out of range for length {}", self.len);
        (self.words[pos / WORD] >> (pos % WORD)) & 1 == 1
    }

    pub fn set(&mut self, pos: usize, value: bool) {
        assert!(pos < self.len, "bit {pos} out of range for length {}", self.len);
        let mask = 1u64 << (pos % WORD);
        if value {
            self.words[pos / WORD] |= mask;
        } else {
            self.words[pos / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, pos: usize) {
        assert!(pos < self.len, "bit {pos} out of range for length {}", self.len);
        self.words[pos / WORD] ^= 1u64 << (pos % WORD);
    }

    pub fn push(&mut self, value: bool) {
        if self.len.is_multiple_of(WORD) {
            self.words.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, value);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Weight of the first `end` bits.
    pub fn prefix_weight(&self, end: usize) -> usize {
        assert!(end <= self.len);
        let full = end / WORD;
        let mut w: usize = self.words[..full].iter().map(|w| w.count_ones() as usize).sum();
        let rem = end % WORD;
        if rem > 0 {
            w += (self.words[full] & ((1u64 << rem) - 1)).count_ones() as usize;
        }
        w
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Position of the first set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |p| self.get(p))
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let bit = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(i * WORD + bit)
                }
            })
        })
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// GF(2) inner product over the common prefix of the two vectors.
    pub fn dot(&self, other: &BitVector) -> bool {
        let common = self.len.min(other.len);
        let full = common / WORD;
        let mut acc = 0u64;
        for i in 0..full {
            acc ^= self.words[i] & other.words[i];
        }
        let rem = common % WORD;
        if rem > 0 {
            acc ^= self.words[full] & other.words[full] & ((1u64 << rem) - 1);
        }
        acc.count_ones() % 2 == 1
    }

    /// The first `end` bits.
    pub fn prefix(&self, end: usize) -> BitVector {
        assert!(end <= self.len, "prefix {end} longer than vector {}", self.len);
        self.resized(end)
    }

    /// Truncates or zero-pads to `len` bits.
    pub fn resized(&self, len: usize) -> BitVector {
        let mut words = self.words.clone();
        words.truncate(words_for(len));
        BitVector::from_words(len, words)
    }

    pub fn slice(&self, start: usize, end: usize) -> BitVector {
        assert!(start <= end && end <= self.len);
        BitVector::from_bits((start..end).map(|p| self.get(p)))
    }

    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        for b in other.iter() {
            out.push(b);
        }
        out
    }

    /// Big-endian hex: bits are packed four per digit, position 0 first,
    /// with the last digit zero-padded on the right.
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4);
        let mut s = String::with_capacity(digits);
        for d in 0..digits {
            let mut nib = 0u32;
            for k in 0..4 {
                let pos = d * 4 + k;
                if pos < self.len && self.get(pos) {
                    nib |= 1 << (3 - k);
                }
            }
            s.push(char::from_digit(nib, 16).expect("nibble"));
        }
        s
    }

    /// Parses [`BitVector::to_hex`] output for a vector of `len` bits.
    /// Padding bits must be zero and the digit count must match exactly.
    pub fn from_hex(len: usize, hex: &str) -> Result<BitVector> {
        let hex = hex.trim();
        if hex.len() != len.div_ceil(4) {
            return Err(Error::parse(format!(
                "expected {} hex digits for {len} bits, found {}",
                len.div_ceil(4),
                hex.len()
            )));
        }
        let mut v = BitVector::zeros(len);
        for (d, c) in hex.chars().enumerate() {
            let nib = c
                .to_digit(16)
                .ok_or_else(|| Error::parse(format!("invalid hex digit {c:?}")))?;
            if c.is_ascii_uppercase() {
                return Err(Error::parse("hex digits must be lowercase"));
            }
            for k in 0..4 {
                let bit = (nib >> (3 - k)) & 1 == 1;
                let pos = d * 4 + k;
                if pos < len {
                    v.set(pos, bit);
                } else if bit {
                    return Err(Error::parse("nonzero padding bit in hex vector"));
                }
            }
        }
        Ok(v)
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem > 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

pub fn hamming_distance(a: &BitVector, b: &BitVector) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.words
        .iter()
        .zip(&b.words)
        .map(|(x, y)| (x ^ y).count_ones() as usize)
        .sum())
}

impl Ord for BitVector {
    fn cmp(&self, other: &Self) -> Ordering {
        let common = self.words.len().min(other.words.len());
        for i in 0..common {
            let diff = self.words[i] ^ other.words[i];
            if diff != 0 {
                let bit = diff.trailing_zeros();
                // the vector holding the zero at the first difference is smaller
                return if (self.words[i] >> bit) & 1 == 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for BitVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    /// Parses a string of `0`/`1` characters.
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::parse(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<bool>>>()
            .map(BitVector::from_bits)
    }
}

impl std::ops::BitXor for &BitVector {
    type Output = BitVector;

    fn bitxor(self, rhs: &BitVector) -> BitVector {
        self.xor(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    #[test]
    fn distance_examples() {
        assert_eq!(hamming_distance(&bv("1010"), &bv("0110")).unwrap(), 2);
        let v = bv("1100101");
        assert_eq!(hamming_distance(&v, &v).unwrap(), 0);
        assert_eq!(
            hamming_distance(&bv("11111111"), &bv("00000000")).unwrap(),
            8
        );
    }

    #[test]
    fn distance_length_mismatch() {
        assert!(matches!(
            hamming_distance(&bv("101"), &bv("10")),
            Err(Error::LengthMismatch { left: 3, right: 2 })
        ));
    }

    #[test]
    fn lexicographic_order() {
        assert!(bv("0111") < bv("1000"));
        assert!(bv("1010") > bv("1001"));
        let mut long = BitVector::zeros(130);
        let mut other = long.clone();
        long.set(100, true);
        other.set(129, true);
        assert!(other < long);
    }

    #[test]
    fn u64_mapping_is_big_endian() {
        let v = BitVector::from_u64(4, 0b1000);
        assert_eq!(v.to_string(), "1000");
        assert_eq!(v.to_u64(), 8);
        assert!(BitVector::from_u64(5, 3) < BitVector::from_u64(5, 4));
    }

    #[test]
    fn hex_padding_and_errors() {
        let v = bv("1011001");
        assert_eq!(v.to_hex(), "b2");
        assert_eq!(BitVector::from_hex(7, "b2").unwrap(), v);
        assert!(BitVector::from_hex(7, "b3").is_err());
        assert!(BitVector::from_hex(7, "b20").is_err());
        assert!(BitVector::from_hex(7, "B2").is_err());
        assert_eq!(BitVector::zeros(0).to_hex(), "");
    }

    #[test]
    fn prefix_weight_across_words() {
        let mut v = BitVector::zeros(200);
        for p in [0, 63, 64, 127, 150, 199] {
            v.set(p, true);
        }
        assert_eq!(v.prefix_weight(64), 2);
        assert_eq!(v.prefix_weight(65), 3);
        assert_eq!(v.prefix_weight(200), 6);
        assert_eq!(v.prefix(128).weight(), 4);
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![0, 63, 64, 127, 150, 199]);
    }

    #[test]
    fn dot_uses_common_prefix() {
        assert!(bv("011").dot(&bv("11")));
        assert!(!bv("11").dot(&bv("11")));
    }
}
