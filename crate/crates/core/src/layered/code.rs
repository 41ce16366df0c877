use std::fmt::Write as _;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVector};
use crate::linear::{parse_header, parse_num};
use crate::subset::SubsetCode;

/// One contiguous stretch of the codeword.
#[derive(Clone, Debug, PartialEq)]
pub enum Segment {
    /// The seed code: message bits `msg` times `generator` (one row per
    /// message bit).
    Base {
        start: usize,
        msg: Range<usize>,
        generator: BitMatrix,
    },
    /// `code.encode(B_j, b_j)`: the subset index comes from the message bits
    /// `block`, the point index from `sub`.
    Subset {
        start: usize,
        block: Range<usize>,
        sub: Range<usize>,
        code: SubsetCode,
    },
    /// Parity over every codeword bit before `start`.
    Checksum {
        start: usize,
        delta: f64,
        parity: BitMatrix,
    },
}

impl Segment {
    pub fn start(&self) -> usize {
        match self {
            Segment::Base { start, .. }
            | Segment::Subset { start, .. }
            | Segment::Checksum { start, .. } => *start,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Segment::Base { generator, .. } => generator.cols(),
            Segment::Subset { code, .. } => code.n(),
            Segment::Checksum { parity, .. } => parity.rows(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn end(&self) -> usize {
        self.start() + self.len()
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Segment::Base { .. } => "base",
            Segment::Subset { .. } => "subset",
            Segment::Checksum { .. } => "checksum",
        }
    }

    /// Message bits read by this segment.
    fn message_ranges(&self) -> Vec<Range<usize>> {
        match self {
            Segment::Base { msg, .. } => vec![msg.clone()],
            Segment::Subset { block, sub, .. } => vec![block.clone(), sub.clone()],
            Segment::Checksum { .. } => Vec::new(),
        }
    }
}

/// A concatenation of segments with a fixed message length.
#[derive(Clone, Debug, PartialEq)]
pub struct LayeredCode {
    epsilon: f64,
    message_length: usize,
    segments: Vec<Segment>,
}

fn bits_to_index(message: &BitVector, range: &Range<usize>) -> usize {
    range
        .clone()
        .fold(0usize, |acc, p| acc << 1 | message.get(p) as usize)
}

impl LayeredCode {
    /// Checks that segments tile `[0, n)`, that message ranges stay inside
    /// `message_length` and that every message bit is read somewhere.
    pub fn new(epsilon: f64, message_length: usize, segments: Vec<Segment>) -> Result<Self> {
        if epsilon.is_nan() || epsilon < 0.0 {
            return Err(Error::Domain {
                what: "epsilon",
                value: epsilon,
            });
        }
        let mut at = 0;
        let mut read = vec![false; message_length];
        for (idx, seg) in segments.iter().enumerate() {
            if seg.start() != at {
                return Err(Error::PlanInvalid(format!(
                    "segment {idx} starts at {} but the previous one ends at {at}",
                    seg.start()
                )));
            }
            match seg {
                Segment::Base { msg, generator, .. } => {
                    if generator.rows() != msg.len() {
                        return Err(Error::PlanInvalid(format!(
                            "base generator has {} rows for {} message bits",
                            generator.rows(),
                            msg.len()
                        )));
                    }
                }
                Segment::Subset { block, sub, code, .. } => {
                    let p = code.params();
                    if 1usize.checked_shl(block.len() as u32) != Some(p.k)
                        || 1usize.checked_shl(sub.len() as u32) != Some(p.t)
                    {
                        return Err(Error::PlanInvalid(format!(
                            "subset code with K={} T={} does not encode {}+{} bits exactly",
                            p.k,
                            p.t,
                            block.len(),
                            sub.len()
                        )));
                    }
                }
                Segment::Checksum { parity, .. } => {
                    if parity.cols() != at {
                        return Err(Error::PlanInvalid(format!(
                            "checksum covers {} bits but starts at {at}",
                            parity.cols()
                        )));
                    }
                }
            }
            for r in seg.message_ranges() {
                if r.end > message_length {
                    return Err(Error::PlanInvalid(format!(
                        "segment {idx} reads message bits {r:?} beyond length {message_length}"
                    )));
                }
                for p in r {
                    read[p] = true;
                }
            }
            at = seg.end();
        }
        if let Some(p) = read.iter().position(|r| !r) {
            return Err(Error::PlanInvalid(format!("message bit {p} is never encoded")));
        }
        Ok(LayeredCode {
            epsilon,
            message_length,
            segments,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn message_length(&self) -> usize {
        self.message_length
    }

    pub fn codeword_length(&self) -> usize {
        self.segments.last().map_or(0, Segment::end)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// The code made of the first `count` segments, over the same message.
    /// Dropping the trailing checksum gives the negative control for the
    /// checksum's role.
    pub fn with_segments(&self, count: usize) -> Result<LayeredCode> {
        LayeredCode::new(
            self.epsilon,
            self.message_length,
            self.segments[..count.min(self.segments.len())].to_vec(),
        )
    }

    /// Ends of the checksum segments.
    pub fn checksum_boundaries(&self) -> Vec<usize> {
        self.segments
            .iter()
            .filter(|s| matches!(s, Segment::Checksum { .. }))
            .map(Segment::end)
            .collect()
    }

    /// Number of message bits the prefix of length `j` commits to. Completed
    /// base and checksum segments secure everything read so far; a completed
    /// subset segment adds its block index `B_j` on top. The full codeword
    /// commits to the whole message.
    pub fn decodable_prefix_length(&self, j: usize) -> usize {
        if j >= self.codeword_length() {
            return self.message_length;
        }
        let mut covered_end = 0;
        let mut secured = 0;
        let mut pending = 0;
        for seg in &self.segments {
            if seg.end() > j {
                break;
            }
            match seg {
                Segment::Base { msg, .. } => {
                    covered_end = covered_end.max(msg.end);
                    secured = covered_end;
                    pending = 0;
                }
                Segment::Subset { block, sub, .. } => {
                    covered_end = covered_end.max(block.end).max(sub.end);
                    pending += block.len();
                }
                Segment::Checksum { .. } => {
                    secured = covered_end;
                    pending = 0;
                }
            }
        }
        (secured + pending).min(self.message_length)
    }

    /// `min D(j)/j` over `j >= from`: the rate the layout guarantees.
    pub fn guaranteed_rate(&self, from: usize) -> f64 {
        (from.max(1)..=self.codeword_length())
            .map(|j| self.decodable_prefix_length(j) as f64 / j as f64)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "layered v1 eps={} m={} n={}\n",
            self.epsilon,
            self.message_length,
            self.codeword_length()
        );
        let rows_hex = |m: &BitMatrix| {
            m.row_vectors()
                .iter()
                .map(|r| if r.is_empty() { "-".to_string() } else { r.to_hex() })
                .collect::<Vec<_>>()
                .join(";")
        };
        for seg in &self.segments {
            let _ = write!(out, "{} {} {}", seg.kind(), seg.start(), seg.len());
            match seg {
                Segment::Base { msg, generator, .. } => {
                    let _ = writeln!(out, " msg={}+{} gen={}", msg.start, msg.len(), rows_hex(generator));
                }
                Segment::Subset { block, sub, code, .. } => {
                    let _ = writeln!(
                        out,
                        " block={}+{} sub={}+{}",
                        block.start,
                        block.len(),
                        sub.start,
                        sub.len()
                    );
                    for line in code.to_text().lines() {
                        let _ = writeln!(out, "  {line}");
                    }
                }
                Segment::Checksum { delta, parity, .. } => {
                    let _ = writeln!(out, " delta={delta} parity={}", rows_hex(parity));
                }
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<LayeredCode> {
        let lines: Vec<&str> = text.lines().collect();
        let header = lines.first().ok_or_else(|| Error::parse("empty layered file"))?;
        let f = parse_header(header, "layered", &["eps", "m", "n"])?;
        let epsilon: f64 = parse_num(&f[0], "eps")?;
        let m: usize = parse_num(&f[1], "m")?;
        let n: usize = parse_num(&f[2], "n")?;
        let mut segments = Vec::new();
        let mut idx = 1;
        while idx < lines.len() {
            let line = lines[idx];
            idx += 1;
            if line.trim().is_empty() {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() < 3 {
                return Err(Error::parse(format!("bad segment line `{line}`")));
            }
            let start: usize = parse_num(tokens[1], "segment start")?;
            let len: usize = parse_num(tokens[2], "segment length")?;
            let field = |pos: usize, key: &str| -> Result<&str> {
                tokens
                    .get(pos)
                    .and_then(|t| t.strip_prefix(key))
                    .and_then(|t| t.strip_prefix('='))
                    .ok_or_else(|| Error::parse(format!("segment line `{line}` lacks `{key}=`")))
            };
            let extra = |count: usize| -> Result<()> {
                if tokens.len() > count {
                    return Err(Error::parse(format!("unexpected fields in `{line}`")));
                }
                Ok(())
            };
            let seg = match tokens[0] {
                "base" => {
                    extra(5)?;
                    let msg = parse_range(field(3, "msg")?)?;
                    let generator = parse_rows(field(4, "gen")?, len, msg.len())?;
                    Segment::Base { start, msg, generator }
                }
                "subset" => {
                    extra(5)?;
                    let block = parse_range(field(3, "block")?)?;
                    let sub = parse_range(field(4, "sub")?)?;
                    let mut body = String::new();
                    while idx < lines.len() && lines[idx].starts_with("  ") {
                        body.push_str(&lines[idx][2..]);
                        body.push('\n');
                        idx += 1;
                    }
                    let code = SubsetCode::from_text(&body)?;
                    if code.n() != len {
                        return Err(Error::parse(format!(
                            "subset segment of length {len} holds a code of length {}",
                            code.n()
                        )));
                    }
                    Segment::Subset { start, block, sub, code }
                }
                "checksum" => {
                    extra(5)?;
                    let delta = parse_num(field(3, "delta")?, "delta")?;
                    let parity = parse_rows(field(4, "parity")?, start, len)?;
                    Segment::Checksum { start, delta, parity }
                }
                other => return Err(Error::parse(format!("unknown segment kind `{other}`"))),
            };
            if seg.len() != len {
                return Err(Error::parse(format!("segment `{line}` has inconsistent length")));
            }
            segments.push(seg);
        }
        let code = LayeredCode::new(epsilon, m, segments).map_err(|e| Error::parse(e.to_string()))?;
        if code.codeword_length() != n {
            return Err(Error::parse(format!(
                "header says n={n} but segments end at {}",
                code.codeword_length()
            )));
        }
        Ok(code)
    }
}

fn parse_range(s: &str) -> Result<Range<usize>> {
    let (a, b) = s
        .split_once('+')
        .ok_or_else(|| Error::parse(format!("expected start+len, found `{s}`")))?;
    let a: usize = parse_num(a, "range start")?;
    let b: usize = parse_num(b, "range length")?;
    Ok(a..a + b)
}

fn parse_rows(s: &str, cols: usize, rows: usize) -> Result<BitMatrix> {
    let parsed: Vec<BitVector> = if rows == 0 {
        if !s.is_empty() {
            return Err(Error::parse("rows given for an empty matrix"));
        }
        Vec::new()
    } else {
        s.split(';')
            .map(|h| {
                if h == "-" {
                    Ok(BitVector::zeros(cols))
                } else {
                    BitVector::from_hex(cols, h)
                }
            })
            .collect::<Result<_>>()?
    };
    if parsed.len() != rows {
        return Err(Error::parse(format!("expected {rows} rows, found {}", parsed.len())));
    }
    BitMatrix::from_rows(cols, parsed)
}

/// Encodes a full message, segment by segment.
pub fn encode_layered(code: &LayeredCode, message: &BitVector) -> Result<BitVector> {
    if message.len() != code.message_length() {
        return Err(Error::LengthMismatch {
            left: message.len(),
            right: code.message_length(),
        });
    }
    let mut out = BitVector::zeros(0);
    for seg in code.segments() {
        let part = match seg {
            Segment::Base { msg, generator, .. } => {
                let mut acc = BitVector::zeros(generator.cols());
                for (row, p) in msg.clone().enumerate() {
                    if message.get(p) {
                        acc.xor_assign(generator.row(row));
                    }
                }
                acc
            }
            Segment::Subset { block, sub, code, .. } => {
                code.encode(bits_to_index(message, block), bits_to_index(message, sub))?
            }
            Segment::Checksum { parity, .. } => parity.mul_vec(&out)?,
        };
        out = out.concat(&part);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_is_big_endian() {
        let m: BitVector = "0110".parse().unwrap();
        assert_eq!(bits_to_index(&m, &(0..4)), 6);
        assert_eq!(bits_to_index(&m, &(2..4)), 2);
        assert_eq!(bits_to_index(&m, &(1..1)), 0);
    }
}
