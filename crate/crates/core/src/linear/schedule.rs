use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::f2::{BitVector, SeededRandomSource};
use crate::linear::plan::{support, LinearCodePlan};

/// Coefficient rows of a prefix-supported linear code, materialized up to
/// the plan's horizon. Row `i` (1-based) holds `a_{1..ceil(tau*i), i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSchedule {
    plan: LinearCodePlan,
    rows: Vec<BitVector>,
}

/// Draws every coefficient uniformly from the plan's seed.
pub fn sample_generator(plan: &LinearCodePlan) -> Result<GeneratorSchedule> {
    plan.validate()?;
    let mut rng = SeededRandomSource::new(plan.seed);
    let rows = (1..=plan.horizon)
        .map(|i| rng.bits(plan.support(i)))
        .collect();
    Ok(GeneratorSchedule {
        plan: plan.clone(),
        rows,
    })
}

impl GeneratorSchedule {
    /// Wraps explicit rows; row `i` must have exactly `ceil(tau * i)` bits.
    pub fn from_rows(plan: LinearCodePlan, rows: Vec<BitVector>) -> Result<Self> {
        plan.validate()?;
        if rows.len() != plan.horizon {
            return Err(Error::PlanInvalid(format!(
                "{} rows supplied for horizon {}",
                rows.len(),
                plan.horizon
            )));
        }
        for (idx, row) in rows.iter().enumerate() {
            let want = plan.support(idx + 1);
            if row.len() != want {
                return Err(Error::LengthMismatch {
                    left: row.len(),
                    right: want,
                });
            }
        }
        Ok(GeneratorSchedule { plan, rows })
    }

    /// Rate-one control: row `i` is the `i`-th unit vector (`tau = 1`).
    pub fn identity(plan: LinearCodePlan) -> Result<Self> {
        let rows = (1..=plan.horizon).map(|i| BitVector::unit(i, i - 1)).collect();
        Self::from_rows(LinearCodePlan { tau: 1.0, ..plan }, rows)
    }

    pub fn plan(&self) -> &LinearCodePlan {
        &self.plan
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn horizon(&self) -> usize {
        self.plan.horizon
    }

    /// Message bits that the first `j` codeword bits depend on.
    pub fn message_bits(&self, j: usize) -> usize {
        if j == 0 {
            0
        } else {
            support(self.plan.tau, j)
        }
    }

    /// `C(x)[:j]`. Short messages are zero-padded, extra bits are ignored.
    pub fn encode_prefix(&self, message: &BitVector, j: usize) -> Result<BitVector> {
        self.check_horizon(j)?;
        Ok(BitVector::from_bits(self.rows[..j].iter().map(|r| r.dot(message))))
    }

    /// Generator columns for the prefix of length `j`: column `c` is the
    /// codeword prefix of the unit message `e_c`, for `c < message_bits(j)`.
    pub fn columns(&self, j: usize) -> Result<Vec<BitVector>> {
        self.check_horizon(j)?;
        let m = self.message_bits(j);
        let mut cols = vec![BitVector::zeros(j); m];
        for (t, row) in self.rows[..j].iter().enumerate() {
            for c in row.iter_ones() {
                cols[c].set(t, true);
            }
        }
        Ok(cols)
    }

    /// The same code cut at a shorter horizon.
    pub fn truncated(&self, horizon: usize) -> Result<Self> {
        self.check_horizon(horizon)?;
        let plan = LinearCodePlan {
            horizon,
            ..self.plan.clone()
        };
        plan.validate()?;
        Ok(GeneratorSchedule {
            plan,
            rows: self.rows[..horizon].to_vec(),
        })
    }

    fn check_horizon(&self, j: usize) -> Result<()> {
        if j > self.plan.horizon {
            return Err(Error::OutOfHorizon {
                j,
                horizon: self.plan.horizon,
            });
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let p = &self.plan;
        let mut out = format!(
            "lincode v1 eps={} R={} tau={} k0={} n={} seed={}\n",
            p.epsilon, p.rate, p.tau, p.k0, p.horizon, p.seed
        );
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.to_hex());
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::parse("empty lincode file"))?;
        let fields = parse_header(header, "lincode", &["eps", "R", "tau", "k0", "n", "seed"])?;
        let plan = LinearCodePlan {
            epsilon: parse_num(&fields[0], "eps")?,
            rate: parse_num(&fields[1], "R")?,
            tau: parse_num(&fields[2], "tau")?,
            k0: parse_num(&fields[3], "k0")?,
            horizon: parse_num(&fields[4], "n")?,
            seed: parse_num(&fields[5], "seed")?,
        };
        plan.validate().map_err(|e| Error::parse(e.to_string()))?;
        let mut rows = Vec::with_capacity(plan.horizon);
        for i in 1..=plan.horizon {
            let line = lines
                .next()
                .ok_or_else(|| Error::parse(format!("missing coefficient row {i}")))?;
            rows.push(BitVector::from_hex(plan.support(i), line)?);
        }
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::parse("trailing data after the last row"));
        }
        GeneratorSchedule::from_rows(plan, rows)
    }
}

/// Splits `<magic> v1 k1=v1 k2=v2 ...`, requiring exactly the given keys in
/// order, and returns the values.
pub(crate) fn parse_header(line: &str, magic: &str, keys: &[&str]) -> Result<Vec<String>> {
    let mut tokens = line.split_whitespace();
    if tokens.next() != Some(magic) {
        return Err(Error::parse(format!("expected a `{magic}` header")));
    }
    if tokens.next() != Some("v1") {
        return Err(Error::parse(format!("unsupported {magic} version")));
    }
    let mut values = Vec::with_capacity(keys.len());
    for key in keys {
        let tok = tokens
            .next()
            .ok_or_else(|| Error::parse(format!("header is missing `{key}=`")))?;
        let value = tok
            .strip_prefix(key)
            .and_then(|rest| rest.strip_prefix('='))
            .ok_or_else(|| Error::parse(format!("expected `{key}=`, found `{tok}`")))?;
        values.push(value.to_string());
    }
    if let Some(extra) = tokens.next() {
        return Err(Error::parse(format!("unexpected header field `{extra}`")));
    }
    Ok(values)
}

pub(crate) fn parse_num<T: std::str::FromStr>(value: &str, key: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::parse(format!("bad value `{value}` for {key}")))
}
