use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::f2::{ceil_tol, BitVector, Eliminator};
use crate::linear::GeneratorSchedule;
use crate::report::{Counterexample, VerificationReport};

/// Slack for comparing real-valued sides of the inequalities.
const TOL: f64 = 1e-9;

/// `H(i)`: dimension of the code projected to its first `i` coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankProfile {
    values: Vec<usize>,
}

/// `r(i) = i - H(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RedundancyProfile {
    values: Vec<usize>,
}

impl RankProfile {
    /// Profile of the code whose `t`-th codeword bit is `<rows[t], x>`; rows
    /// may have different lengths (shorter ones are zero-padded).
    pub fn from_rows(rows: &[BitVector]) -> Self {
        let width = rows.iter().map(BitVector::len).max().unwrap_or(0);
        let mut elim = Eliminator::new(width);
        let mut values = Vec::with_capacity(rows.len() + 1);
        values.push(0);
        for r in rows {
            elim.push(&r.resized(width));
            values.push(elim.rank());
        }
        RankProfile { values }
    }

    pub fn from_values(values: Vec<usize>) -> Result<Self> {
        if values.first() != Some(&0) {
            return Err(Error::Degenerate("a rank profile starts at H(0) = 0".into()));
        }
        if values.windows(2).any(|w| w[1] < w[0] || w[1] > w[0] + 1) {
            return Err(Error::Degenerate("rank profile steps must be 0 or 1".into()));
        }
        Ok(RankProfile { values })
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// The last index `n`.
    pub fn len(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Smallest `i` with `H(i) >= t`, or `n + 1` when no prefix reaches `t`.
    pub fn inverse(&self, t: usize) -> usize {
        // values are non-decreasing
        self.values.partition_point(|&h| h < t)
    }

    pub fn redundancy(&self) -> RedundancyProfile {
        RedundancyProfile {
            values: self.values.iter().enumerate().map(|(i, h)| i - h).collect(),
        }
    }

    pub fn as_reals(&self) -> Vec<f64> {
        self.values.iter().map(|&v| v as f64).collect()
    }
}

impl RedundancyProfile {
    pub fn values(&self) -> &[usize] {
        &self.values
    }
}

/// Rank profile of a linear schedule up to `n`.
pub fn rank_profile(schedule: &GeneratorSchedule, n: usize) -> Result<RankProfile> {
    if n > schedule.horizon() {
        return Err(Error::OutOfHorizon {
            j: n,
            horizon: schedule.horizon(),
        });
    }
    Ok(RankProfile::from_rows(&schedule.rows()[..n]))
}

/// `i <value>` per line, for plotting.
pub fn profile_records<T: std::fmt::Display>(values: &[T]) -> String {
    let mut out = String::new();
    for (i, v) in values.iter().enumerate() {
        let _ = writeln!(out, "{i} {v}");
    }
    out
}

fn first_violation(
    lo: usize,
    hi: usize,
    mut side: impl FnMut(usize) -> (f64, f64),
) -> (Option<Counterexample>, u64) {
    let mut checked = 0;
    for i in lo..=hi {
        checked += 1;
        let (lhs, rhs) = side(i);
        if lhs > rhs + TOL {
            return (Some(Counterexample::Inequality { i, j: None, lhs, rhs }), checked);
        }
    }
    (None, checked)
}

/// `r(i) <= (1 - R) i + 1` for `i` in `[k0, n]`.
pub fn check_redundancy_upper(profile: &RedundancyProfile, rate: f64, k0: usize) -> VerificationReport {
    let n = profile.values.len() - 1;
    let (cx, checked) = first_violation(k0, n, |i| {
        (profile.values[i] as f64, (1.0 - rate) * i as f64 + 1.0)
    });
    VerificationReport::from_outcome(cx, checked)
        .with_note(format!("r(i) <= (1-R) i + 1 over i in [{k0}, {n}]"))
}

/// Same inequality on a real-valued entropy profile: `i - H(i) <= (1-R) i + 1`.
pub fn check_entropy_r_upper(profile: &[f64], rate: f64, k0: usize) -> VerificationReport {
    let n = profile.len().saturating_sub(1);
    let (cx, checked) = first_violation(k0, n, |i| {
        (i as f64 - profile[i], (1.0 - rate) * i as f64 + 1.0)
    });
    VerificationReport::from_outcome(cx, checked)
        .with_note(format!("i - H(i) <= (1-R) i + 1 over i in [{k0}, {n}]"))
}

/// `r(j) - r(H^-1(i)) >= eps j - 1` for `i >= k0` and `ceil(i/R) <= j <= n`.
/// Pairs where `H` never reaches `i` are skipped and counted in a note.
pub fn check_linearsub(profile: &RankProfile, epsilon: f64, rate: f64, k0: usize) -> VerificationReport {
    let n = profile.len();
    let r = profile.redundancy();
    let mut checked = 0u64;
    let mut untestable = 0u64;
    let mut vacuous = true;
    let mut violation = None;
    'outer: for i in k0.max(1)..=n {
        let first_j = ceil_tol(i as f64 / rate);
        if first_j > n {
            break;
        }
        let h_inv = profile.inverse(i);
        for j in first_j..=n {
            if h_inv > n {
                untestable += 1;
                continue;
            }
            checked += 1;
            let rhs = epsilon * j as f64 - 1.0;
            vacuous &= rhs <= 0.0;
            let lhs = r.values[j] as f64 - r.values[h_inv] as f64;
            if lhs + TOL < rhs {
                // the inequality reads eps j - 1 <= r(j) - r(H^-1(i))
                violation = Some(Counterexample::Inequality {
                    i,
                    j: Some(j),
                    lhs: rhs,
                    rhs: lhs,
                });
                break 'outer;
            }
        }
    }
    let mut report = VerificationReport::from_outcome(violation, checked)
        .with_note("eps j - 1 <= r(j) - r(H^-1(i)) over i >= k0, j >= i/R");
    if untestable > 0 {
        report = report.with_note(format!(
            "{untestable} pairs skipped: H^-1(i) lies beyond the horizon"
        ));
    }
    if vacuous && checked > 0 {
        report = report.with_note("eps j <= 1 throughout: the bound is vacuous here");
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_example() {
        let rows: Vec<BitVector> = ["1", "11", "11"].iter().map(|s| s.parse().unwrap()).collect();
        let p = RankProfile::from_rows(&rows);
        assert_eq!(p.values(), &[0, 1, 2, 2]);
        assert_eq!(p.inverse(0), 0);
        assert_eq!(p.inverse(2), 2);
        assert_eq!(p.inverse(3), 4);
        assert_eq!(p.redundancy().values(), &[0, 0, 0, 1]);
        assert_eq!(profile_records(&p.values()[..2]), "0 0\n1 1\n");
    }

    #[test]
    fn bad_profiles_rejected() {
        assert!(RankProfile::from_values(vec![0, 2]).is_err());
        assert!(RankProfile::from_values(vec![1]).is_err());
        assert!(RankProfile::from_values(vec![0, 1, 1, 2]).is_ok());
    }
}
