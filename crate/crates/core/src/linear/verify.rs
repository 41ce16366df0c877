use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::f2::entropy::ball_size;
use crate::f2::{ceil_tol, floor_tol, for_each_combination, BitVector, Eliminator};
use crate::linear::plan::LinearCodePlan;
use crate::linear::schedule::{sample_generator, GeneratorSchedule};
use crate::report::{Counterexample, VerificationReport};

/// Default bound on the total enumeration work of one verification run.
pub const DEFAULT_CAP: u128 = 1 << 26;

/// Which distance requirement a linear schedule is checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceCriterion {
    /// Weight at least `eps * j` whenever the first difference is at
    /// `i <= R j`, for every `j >= k0 / R`.
    Unbounded,
    /// Weight at least `3 eps (j - i / tau)`, with `tau` acting as `r0`.
    RandomError,
}

impl DistanceCriterion {
    pub fn threshold(self, plan: &LinearCodePlan, i: usize, j: usize) -> f64 {
        match self {
            DistanceCriterion::Unbounded => plan.epsilon * j as f64,
            DistanceCriterion::RandomError => {
                3.0 * plan.epsilon * (j as f64 - i as f64 / plan.tau)
            }
        }
    }

    /// Integer weight demanded at `(i, j)`. Distinct messages must at least
    /// produce distinct prefixes, so the requirement never drops below 1.
    pub fn required(self, plan: &LinearCodePlan, i: usize, j: usize) -> usize {
        ceil_tol(self.threshold(plan, i, j)).max(1)
    }
}

pub fn verify_unbounded_distance(schedule: &GeneratorSchedule) -> Result<VerificationReport> {
    verify_distance(schedule, DistanceCriterion::Unbounded, DEFAULT_CAP)
}

pub fn verify_random_error_distance(schedule: &GeneratorSchedule) -> Result<VerificationReport> {
    verify_distance(schedule, DistanceCriterion::RandomError, DEFAULT_CAP)
}

/// Exhaustive check of `criterion` for every prefix length
/// `j in [ceil(k0/R), n]` and every first-difference position
/// `i in [1, floor(R j)]`.
///
/// By linearity it suffices to look at difference vectors `x` whose first
/// one sits at `i`; their codeword prefixes form the coset
/// `c_i + span(c_{i+1}, ...)` of generator columns. Each coset is searched
/// either by walking all message suffixes or by testing every light error
/// pattern for coset membership, whichever is cheaper. The counterexample
/// reported is the one with the smallest `(i, j)`, and within it the
/// lexicographically smallest offending `x`.
pub fn verify_distance(
    schedule: &GeneratorSchedule,
    criterion: DistanceCriterion,
    cap: u128,
) -> Result<VerificationReport> {
    let plan = schedule.plan();
    plan.validate()?;
    let lengths: Vec<usize> = (plan.first_checked_length()..=plan.horizon).collect();
    let max_k = |j: usize| floor_tol(plan.rate * j as f64).min(schedule.message_bits(j));

    let mut needed: u128 = 0;
    let mut checked: u64 = 0;
    for &j in &lengths {
        let m = schedule.message_bits(j);
        for k in 1..=max_k(j) {
            let req = criterion.required(plan, k, j);
            needed = needed.saturating_add(route_cost(j, m - k, req));
            checked += 1;
        }
    }
    if needed > cap {
        return Err(Error::ScaleExceeded { needed, cap });
    }

    let found: Vec<Option<(usize, usize, BitVector, usize)>> = lengths
        .par_iter()
        .map(|&j| {
            let cols = schedule.columns(j)?;
            let kmax = max_k(j);
            let mut search = CosetSearch::new(j, &cols);
            search.absorb_down_to(kmax);
            let mut worst = None;
            for p in (0..kmax).rev() {
                let req = criterion.required(plan, p + 1, j);
                if let Some((x, w)) = search.lightest_violation(p, req) {
                    worst = Some((p + 1, j, x, w));
                }
                search.absorb_down_to(p);
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;

    let first = found
        .into_iter()
        .flatten()
        .min_by_key(|(k, j, _, _)| (*k, *j));
    let counterexample = first.map(|(i, j, difference, achieved)| Counterexample::Prefix {
        i,
        j,
        difference,
        achieved,
        required: criterion.threshold(plan, i, j),
    });
    let rule = match criterion {
        DistanceCriterion::Unbounded => "weight >= max(1, ceil(eps*j))",
        DistanceCriterion::RandomError => "weight >= max(1, ceil(3*eps*(j - i/tau)))",
    };
    Ok(VerificationReport::from_outcome(counterexample, checked).with_note(format!(
        "{rule} for 1 <= i <= floor(R*j), {} <= j <= {}; guarantees asserted only up to the horizon",
        plan.first_checked_length(),
        plan.horizon
    )))
}

/// Minimum weight of `C(x)[:j]` over all `x` whose first one lies at a
/// position `i <= max_k`: the exact adversarial distance of this prefix.
pub fn prefix_distance(schedule: &GeneratorSchedule, j: usize, max_k: usize, cap: u128) -> Result<usize> {
    let cols = schedule.columns(j)?;
    let kmax = max_k.min(cols.len());
    if kmax == 0 {
        return Err(Error::Degenerate(format!(
            "no message bits constrained at prefix length {j}"
        )));
    }
    let mut search = CosetSearch::new(j, &cols);
    search.absorb_down_to(kmax);
    let mut budget = cap;
    let mut best = j + 1;
    for p in (0..kmax).rev() {
        if let Some(w) = search.min_weight_below(p, best, &mut budget)? {
            best = w;
        }
        search.absorb_down_to(p);
    }
    Ok(best)
}

/// Rejection sampling: attempt `a` (0-based) draws a schedule from seed
/// `plan.seed ^ a` and keeps the first one that verifies. Returns the
/// schedule (whose plan records the successful seed) and the 1-based attempt
/// count.
pub fn construct_with_retries(plan: &LinearCodePlan, max_attempts: usize) -> Result<(GeneratorSchedule, usize)> {
    construct_with_criterion(plan, max_attempts, DistanceCriterion::Unbounded, DEFAULT_CAP)
}

pub fn construct_with_criterion(
    plan: &LinearCodePlan,
    max_attempts: usize,
    criterion: DistanceCriterion,
    cap: u128,
) -> Result<(GeneratorSchedule, usize)> {
    if max_attempts == 0 {
        return Err(Error::PlanInvalid("max_attempts must be at least 1".into()));
    }
    let mut last = None;
    for attempt in 0..max_attempts {
        let candidate = sample_generator(&plan.with_seed(plan.seed ^ attempt as u64))?;
        let report = verify_distance(&candidate, criterion, cap)?;
        if report.passed {
            return Ok((candidate, attempt + 1));
        }
        last = report.counterexample.map(Box::new);
    }
    Err(Error::ConstructionFailed {
        attempts: max_attempts,
        last,
    })
}

fn route_cost(j: usize, suffix_len: usize, req: usize) -> u128 {
    if req > j {
        return 1;
    }
    suffix_cost(suffix_len).min(pattern_cost(j, req))
}

fn suffix_cost(suffix_len: usize) -> u128 {
    if suffix_len >= 127 {
        u128::MAX
    } else {
        1u128 << suffix_len
    }
}

/// Number of error patterns of weight `< req` in `j` bits.
fn pattern_cost(j: usize, req: usize) -> u128 {
    if req == 0 {
        return 0;
    }
    ball_size(j, req - 1).to_u128().unwrap_or(u128::MAX)
}

/// Incremental search over the cosets `c_p + span(c_{p+1}, ..., c_{m-1})`
/// for decreasing `p`.
struct CosetSearch<'a> {
    j: usize,
    cols: &'a [BitVector],
    elim: Eliminator,
    /// Columns with index `>= absorbed` are in the span.
    absorbed: usize,
}

impl<'a> CosetSearch<'a> {
    fn new(j: usize, cols: &'a [BitVector]) -> Self {
        CosetSearch {
            j,
            cols,
            elim: Eliminator::with_vars(j, cols.len()),
            absorbed: cols.len(),
        }
    }

    fn absorb_down_to(&mut self, p: usize) {
        while self.absorbed > p {
            self.absorbed -= 1;
            self.elim.push_var(&self.cols[self.absorbed], self.absorbed);
        }
    }

    /// Lexicographically smallest `x` with first one at `p` and
    /// `wt(C(x)[:j]) < req`, with that weight. Expects exactly the columns
    /// after `p` to be absorbed.
    fn lightest_violation(&self, p: usize, req: usize) -> Option<(BitVector, usize)> {
        debug_assert_eq!(self.absorbed, p + 1);
        let m = self.cols.len();
        if req > self.j {
            return Some((BitVector::unit(m, p), self.cols[p].weight()));
        }
        let suffix = m - p - 1;
        if suffix < 64 && suffix_cost(suffix) <= pattern_cost(self.j, req) {
            self.suffix_walk(p, req)
        } else {
            self.pattern_walk(p, req)
        }
    }

    /// Walks message suffixes in numeric (= lexicographic) order.
    fn suffix_walk(&self, p: usize, req: usize) -> Option<(BitVector, usize)> {
        let m = self.cols.len();
        let len = m - p - 1;
        let col_of_bit = |b: u32| p + len - b as usize;
        let mut cur = self.cols[p].clone();
        let mut s: u64 = 0;
        loop {
            let w = cur.weight();
            if w < req {
                let mut x = BitVector::unit(m, p);
                for b in 0..len as u32 {
                    if s >> b & 1 == 1 {
                        x.set(col_of_bit(b), true);
                    }
                }
                return Some((x, w));
            }
            if len == 0 || s == (u64::MAX >> (64 - len)) {
                return None;
            }
            let changed = s ^ (s + 1);
            s += 1;
            for b in 0..=(63 - changed.leading_zeros()) {
                cur.xor_assign(&self.cols[col_of_bit(b)]);
            }
        }
    }

    /// Tests every error pattern `e` of weight `< req` for membership in the
    /// coset, then maps each hit back to its lexicographically smallest
    /// preimage.
    fn pattern_walk(&self, p: usize, req: usize) -> Option<(BitVector, usize)> {
        let target = self.elim.residual(&self.cols[p]);
        let units: Vec<BitVector> = (0..self.j)
            .map(|t| self.elim.residual(&BitVector::unit(self.j, t)))
            .collect();
        let mut best: Option<(BitVector, usize)> = None;
        for w in 0..req {
            for_each_combination(self.j, w, |support| {
                let mut acc = target.clone();
                for &t in support {
                    acc.xor_assign(&units[t]);
                }
                if acc.is_zero() {
                    let mut rhs = self.cols[p].clone();
                    for &t in support {
                        rhs.flip(t);
                    }
                    let combo = self.elim.solve(&rhs).expect("pattern lies in the coset");
                    let mut x = self.elim.lex_min(&combo);
                    x.set(p, true);
                    if best.as_ref().is_none_or(|(b, _)| x < *b) {
                        best = Some((x, w));
                    }
                }
                true
            });
        }
        best
    }

    /// Minimum weight in the coset at `p` if it is below `below`.
    fn min_weight_below(&self, p: usize, below: usize, budget: &mut u128) -> Result<Option<usize>> {
        let suffix = self.cols.len() - p - 1;
        if suffix < 64 && suffix_cost(suffix) <= pattern_cost(self.j, below) {
            spend(budget, suffix_cost(suffix))?;
            let mut cur = self.cols[p].clone();
            let mut min = cur.weight();
            // Gray-code walk over the suffix columns
            for g in 1u64..(1u64 << suffix) {
                cur.xor_assign(&self.cols[p + 1 + g.trailing_zeros() as usize]);
                min = min.min(cur.weight());
            }
            return Ok((min < below).then_some(min));
        }
        let target = self.elim.residual(&self.cols[p]);
        let units: Vec<BitVector> = (0..self.j)
            .map(|t| self.elim.residual(&BitVector::unit(self.j, t)))
            .collect();
        for w in 0..below {
            spend(budget, pattern_cost(self.j, w + 1) - pattern_cost(self.j, w))?;
            let complete = for_each_combination(self.j, w, |support| {
                let mut acc = target.clone();
                for &t in support {
                    acc.xor_assign(&units[t]);
                }
                !acc.is_zero()
            });
            if !complete {
                return Ok(Some(w));
            }
        }
        Ok(None)
    }
}

fn spend(budget: &mut u128, amount: u128) -> Result<()> {
    if amount > *budget {
        return Err(Error::ScaleExceeded {
            needed: amount,
            cap: *budget,
        });
    }
    *budget -= amount;
    Ok(())
}
