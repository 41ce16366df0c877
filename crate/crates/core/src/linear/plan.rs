use crate::error::{Error, Result};
use crate::f2::{binary_entropy, ceil_tol};

/// Parameters of the prefix-supported random linear construction.
///
/// `tau` is the rate at which message bits are introduced: codeword bit `i`
/// (1-based) depends on the first `ceil(tau * i)` message bits only. For the
/// random-error variant the same field plays the role of `r0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearCodePlan {
    pub epsilon: f64,
    pub rate: f64,
    pub tau: f64,
    pub k0: usize,
    pub horizon: usize,
    pub seed: u64,
}

impl LinearCodePlan {
    /// Checks `0 <= eps`, `0 < R < tau <= 1`, `k0 >= 1` and
    /// `horizon >= k0 / R`.
    ///
    /// `tau = 1` and `eps >= 1` are accepted so that rate-one controls and
    /// hopeless targets can be expressed; the construction simply fails on
    /// the latter.
    pub fn validate(&self) -> Result<()> {
        let finite = [self.epsilon, self.rate, self.tau].iter().all(|v| v.is_finite());
        if !finite {
            return Err(Error::PlanInvalid("non-finite parameter".into()));
        }
        if self.epsilon < 0.0 {
            return Err(Error::PlanInvalid(format!("eps={} is negative", self.epsilon)));
        }
        if !(self.rate > 0.0 && self.rate < self.tau && self.tau <= 1.0) {
            return Err(Error::PlanInvalid(format!(
                "need 0 < R < tau <= 1, got R={} tau={}",
                self.rate, self.tau
            )));
        }
        if self.k0 == 0 {
            return Err(Error::PlanInvalid("k0 must be at least 1".into()));
        }
        if self.horizon < self.first_checked_length() {
            return Err(Error::PlanInvalid(format!(
                "horizon {} is shorter than k0/R = {}",
                self.horizon,
                self.first_checked_length()
            )));
        }
        Ok(())
    }

    /// `ceil(k0 / R)`: the shortest codeword prefix the definition constrains.
    pub fn first_checked_length(&self) -> usize {
        ceil_tol(self.k0 as f64 / self.rate).max(1)
    }

    /// Number of message bits that codeword bit `i` (1-based) may depend on.
    pub fn support(&self, i: usize) -> usize {
        support(self.tau, i)
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        LinearCodePlan {
            seed,
            ..self.clone()
        }
    }
}

pub(crate) fn support(tau: f64, i: usize) -> usize {
    ceil_tol(tau * i as f64)
}

/// `1 - tau - H(eps / (1 - R/tau))`; positive exactly when a random
/// prefix-supported linear code is unbounded with positive probability.
pub fn feasibility_margin(epsilon: f64, rate: f64, tau: f64) -> Result<f64> {
    let ratio = margin_ratio(epsilon, rate, tau)?;
    Ok(1.0 - tau - binary_entropy(ratio)?)
}

fn margin_ratio(epsilon: f64, rate: f64, tau: f64) -> Result<f64> {
    if !(rate > 0.0 && rate < tau && tau <= 1.0) {
        return Err(Error::Domain {
            what: "introduction rate tau (needs R < tau <= 1)",
            value: tau,
        });
    }
    if epsilon.is_nan() || epsilon < 0.0 {
        return Err(Error::Domain {
            what: "epsilon",
            value: epsilon,
        });
    }
    let ratio = epsilon / (1.0 - rate / tau);
    if ratio >= 1.0 {
        return Err(Error::Infeasible(format!(
            "eps/(1-R/tau) = {ratio} is not below 1"
        )));
    }
    Ok(ratio)
}

/// The rate pair used by the existence theorem:
/// `R = 1 - 4s`, `tau = R / (1 - s)` with `s = sqrt(eps log2(1/eps))`.
pub fn default_tau(epsilon: f64) -> Result<(f64, f64)> {
    if !(epsilon > 0.0 && epsilon < 1.0 / 17.0) {
        return Err(Error::Infeasible(format!(
            "eps={epsilon} must lie in (0, 1/17)"
        )));
    }
    let s = (epsilon * (1.0 / epsilon).log2()).sqrt();
    let rate = 1.0 - 4.0 * s;
    if rate <= 0.0 {
        return Err(Error::Infeasible(format!(
            "eps={epsilon} leaves no positive rate"
        )));
    }
    let tau = rate / (1.0 - s);
    let margin = feasibility_margin(epsilon, rate, tau)?;
    if margin <= 0.0 {
        return Err(Error::Infeasible(format!(
            "eps={epsilon}: R={rate} tau={tau} have margin {margin}"
        )));
    }
    Ok((rate, tau))
}

/// Leading-order exponent of the bound on `log2 Pr(B_ij)`, the event that
/// some difference vector first nonzero at `i` is too light at length `j`:
/// `-(margin) * (1 - R/tau) * j`. The sublinear correction is omitted, so
/// this is a diagnostic rather than a rigorous bound.
pub fn bij_log_prob_bound(i: usize, j: usize, epsilon: f64, rate: f64, tau: f64) -> Result<f64> {
    let margin = feasibility_margin(epsilon, rate, tau)?;
    if (j as f64) < i as f64 / rate - 1e-9 {
        return Err(Error::Domain {
            what: "prefix length j (needs j >= i/R)",
            value: j as f64,
        });
    }
    Ok(-margin * (1.0 - rate / tau) * j as f64)
}
