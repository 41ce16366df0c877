use streamcode::channels::{
    decode_nearest_capped, monte_carlo_bsc, packetized_baseline, sample_pattern, wilson_half_width,
    ChannelSpec, ErrorPattern, DECODE_CAP,
};
use streamcode::f2::{binary_entropy, floor_tol, BitVector, SeededRandomSource};
use streamcode::layered::{
    extend, make_checksum, make_checksum_with_rows, seed_code, verify_layered, LayeredCode,
    LayeredPlan, SystematicChecksum,
};
use streamcode::linear::{
    construct_with_criterion, feasibility_margin, verify_distance, DistanceCriterion,
    GeneratorSchedule, LinearCodePlan, DEFAULT_CAP,
};
use streamcode::subset::{
    greedy_construct, subset_diagnostics, trivial_two_set, verify_subset_distance, SubsetCode,
};
use streamcode::{Error, VerificationReport};

use crate::output::{BoundsRow, ReportRow, SimRow, BOUNDS_SCHEMA, SUMMARY_SCHEMA, TRIAL_SCHEMA};
use crate::{
    read_file, Channel, ChecksumArgs, CliError, Criterion, LayeredArgs, LinearArgs, SimulateArgs,
    SubsetArgs, SubsetMethod, VerifyArgs,
};

pub struct Built {
    pub artifact: String,
    pub report: VerificationReport,
    pub row: ReportRow,
}

fn criterion(c: Criterion) -> DistanceCriterion {
    match c {
        Criterion::Unbounded => DistanceCriterion::Unbounded,
        Criterion::RandomError => DistanceCriterion::RandomError,
    }
}

pub fn construct_linear(a: &LinearArgs) -> Result<Built, CliError> {
    let plan = LinearCodePlan {
        epsilon: a.eps,
        rate: a.rate,
        tau: a.tau,
        k0: a.k0,
        horizon: a.n,
        seed: a.seed,
    };
    plan.validate()?;
    match a.criterion {
        Criterion::Unbounded => {
            feasibility_margin(a.eps, a.rate, a.tau)?;
        }
        Criterion::RandomError => {
            // the random-error rate 1 - H(3 eps) must leave room for r0
            let ceiling = if 3.0 * a.eps < 0.5 {
                1.0 - binary_entropy(3.0 * a.eps)?
            } else {
                0.0
            };
            if a.tau >= ceiling {
                return Err(Error::Infeasible(format!(
                    "r0={} is not below 1 - H(3 eps) = {ceiling}",
                    a.tau
                ))
                .into());
            }
        }
    }
    let cap = a.cap.unwrap_or(DEFAULT_CAP);
    let crit = criterion(a.criterion);
    let (schedule, attempts) = construct_with_criterion(&plan, a.max_attempts, crit, cap)?;
    let report = verify_distance(&schedule, crit, cap)?;
    Ok(Built {
        artifact: schedule.to_text(),
        row: ReportRow::new("lincode", &report, Some(attempts)),
        report,
    })
}

pub fn construct_subset(a: &SubsetArgs) -> Result<Built, CliError> {
    let mut code = match a.method {
        SubsetMethod::Greedy => greedy_construct(a.n, a.k, a.delta, a.seed, a.cap)?,
        SubsetMethod::Trivial => trivial_two_set(a.n, a.delta)?,
    };
    if let Some(t) = a.t {
        code = code.truncated(t)?;
    }
    let report = verify_subset_distance(&code)?;
    Ok(Built {
        artifact: code.to_text(),
        row: ReportRow::new("subsetcode", &report, None),
        report,
    })
}

/// The seed code draws from `--seed`, the extension from the next derived
/// stream.
pub fn construct_layered(a: &LayeredArgs) -> Result<Built, CliError> {
    let subset = SubsetCode::from_text(&read_file(&a.subset)?)?;
    let base = match &a.base {
        Some(p) => LayeredCode::from_text(&read_file(p)?)?,
        None => seed_code(a.k0, a.eps, a.rate, a.seed, a.max_attempts)?,
    };
    let plan = LayeredPlan {
        epsilon: a.eps,
        ell: a.ell,
        block_bits: a.block_bits,
        subblock_bits: a.subblock_bits,
        subset,
        checksum_delta: a.delta.unwrap_or(2.0 * a.eps),
        seed: SeededRandomSource::new(a.seed).derive(1).seed(),
        max_attempts: a.max_attempts,
    };
    let code = extend(&base, &plan)?;
    let report = verify_layered(&code)?;
    Ok(Built {
        artifact: code.to_text(),
        row: ReportRow::new("layered", &report, None),
        report,
    })
}

pub fn construct_checksum(a: &ChecksumArgs) -> Result<Built, CliError> {
    let cs = match a.rows {
        Some(r) => make_checksum_with_rows(a.input, r, a.delta, a.seed, a.max_attempts)?,
        None => make_checksum(a.input, a.delta, a.seed, a.max_attempts)?,
    };
    let report = cs.verify()?;
    Ok(Built {
        artifact: cs.to_text(),
        row: ReportRow::new("checksum", &report, None),
        report,
    })
}

pub fn verify(a: &VerifyArgs) -> Result<(ReportRow, VerificationReport), CliError> {
    let text = read_file(&a.artifact)?;
    let magic = text.split_whitespace().next().unwrap_or("");
    let (artifact, report) = match magic {
        "lincode" => {
            let s = GeneratorSchedule::from_text(&text)?;
            let cap = a.cap.unwrap_or(DEFAULT_CAP);
            ("lincode", verify_distance(&s, criterion(a.criterion), cap)?)
        }
        "subsetcode" => ("subsetcode", verify_subset_distance(&SubsetCode::from_text(&text)?)?),
        "layered" => ("layered", verify_layered(&LayeredCode::from_text(&text)?)?),
        "checksum" => ("checksum", SystematicChecksum::from_text(&text)?.verify()?),
        other => {
            return Err(Error::parse(format!("unknown artifact header {other:?}")).into());
        }
    };
    Ok((ReportRow::new(artifact, &report, None), report))
}

fn trial_row(trial: u64, j: usize, i: usize, flips: usize, ok: bool) -> SimRow {
    SimRow {
        schema: TRIAL_SCHEMA,
        trial: Some(trial),
        j,
        i,
        flips: Some(flips),
        ok: Some(ok as u8),
        trials: None,
        failures: None,
        failure_rate: None,
        ci95: None,
        baseline_recovered: None,
        unbounded_recovered: None,
    }
}

fn summary_row(j: usize, i: usize, trials: &[SimRow]) -> SimRow {
    let n = trials.len() as u64;
    let failures = trials.iter().filter(|r| r.ok == Some(0)).count() as u64;
    SimRow {
        schema: SUMMARY_SCHEMA,
        trial: None,
        j,
        i,
        flips: None,
        ok: None,
        trials: Some(n),
        failures: Some(failures),
        failure_rate: Some(failures as f64 / n as f64),
        ci95: Some(wilson_half_width(failures, n)),
        baseline_recovered: trials.iter().filter_map(|r| r.baseline_recovered).min(),
        unbounded_recovered: trials.iter().filter_map(|r| r.unbounded_recovered).min(),
    }
}

fn leading_agreement(a: &BitVector, b: &BitVector) -> usize {
    a.xor(b).first_one().unwrap_or(a.len())
}

/// Trial `t` draws its data from `seed` derived at `t`; the channel pattern
/// itself is fixed for the per-packet and adversarial channels.
pub fn simulate(a: &SimulateArgs) -> Result<Vec<SimRow>, CliError> {
    let schedule = GeneratorSchedule::from_text(&read_file(&a.artifact)?)?;
    let j = a.j.unwrap_or(schedule.horizon());
    if j == 0 || j > schedule.horizon() {
        return Err(Error::OutOfHorizon {
            j,
            horizon: schedule.horizon(),
        }
        .into());
    }
    let m = schedule.message_bits(j);
    let target = a
        .target
        .unwrap_or_else(|| floor_tol(schedule.plan().rate * j as f64).min(m));
    if a.trials == 0 {
        return Err(Error::NoTrials.into());
    }

    if a.channel == Channel::Bsc {
        if a.cap.is_some() {
            return Err(CliError::Usage("--cap applies to the per-packet and adversarial channels".into()));
        }
        let summary = monte_carlo_bsc(&schedule, a.eps, j, target, a.trials, a.seed)?;
        let mut rows: Vec<SimRow> = summary
            .records
            .iter()
            .map(|r| trial_row(r.trial, r.j, r.i, r.flips, r.ok))
            .collect();
        rows.push(summary_row(j, target, &rows));
        return Ok(rows);
    }

    let cap = a.cap.unwrap_or(DECODE_CAP);
    let packet = a.packet_len;
    let pattern = match a.channel {
        Channel::PerPacket => {
            let spec = ChannelSpec::PerPacket {
                packet_len: packet,
                epsilon: a.eps,
                overshoot: a.overshoot,
            };
            spec.validate()?;
            let attacked = a.packets.unwrap_or(j / packet);
            if attacked * packet > j {
                return Err(Error::SpecInvalid(format!(
                    "{attacked} packets of {packet} bits exceed j={j}"
                ))
                .into());
            }
            if attacked == 0 {
                ErrorPattern::zeros(j)
            } else {
                sample_pattern(&spec, attacked * packet)?.resized(j)
            }
        }
        Channel::Adversarial => sample_pattern(
            &ChannelSpec::AdversarialBudget {
                epsilon: a.eps,
                positions: a.positions.clone(),
            },
            j,
        )?,
        Channel::Bsc => unreachable!("handled above"),
    };

    let packets = j / packet;
    let mut rows = Vec::with_capacity(a.trials as usize + 1);
    for t in 0..a.trials {
        let mut rng = SeededRandomSource::new(a.seed).derive(t);
        let mut row;
        if a.channel == Channel::PerPacket {
            if packets == 0 {
                return Err(Error::SpecInvalid(format!("j={j} holds no complete packet")).into());
            }
            // the baseline carries packet_len - 1 stream bits per packet; the
            // unbounded code sends the leading bits of the same stream
            let stream = rng.bits(packets * (packet - 1));
            let message = stream
                .concat(&rng.bits(m.saturating_sub(stream.len())))
                .prefix(m);
            row = decode_trial(&schedule, &message, &pattern, j, target, cap, t)?;
            let baseline = packetized_baseline(
                packet - 1,
                packet,
                2.0 / packet as f64,
                &stream,
                &pattern.resized(packets * packet),
                a.seed,
            )?;
            row.baseline_recovered = Some(baseline);
        } else {
            let message = rng.bits(m);
            row = decode_trial(&schedule, &message, &pattern, j, target, cap, t)?;
        }
        rows.push(row);
    }
    rows.push(summary_row(j, target, &rows));
    Ok(rows)
}

fn decode_trial(
    schedule: &GeneratorSchedule,
    message: &BitVector,
    pattern: &ErrorPattern,
    j: usize,
    target: usize,
    cap: u64,
    trial: u64,
) -> Result<SimRow, CliError> {
    let received = pattern.apply(&schedule.encode_prefix(message, j)?)?;
    let out = decode_nearest_capped(schedule, &received, target, Some(message), cap)?;
    let mut row = trial_row(trial, j, target, pattern.weight(), out.success == Some(true));
    row.unbounded_recovered = Some(leading_agreement(&out.recovered_prefix, &message.prefix(target)));
    Ok(row)
}

pub fn bounds(eps: &[f64]) -> Result<Vec<BoundsRow>, CliError> {
    eps.iter()
        .map(|&e| {
            if !(e > 0.0 && e < 1.0 / 17.0) {
                return Err(Error::Domain {
                    what: "eps (must lie in (0, 1/17))",
                    value: e,
                }
                .into());
            }
            let s = (e * (1.0 / e).log2()).sqrt();
            let d = subset_diagnostics(e)?;
            Ok(BoundsRow {
                schema: BOUNDS_SCHEMA,
                source: "formula",
                eps: e,
                construction_rate: 1.0 - 4.0 * s,
                linear_upper_bound: 1.0 - e.sqrt(),
                random_error_rate: 1.0 - binary_entropy(3.0 * e)?,
                subset_delta: d.delta,
                subset_ell: d.ell,
                subset_alpha: d.alpha,
                subset_harper_exponent: d.harper,
                subset_greedy_exponent: d.greedy,
                subset_linear_exponent: d.linear,
                subset_small_delta: d.small_delta,
            })
        })
        .collect()
}
