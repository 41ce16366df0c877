use proptest::prelude::*;
use streamcode::f2::{ceil_tol, floor_tol, BitVector};
use streamcode::linear::*;
use streamcode::{Counterexample, Error};

/// Direct evaluation of the distance property: encode every message with a
/// given first one and measure its weight. Returns the smallest violating
/// (i, j, x) in (i, j, lexicographic x) order.
fn naive_first_violation(
    s: &GeneratorSchedule,
    criterion: DistanceCriterion,
) -> Option<(usize, usize, BitVector)> {
    let plan = s.plan();
    let mut found: Option<(usize, usize, BitVector)> = None;
    for j in plan.first_checked_length()..=plan.horizon {
        let m = s.message_bits(j);
        let kmax = floor_tol(plan.rate * j as f64).min(m);
        for k in 1..=kmax {
            let req = criterion.threshold(plan, k, j);
            let req = (ceil_tol(req)).max(1);
            for v in 0u64..(1 << m) {
                let x = BitVector::from_u64(m, v);
                if x.first_one() != Some(k - 1) {
                    continue;
                }
                if s.encode_prefix(&x, j).unwrap().weight() < req {
                    let cand = (k, j, x);
                    if found.as_ref().is_none_or(|f| (cand.0, cand.1) < (f.0, f.1)) {
                        found = Some(cand);
                    }
                    break;
                }
            }
        }
    }
    found
}

fn small_plan(eps: f64, tau: f64, k0: usize, horizon: usize, seed: u64) -> LinearCodePlan {
    LinearCodePlan {
        epsilon: eps,
        rate: 0.5,
        tau,
        k0,
        horizon,
        seed,
    }
}

#[test]
fn verifier_agrees_with_naive_enumeration() {
    let mut failures = 0;
    for seed in 0..60u64 {
        for &eps in &[0.0, 0.1, 0.2, 0.3] {
            for criterion in [DistanceCriterion::Unbounded, DistanceCriterion::RandomError] {
                let plan = small_plan(eps, 0.75, 3, 16, seed);
                let s = sample_generator(&plan).unwrap();
                let report = verify_distance(&s, criterion, DEFAULT_CAP).unwrap();
                let naive = naive_first_violation(&s, criterion);
                assert_eq!(report.passed, naive.is_none(), "seed {seed} eps {eps}");
                if let (Some(Counterexample::Prefix { i, j, difference, achieved, .. }), Some(n)) =
                    (&report.counterexample, &naive)
                {
                    failures += 1;
                    assert_eq!((*i, *j, difference), (n.0, n.1, &n.2));
                    assert_eq!(*achieved, s.encode_prefix(difference, *j).unwrap().weight());
                }
            }
        }
    }
    assert!(failures > 20, "the sweep should exercise failing codes too");
}

#[test]
fn pattern_route_agrees_with_suffix_route() {
    // Horizon 24 with tau 0.9 makes the early cosets large enough that the
    // verifier switches to the error-pattern route.
    for seed in 0..8u64 {
        let plan = small_plan(0.15, 0.9, 2, 22, seed);
        let s = sample_generator(&plan).unwrap();
        let report = verify_unbounded_distance(&s).unwrap();
        let naive = naive_first_violation(&s, DistanceCriterion::Unbounded);
        match (&report.counterexample, naive) {
            (None, None) => {}
            (Some(Counterexample::Prefix { i, j, difference, .. }), Some(n)) => {
                assert_eq!((*i, *j, difference.clone()), n)
            }
            other => panic!("disagreement {other:?}"),
        }
    }
}

#[test]
fn identity_code_fails_with_weight_one() {
    let plan = small_plan(0.05, 1.0, 2, 60, 0);
    let s = GeneratorSchedule::identity(plan).unwrap();
    let report = verify_unbounded_distance(&s).unwrap();
    assert!(!report.passed);
    match report.counterexample.unwrap() {
        Counterexample::Prefix { achieved, i, j, .. } => {
            assert_eq!(achieved, 1);
            assert_eq!(i, 1);
            // ceil(0.05 j) first exceeds 1 at j = 21
            assert_eq!(j, 21);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn zero_epsilon_is_injectivity() {
    // the identity is injective, so it passes at eps = 0
    let s = GeneratorSchedule::identity(small_plan(0.0, 1.0, 2, 30, 0)).unwrap();
    assert!(verify_unbounded_distance(&s).unwrap().passed);
    assert!(verify_random_error_distance(&s).unwrap().passed);
    // a schedule of zero rows is not
    let plan = small_plan(0.0, 0.75, 2, 12, 0);
    let rows = (1..=12).map(|i| BitVector::zeros(ceil_tol(0.75 * i as f64))).collect();
    let zero = GeneratorSchedule::from_rows(plan, rows).unwrap();
    assert!(!verify_unbounded_distance(&zero).unwrap().passed);
}

#[test]
fn identity_random_error_fails_once_threshold_exceeds_one() {
    let plan = small_plan(0.05, 1.0, 2, 40, 0);
    let s = GeneratorSchedule::identity(plan).unwrap();
    let report = verify_random_error_distance(&s).unwrap();
    match report.counterexample.unwrap() {
        Counterexample::Prefix { i, j, achieved, required, .. } => {
            assert_eq!(achieved, 1);
            assert!(required > 1.0);
            // smallest i is 1; the first j with 0.15 (j - 1) > 1 is 8
            assert_eq!((i, j), (1, 8));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn exhaustion_for_impossible_distance() {
    let plan = small_plan(1.0, 0.7, 4, 20, 3);
    match construct_with_retries(&plan, 3) {
        Err(Error::ConstructionFailed { attempts: 3, last: Some(_) }) => {}
        other => panic!("{other:?}"),
    }
}

#[test]
fn retries_reseed_by_attempt_index() {
    let plan = small_plan(0.1, 0.75, 3, 16, 40);
    let (s, attempts) = construct_with_retries(&plan, 50).unwrap();
    assert_eq!(s.plan().seed, 40 ^ (attempts as u64 - 1));
    assert_eq!(s, sample_generator(&plan.with_seed(s.plan().seed)).unwrap());
    for a in 0..attempts - 1 {
        let earlier = sample_generator(&plan.with_seed(40 ^ a as u64)).unwrap();
        assert!(!verify_unbounded_distance(&earlier).unwrap().passed);
    }
}

#[test]
fn scale_cap_is_enforced() {
    let plan = small_plan(0.3, 0.9, 2, 40, 0);
    let s = sample_generator(&plan).unwrap();
    assert!(matches!(
        verify_distance(&s, DistanceCriterion::Unbounded, 1000),
        Err(Error::ScaleExceeded { .. })
    ));
}

#[test]
fn prefix_distance_matches_enumeration() {
    for seed in 0..10u64 {
        let plan = small_plan(0.0, 0.75, 2, 20, seed);
        let s = sample_generator(&plan).unwrap();
        for j in [8, 14, 20] {
            let m = s.message_bits(j);
            let kmax = j / 2;
            let mut best = usize::MAX;
            for v in 1u64..(1 << m) {
                let x = BitVector::from_u64(m, v);
                if x.first_one().unwrap() < kmax {
                    best = best.min(s.encode_prefix(&x, j).unwrap().weight());
                }
            }
            assert_eq!(prefix_distance(&s, j, kmax, DEFAULT_CAP).unwrap(), best);
        }
    }
}

#[test]
fn monotone_under_truncation() {
    let plan = small_plan(0.1, 0.75, 3, 20, 11);
    let (s, _) = construct_with_retries(&plan, 100).unwrap();
    for n in plan.first_checked_length()..20 {
        assert!(verify_unbounded_distance(&s.truncated(n).unwrap()).unwrap().passed);
    }
}

proptest! {
    #[test]
    fn encoding_is_linear(seed in any::<u64>(), a in any::<u64>(), b in any::<u64>(), j in 1usize..=40) {
        let plan = small_plan(0.01, 0.7, 8, 40, seed);
        let s = sample_generator(&plan).unwrap();
        let x = BitVector::from_u64(28, a >> 36);
        let y = BitVector::from_u64(28, b >> 36);
        let cx = s.encode_prefix(&x, j).unwrap();
        let cy = s.encode_prefix(&y, j).unwrap();
        prop_assert_eq!(s.encode_prefix(&x.xor(&y), j).unwrap(), cx.xor(&cy));
        prop_assert_eq!(
            streamcode::f2::hamming_distance(&cx, &cy).unwrap(),
            s.encode_prefix(&x.xor(&y), j).unwrap().weight()
        );
        prop_assert!(s.encode_prefix(&BitVector::zeros(28), j).unwrap().is_zero());
    }

    #[test]
    fn prefix_support_holds(seed in any::<u64>(), tau in 0.55f64..1.0) {
        let plan = LinearCodePlan { epsilon: 0.01, rate: 0.5, tau, k0: 4, horizon: 30, seed };
        let s = sample_generator(&plan).unwrap();
        for (idx, row) in s.rows().iter().enumerate() {
            prop_assert_eq!(row.len(), ceil_tol(tau * (idx + 1) as f64));
        }
        // bits past the support never influence the prefix
        let j = 20;
        let m = s.message_bits(j);
        let x = BitVector::unit(30, m);
        prop_assert!(s.encode_prefix(&x, j).unwrap().is_zero());
    }

    #[test]
    fn margin_sign_matches_bound_sign(eps in 0.0005f64..0.05, tau in 0.6f64..0.99) {
        if let Ok(m) = feasibility_margin(eps, 0.5, tau) {
            let b = bij_log_prob_bound(10, 40, eps, 0.5, tau).unwrap();
            prop_assert_eq!(m > 0.0, b < 0.0);
        }
    }
}

#[test]
fn sampled_bits_are_balanced() {
    let plan = small_plan(0.01, 0.7, 8, 170, 5);
    let s = sample_generator(&plan).unwrap();
    let (ones, total) = s
        .rows()
        .iter()
        .fold((0, 0), |(o, t), r| (o + r.weight(), t + r.len()));
    assert!(total >= 10_000);
    let frac = ones as f64 / total as f64;
    assert!((0.45..=0.55).contains(&frac), "{frac}");
}
