use num_bigint::BigUint;
use proptest::prelude::*;
use streamcode::f2::{ball_size, hamming_distance, BitVector, SeededRandomSource};
use streamcode::subset::*;
use streamcode::{Counterexample, Error};

const GREEDY_SEED: u64 = 2024;

fn min_cross_distance(code: &SubsetCode) -> usize {
    let mut best = usize::MAX;
    let sets = code.subsets();
    for a in 0..sets.len() {
        for b in a + 1..sets.len() {
            for x in &sets[a] {
                for y in &sets[b] {
                    best = best.min(hamming_distance(x, y).unwrap());
                }
            }
        }
    }
    best
}

fn all_words_within(word: &BitVector, radius: usize) -> Vec<BitVector> {
    let mut out = vec![word.clone()];
    if radius >= 1 {
        for t in 0..word.len() {
            let mut w = word.clone();
            w.flip(t);
            out.push(w);
        }
    }
    if radius >= 2 {
        for a in 0..word.len() {
            for b in a + 1..word.len() {
                let mut w = word.clone();
                w.flip(a);
                w.flip(b);
                out.push(w);
            }
        }
    }
    out
}

#[test]
fn trivial_two_set_at_eight() {
    let code = trivial_two_set(8, 0.25).unwrap();
    assert_eq!(code.params().k, 2);
    assert_eq!(code.subsets()[0].len(), 37);
    assert_eq!(code.subsets()[1].len(), 37);
    assert_eq!(code.params().t, 37);
    assert!(code.subsets()[0].iter().all(|v| v.weight() <= 2));
    assert!(code.subsets()[1].iter().all(|v| v.weight() >= 6));
    assert_eq!(min_cross_distance(&code), 4);
    let report = verify_subset_distance(&code).unwrap();
    assert!(report.passed, "{report}");
    // delta*n = 2 exactly, which the report flags
    assert!(report.notes.iter().any(|n| n.contains("integer")));
    assert_eq!(code.encode(0, 0).unwrap().to_string(), "00000000");
    assert_eq!(code.params().t, 37);
    assert!(BigUint::from(37u32) < harper_impossibility_t(8, 2, 0.25));
}

#[test]
fn trivial_two_set_extremes() {
    let code = trivial_two_set(6, 1.0).unwrap();
    assert_eq!(code.subsets()[0], vec![BitVector::zeros(6)]);
    assert_eq!(code.subsets()[1], vec![BitVector::ones(6)]);
    assert_eq!(min_cross_distance(&code), 6);
    assert!(verify_subset_distance(&code).unwrap().passed);
    assert!(matches!(trivial_two_set(8, 0.1), Err(Error::Degenerate(_))));
}

#[test]
fn greedy_fourteen_four_seventh() {
    let radii = greedy_radii(14, 4, 1.0 / 7.0).unwrap();
    assert_eq!(radii, GreedyRadii { outer: 3, inner: 1, target: 8 });
    let code = greedy_construct(14, 4, 1.0 / 7.0, GREEDY_SEED, 10_000).unwrap();
    assert_eq!(code.params().k, 8);
    assert!(code.params().t >= 8);
    assert!(code.subsets().iter().all(|s| s.len() >= 8));
    let report = verify_subset_distance(&code).unwrap();
    assert!(report.passed, "{report}");
    // the triangle inequality gives (r + 1) - inner = 3
    assert!(min_cross_distance(&code) >= 3);
    assert_eq!(harper_impossibility_t(14, 4, 1.0 / 7.0), BigUint::from(3473u32));
    assert!(BigUint::from(code.params().t) < harper_impossibility_t(14, 4, 1.0 / 7.0));
    for k in 0..code.params().k {
        for t in 0..code.params().t {
            let w = code.encode(k, t).unwrap();
            assert_eq!(code.decode_exact(&w).unwrap(), (k, t));
        }
    }
}

#[test]
fn greedy_soundness_and_progress() {
    let mut state = GreedyState::new(14, 4, 1.0 / 7.0).unwrap();
    let mut rng = SeededRandomSource::new(GREEDY_SEED);
    let per_step = 1u64 << 10;
    let mut remaining = 1u64 << 14;
    for _ in 0..8 {
        let removed = state.step(&mut rng, 10_000).unwrap();
        assert!(removed <= per_step);
        remaining -= removed;
        assert_eq!(state.remaining_count(), remaining);
        assert!(remaining >= 1 << 13);
        // every claimed point is far from every point still in play
        for s in state.subsets() {
            for x in s {
                for y in (0u64..1 << 14).filter(|&y| state.is_remaining(y)) {
                    let d = (x.to_u64() ^ y).count_ones();
                    assert!(d >= 3, "claimed {x} too close to unclaimed {y}");
                }
            }
        }
    }
}

#[test]
fn greedy_degenerate_cases() {
    let one = greedy_construct(10, 1, 0.2, 1, 1000).unwrap();
    assert_eq!(one.params().k, 1);
    assert!(verify_subset_distance(&one).unwrap().passed);
    // k = n forces r = 0: singletons
    let points = greedy_construct(4, 4, 0.0, 1, 1000).unwrap();
    assert_eq!(points.params().k, 8);
    assert!(points.subsets().iter().all(|s| s.len() == 1));
    assert!(verify_subset_distance(&points).unwrap().passed);
    assert!(matches!(greedy_radii(14, 4, 0.3), Err(Error::Degenerate(_))));
}

#[test]
fn two_tier_recovery_exhaustive() {
    let greedy = greedy_construct(14, 4, 1.0 / 7.0, GREEDY_SEED, 10_000).unwrap();
    let trivial = trivial_two_set(8, 0.25).unwrap();
    for (code, radius) in [(&greedy, 1), (&trivial, 1)] {
        let guaranteed = code.params().robust_radius();
        assert!(guaranteed <= radius);
        for k in 0..code.params().k {
            for t in 0..code.params().t {
                let w = code.encode(k, t).unwrap();
                assert_eq!(code.decode_exact(&w).unwrap(), (k, t));
                for noisy in all_words_within(&w, radius) {
                    assert_eq!(code.decode_robust(&noisy).unwrap(), k);
                }
            }
        }
    }
}

#[test]
fn decoding_edge_cases() {
    let code = trivial_two_set(8, 0.25).unwrap();
    // weight 4 sits at distance 2 from both sides
    let middle: BitVector = "11110000".parse().unwrap();
    assert_eq!(code.decode_robust(&middle).unwrap(), 0);
    let mut w: BitVector = "11000000".parse().unwrap();
    w.flip(7);
    assert!(matches!(code.decode_exact(&w), Err(Error::NotACodeword)));
    assert!(matches!(code.encode(2, 0), Err(Error::IndexOutOfRange { .. })));
    assert!(matches!(code.encode(0, 37), Err(Error::IndexOutOfRange { .. })));
    let flipped = code.encode(1, 3).unwrap();
    let mut noisy = flipped.clone();
    noisy.flip(0);
    assert_eq!(code.decode_robust(&noisy).unwrap(), 1);
}

#[test]
fn verifier_detects_violations() {
    let code = trivial_two_set(8, 0.25).unwrap();
    let mut sets = code.subsets().to_vec();
    let shared = sets[0][5].clone();
    sets[1].push(shared);
    let overlap = SubsetCode::new(code.params().clone(), sets, None).unwrap();
    let report = verify_subset_distance(&overlap).unwrap();
    assert!(matches!(report.counterexample, Some(Counterexample::Overlap { subsets: (0, 1), .. })));

    let mut sets = code.subsets().to_vec();
    sets[1].push("11100000".parse().unwrap());
    let close = SubsetCode::new(code.params().clone(), sets, None).unwrap();
    match verify_subset_distance(&close).unwrap().counterexample {
        Some(Counterexample::CrossPair { achieved, required, .. }) => {
            assert_eq!(required, 2);
            assert!(achieved < 2);
        }
        other => panic!("{other:?}"),
    }

    let mut sets = code.subsets().to_vec();
    sets[0].truncate(10);
    let small = SubsetCode::new(code.params().clone(), sets, None).unwrap();
    assert!(matches!(
        verify_subset_distance(&small).unwrap().counterexample,
        Some(Counterexample::Undersized { subset: 0, size: 10, required: 37 })
    ));
}

#[test]
fn text_round_trip() {
    let greedy = greedy_construct(14, 4, 1.0 / 7.0, GREEDY_SEED, 10_000).unwrap();
    let text = greedy.to_text();
    assert!(text.starts_with("subsetcode v1 K=8 T="));
    let back = SubsetCode::from_text(&text).unwrap();
    assert_eq!(back, greedy);
    assert_eq!(back.to_text(), text);
    let trivial = trivial_two_set(8, 0.25).unwrap();
    assert_eq!(SubsetCode::from_text(&trivial.to_text()).unwrap(), trivial);
    assert!(SubsetCode::from_text(&text.replace("set 1:", "set 7:")).is_err());
}

#[test]
fn harper_and_linear_formulas() {
    // delta = 0 reduces to |B(r + 2)| with r minimal, |B(r)| >= 2^(n-k)
    assert_eq!(harper_impossibility_t(14, 4, 0.0), ball_size(14, 6));
    let e = linear_subset_bound_exponent(0.5, 0.05).unwrap();
    assert!((e - (0.5 - 0.025 * 20f64.log2())).abs() < 1e-12);
    assert!((e - 0.392).abs() < 1e-3);
    let tiny = linear_subset_bound_exponent(0.5, 1e-9).unwrap();
    assert!((tiny - 0.5).abs() < 1e-6);
    assert!(linear_subset_bound_exponent(0.2, 0.3).is_err());
    // at eps = 0.001 the greedy radius H^-1(alpha) - delta is already negative
    let d = subset_diagnostics(0.001).unwrap();
    assert!(d.greedy.is_nan() && d.harper.is_finite());
    let d = subset_diagnostics(1e-15).unwrap();
    assert!(d.greedy < d.harper && d.harper < d.alpha);
}

/// `|S + B(t)| >= 2^d |B_{n-d}(t)|` for a `d`-dimensional subspace `S`: a
/// subspace shatters `d` coordinates, so errors on the others never
/// collide. This is the counting behind the linear subset-code bound.
#[test]
fn subspace_dilation_bound_at_n10() {
    let n = 10usize;
    let balls: Vec<Vec<u64>> = (0..=2)
        .map(|t| (0u64..1 << n).filter(|e| e.count_ones() as usize <= t).collect())
        .collect();
    let dilation = |basis: &[u64], t: usize| -> usize {
        let mut span = vec![0u64];
        for &b in basis {
            let more: Vec<u64> = span.iter().map(|s| s ^ b).collect();
            span.extend(more);
        }
        let mut seen = vec![false; 1 << n];
        for s in &span {
            for e in &balls[t] {
                seen[(s ^ e) as usize] = true;
            }
        }
        seen.iter().filter(|&&b| b).count()
    };
    let floor = |d: usize, t: usize| -> usize {
        let b: u64 = ball_size(n - d, t).try_into().unwrap();
        (1usize << d) * b as usize
    };
    // every subspace of dimension 1 and 2; a plane {0, a, b, a^b} is
    // visited once, through its generators with a < b < a^b
    for a in 1u64..1 << n {
        for t in 0..=2 {
            assert!(dilation(&[a], t) >= floor(1, t));
        }
        for b in (a + 1)..1 << n {
            if b < a ^ b {
                assert!(dilation(&[a, b], 2) >= floor(2, 2));
            }
        }
    }
    // random subspaces of dimension 3 and 4
    let mut rng = SeededRandomSource::new(5);
    for d in 3..=4 {
        for _ in 0..300 {
            let basis: Vec<u64> = (0..d).map(|_| rng.below(1 << n)).collect();
            let mut e = streamcode::f2::Eliminator::new(n);
            let independent = basis
                .iter()
                .all(|&v| e.push(&BitVector::from_u64(n, v)));
            if !independent {
                continue;
            }
            for t in 1..=2 {
                assert!(dilation(&basis, t) >= floor(d, t));
            }
        }
    }
}

proptest! {
    #[test]
    fn greedy_codes_respect_impossibility(seed in any::<u64>(), k in 2usize..5) {
        let code = greedy_construct(12, k, 1.0 / 6.0, seed, 5_000).unwrap();
        prop_assert!(verify_subset_distance(&code).unwrap().passed);
        let bound = harper_impossibility_t(12, (code.params().k as f64).log2().ceil() as usize + 1, 1.0 / 6.0);
        prop_assert!(BigUint::from(code.params().t) < bound);
    }
}
