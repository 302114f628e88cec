//! Randomized invariants.

mod common;

use common::*;
use num::{Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rescodim::averaging::{
    choose_base, random_lambda, replay_with, run_averaging, select_beta_hat, select_s1, select_s2,
    ReplayOutcome,
};
use rescodim::parabolic::{
    contains_positive_system, is_parabolic_for_some_base, resonant_codimension, standard_parabolic,
    SaturatedSubalgebra,
};
use rescodim::resonance::{classify_outcome, nonresonant_subalgebra, resonant_roots, ExponentSet};
use rescodim::{CartanElement, Family, Functional, RootSet, RootSystem, Vector};

fn small_types() -> Vec<(Family, usize)> {
    vec![
        (Family::A, 2),
        (Family::A, 3),
        (Family::A, 4),
        (Family::B, 2),
        (Family::B, 3),
        (Family::B, 4),
        (Family::C, 3),
        (Family::C, 4),
        (Family::BC, 2),
        (Family::BC, 3),
        (Family::D, 4),
        (Family::F4, 4),
        (Family::G2, 2),
    ]
}

fn rat(n: i64, d: i64) -> rescodim::Q {
    rescodim::rational::ratio(n, d)
}

/// A root index with a positive scale, or else raw ambient coordinates.
type RawExponent = (Option<usize>, Vec<i64>, i64);

/// Exponents resonant with the given roots, scaled by random positive
/// factors, or random functionals.
fn exponent_strategy() -> impl Strategy<Value = (usize, Vec<RawExponent>)> {
    (
        0..small_types().len(),
        prop::collection::vec(
            (
                prop::option::of(0usize..256),
                prop::collection::vec(-4i64..=4, 8),
                1i64..=7,
            ),
            0..6,
        ),
    )
}

fn exponents(rs: &RootSystem, raw: &[RawExponent]) -> Vec<Functional> {
    raw.iter()
        .map(|(root, coords, c)| match root {
            Some(i) => Functional::from(rs.root(i % rs.num_roots())).scaled(&q(*c)),
            None => Functional::new(qv(&coords[..rs.ambient_dim()])),
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn resonance_is_invariant_under_positive_rescaling(
        (t, raw) in exponent_strategy(),
        scales in prop::collection::vec((1i64..=9, 1i64..=9), 6),
        volume in any::<bool>(),
    ) {
        let (f, l) = small_types()[t];
        let rs = sys(f, l);
        let r = rescodim::parabolic::minimal_resonant_codimension(&rs);
        let base = exponents(&rs, &raw);
        let scaled: Vec<Functional> = base
            .iter()
            .zip(&scales)
            .map(|(e, (n, d))| e.scaled(&rat(*n, *d)))
            .collect();
        let dim_m = r.max(base.len());
        let e1 = ExponentSet::new(base, dim_m, volume).unwrap();
        let e2 = ExponentSet::new(scaled, dim_m, volume).unwrap();
        prop_assert_eq!(resonant_roots(&rs, &e1), resonant_roots(&rs, &e2));
        prop_assert_eq!(nonresonant_subalgebra(&rs, &e1), nonresonant_subalgebra(&rs, &e2));
        let v1 = classify_outcome(&rs, &e1).map(|o| o.verdict);
        let v2 = classify_outcome(&rs, &e2).map(|o| o.verdict);
        prop_assert_eq!(v1, v2);
    }

    #[test]
    fn outcomes_under_the_dimension_hypothesis(
        (t, raw) in exponent_strategy(),
        volume in any::<bool>(),
    ) {
        let (f, l) = small_types()[t];
        let rs = sys(f, l);
        let r = rescodim::parabolic::minimal_resonant_codimension(&rs);
        let exps = exponents(&rs, &raw);
        let dim_m = exps.len().max(1);
        prop_assume!(dim_m <= r);
        let set = ExponentSet::new(exps, dim_m, volume).unwrap();
        let h = nonresonant_subalgebra(&rs, &set);
        prop_assert!(rs.is_closed(h.roots()));
        prop_assert!(resonant_roots(&rs, &set).len() <= dim_m);
        let out = classify_outcome(&rs, &set).unwrap();
        use rescodim::resonance::Verdict;
        prop_assert_eq!(out.verdict == Verdict::FullyInvariant, h.is_full(&rs));
        prop_assert_eq!(out.witness.is_some(), out.verdict == Verdict::VolumeContradiction);
        if dim_m < r || volume {
            prop_assert!(out.verdict != Verdict::Inconclusive);
        }
        if let Some(s) = &out.witness {
            for e in set.exponents() {
                prop_assert!(e.eval(s).is_negative());
            }
        }
    }

    #[test]
    fn codimension_is_monotone(t in 0..small_types().len(), a in any::<u64>(), b in any::<u64>()) {
        let (f, l) = small_types()[t];
        let rs = sys(f, l);
        let n = rs.classes().len();
        let pick = |bits: u64| -> Vec<usize> { (0..n).filter(|c| bits >> (c % 64) & 1 == 1).collect() };
        let small = rs.set_from_classes(&pick(a & b));
        let big = rs.set_from_classes(&pick(a));
        prop_assert!(small.is_subset(&big));
        prop_assert!(resonant_codimension(&rs, &small) >= resonant_codimension(&rs, &big));
    }

    #[test]
    fn standard_parabolics_are_parabolic(t in 0..small_types().len(), mask in any::<u16>()) {
        let (f, l) = small_types()[t];
        let rs = sys(f, l);
        let levi: Vec<usize> = (0..l).filter(|j| mask >> j & 1 == 1).collect();
        let p = standard_parabolic(&rs, &levi).unwrap();
        prop_assert!(rs.is_closed(p.roots()));
        prop_assert!(rs.positive_roots().is_subset(p.roots()));
        prop_assert!(contains_positive_system(&rs, &p.as_saturated()).is_some());
        if l <= 3 {
            prop_assert!(is_parabolic_for_some_base(&rs, &p.as_saturated()).unwrap());
        }
        // The negative part determines the parabolic.
        let neg = p.roots().intersection(&rs.negative_roots());
        let expected: RootSet = rs.negative_roots().iter().filter(|&i| rs.in_simple_span(i, &levi)).collect();
        prop_assert_eq!(neg, expected);
    }

    #[test]
    fn s_selections_satisfy_their_constraints(t in 0..small_types().len(), seed in any::<u64>()) {
        let (f, l) = small_types()[t];
        let rs = sys(f, l);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lambda = random_lambda(&rs, &mut rng);
        let w = choose_base(&rs, &lambda).unwrap();
        let moved = w.apply(&lambda);
        prop_assert_eq!(w.inverse(&rs).apply(&moved), lambda);
        let s1 = select_s1(&rs, &moved).unwrap();
        prop_assert!(moved.eval(&s1).is_positive());
        for j in 1..l {
            prop_assert!(Functional::from(rs.root(rs.simple(j))).eval(&s1).is_zero());
        }
        let bh = select_beta_hat(&rs).unwrap();
        let other = random_lambda(&rs, &mut rng);
        if let Ok(s2) = select_s2(&rs, bh, &other) {
            prop_assert!(Functional::from(rs.root(bh)).eval(&s2).is_zero());
            prop_assert!(other.eval(&s2).is_positive());
        }
    }

    #[test]
    fn tampered_traces_fail_at_the_tampered_step(
        t in 0..small_types().len(),
        seed in any::<u64>(),
        step in 0usize..8,
        pick in any::<usize>(),
    ) {
        let (f, l) = small_types()[t];
        let rs = sys(f, l);
        let lambda = random_lambda(&rs, &mut ChaCha8Rng::seed_from_u64(seed));
        let trace = run_averaging(&rs, &lambda).unwrap();
        prop_assert_eq!(replay_with(&rs, &trace), ReplayOutcome::Valid);
        prop_assert_eq!(run_averaging(&rs, &lambda).unwrap(), trace.clone());

        let mut deleted = trace.clone();
        let roots: Vec<usize> = deleted.steps[step].state.roots.iter().collect();
        prop_assume!(!roots.is_empty());
        deleted.steps[step].state.roots.remove(roots[pick % roots.len()]);
        let is_deleted_step = matches!(replay_with(&rs, &deleted), ReplayOutcome::Invalid { step: Some(k), .. } if k == step);
        prop_assert!(is_deleted_step);

        let mut forged = trace;
        let s: Vector = forged.steps[step].witness.coords.iter().map(|x| -x).collect();
        forged.steps[step].witness = CartanElement::new(s);
        let is_forged_step = matches!(replay_with(&rs, &forged), ReplayOutcome::Invalid { step: Some(k), .. } if k == step);
        prop_assert!(is_forged_step);
    }
}

#[test]
fn exhaustive_closed_subsets_agree_between_parabolicity_tests() {
    // At rank <= 3 the brute-force base enumeration and the half-space test
    // must agree on every closed saturated subset.
    for (f, l) in [(Family::A, 2), (Family::A, 3), (Family::B, 2), (Family::B, 3), (Family::C, 3), (Family::BC, 2), (Family::G2, 2)] {
        let rs = sys(f, l);
        let n = rs.classes().len();
        for mask in 0u64..(1 << n) {
            let classes: Vec<usize> = (0..n).filter(|c| mask >> c & 1 == 1).collect();
            let Ok(h) = SaturatedSubalgebra::from_classes(&rs, &classes) else { continue };
            let brute = is_parabolic_for_some_base(&rs, &h).unwrap();
            let half = contains_positive_system(&rs, &h).is_some();
            assert_eq!(brute, half, "{f}{l} mask {mask:b}");
        }
    }
}
