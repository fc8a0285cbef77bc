//! Property tests: the engine against the interval-exchange oracle, path
//! agreement, measure bookkeeping, and engine invariants on random
//! schedules.

mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use common::oracle::Oracle;
use common::{pick, random_schedule, rng};
use rank1::enclosure::{pow10_neg, Enclosure};
use rank1::engine::{Engine, Normalization};
use rank1::family::preset;
use rank1::tower::{refine_set, LevelSet};
use rank1::Schedule;

fn tol() -> BigRational {
    pow10_neg(9)
}

/// Engine and fast-path enclosures both contain the oracle value; exact
/// results match it exactly.
#[test]
fn oracle_containment_on_random_schedules() {
    let mut seed_rng = rng(31_337, 0);
    for case in 0..40u64 {
        let mut r = rng(31_337, case + 1);
        let stages = 3 + pick(&mut r, 5) as usize;
        let (data, spec) = random_schedule(&mut r, stages + 2, 4, 5);
        let schedule = Schedule::new(spec).unwrap();
        let engine = Engine::new(schedule.clone());
        let oracle = Oracle::build(&data);

        let h_mid: u64 = (&schedule.height(stages as u64).unwrap()).try_into().unwrap();
        for _ in 0..8 {
            let stage = 1 + pick(&mut seed_rng, stages as u64 - 1);
            let h: u64 = (&schedule.height(stage).unwrap()).try_into().unwrap();
            let a = LevelSet::from_u64s(
                stage,
                (0..1 + pick(&mut seed_rng, 3)).map(|_| pick(&mut seed_rng, h)).collect(),
            );
            let b = LevelSet::from_u64s(
                stage,
                (0..1 + pick(&mut seed_rng, 3)).map(|_| pick(&mut seed_rng, h)).collect(),
            );
            let n = pick(&mut seed_rng, h_mid);
            let (lo, lost) = oracle.shifted_intersection(
                (stage - 1) as usize,
                &a.levels.iter().map(|l| l.try_into().unwrap()).collect::<Vec<u64>>(),
                n,
                &b.levels.iter().map(|l| l.try_into().unwrap()).collect::<Vec<u64>>(),
            );
            let hi = &lo + &lost;
            let enc = engine.shifted_intersection(&a, &BigInt::from(n), &b, &tol()).unwrap();
            // oracle interval and engine enclosure must overlap...
            assert!(
                enc.lo() <= &hi && &lo <= enc.hi(),
                "case {case}: engine {enc} vs oracle [{lo}, {hi}]"
            );
            // ...and exact results agree exactly
            if lost.is_zero() {
                assert!(enc.lo() <= &lo && &lo <= enc.hi());
                if enc.is_exact() {
                    assert_eq!(enc.lo(), &lo, "case {case}");
                }
            }
        }
    }
}

/// The levelwise reference path, the transfer path and the fast sumset path
/// agree on hundreds of random lags.
#[test]
fn three_paths_agree_on_random_lags() {
    for case in 0..6u64 {
        let mut r = rng(99, case);
        let (_, spec) = random_schedule(&mut r, 7, 4, 4);
        let schedule = Schedule::new(spec).unwrap();
        let engine = Engine::new(schedule.clone());
        let h2: u64 = (&schedule.height(2).unwrap()).try_into().unwrap();
        let a = LevelSet::from_u64s(2, (0..3).map(|_| pick(&mut r, h2)).collect());
        let h6: u64 = (&schedule.height(6).unwrap()).try_into().unwrap();
        let lags: Vec<BigInt> =
            (0..90).map(|_| BigInt::from(pick(&mut r, h6))).collect();
        let fast = engine.base_correlation_fast(&a, &lags, Normalization::Raw).unwrap();
        for (n, enc_fast) in &fast.points {
            let tr = engine.shifted_intersection(&a, n, &a, &tol()).unwrap();
            let lw = engine.shifted_intersection_levelwise(&a, n, &a, &tol()).unwrap();
            assert!(tr.intersect(enc_fast).is_some(), "case {case} lag {n}");
            assert!(tr.intersect(&lw).is_some(), "case {case} lag {n}");
            if tr.is_exact() && lw.is_exact() {
                assert_eq!(tr.lo(), lw.lo());
            }
        }
    }
}

/// Adjoint symmetry: `mu(T^n A ∩ B) = mu(A ∩ T^(-n) B)`, evaluated through
/// the two independent engine paths.
#[test]
fn adjoint_symmetry_across_paths() {
    for case in 0..8u64 {
        let mut r = rng(4242, case);
        let (_, spec) = random_schedule(&mut r, 6, 4, 4);
        let schedule = Schedule::new(spec).unwrap();
        let engine = Engine::new(schedule.clone());
        let h3: u64 = (&schedule.height(3).unwrap()).try_into().unwrap();
        let a = LevelSet::from_u64s(3, vec![pick(&mut r, h3), pick(&mut r, h3)]);
        let b = LevelSet::from_u64s(3, vec![pick(&mut r, h3), pick(&mut r, h3)]);
        for _ in 0..6 {
            let n = BigInt::from(pick(&mut r, 4 * h3));
            let forward = engine.shifted_intersection(&a, &n, &b, &tol()).unwrap();
            let adjoint =
                engine.shifted_intersection_levelwise(&b, &-n.clone(), &a, &tol()).unwrap();
            assert!(forward.intersect(&adjoint).is_some(), "case {case} lag {n}");
        }
    }
}

/// Measure preservation under refinement, across the preset catalog.
#[test]
fn refinement_preserves_measure_everywhere() {
    let mut r = rng(7, 7);
    let mut checked = 0;
    for tag in ["chacon-classical", "chacon-231", "staircase", "katok", "del-junco-rudolph",
                "semibounded", "prime-spacers", "binomial", "slow-growth"]
    {
        let schedule = Schedule::new(preset(tag).unwrap()).unwrap();
        for _ in 0..120 {
            let stage = 1 + pick(&mut r, 4);
            let h: u64 = (&schedule.height(stage).unwrap()).try_into().unwrap();
            let a = LevelSet::from_u64s(
                stage,
                (0..1 + pick(&mut r, 4)).map(|_| pick(&mut r, h)).collect(),
            );
            let to = stage + 1 + pick(&mut r, 3);
            let refined = refine_set(&schedule, &a, to, 1 << 22).unwrap();
            assert_eq!(
                a.measure(&schedule).unwrap(),
                refined.measure(&schedule).unwrap(),
                "{tag} stage {stage} -> {to}"
            );
            checked += 1;
        }
    }
    assert!(checked >= 1000, "want at least 1000 refinement cases, got {checked}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Raw correlation values stay inside [0, min(mu A, mu B)].
    #[test]
    fn correlation_bounds(seed in 0u64..5000, n in 0i64..4000) {
        let mut r = rng(seed, 5);
        let (_, spec) = random_schedule(&mut r, 6, 3, 3);
        let schedule = Schedule::new(spec).unwrap();
        let engine = Engine::new(schedule.clone());
        let h: u64 = (&schedule.height(2).unwrap()).try_into().unwrap();
        let a = LevelSet::from_u64s(2, vec![pick(&mut r, h)]);
        let b = LevelSet::from_u64s(2, vec![pick(&mut r, h), pick(&mut r, h)]);
        let enc = engine.shifted_intersection(&a, &BigInt::from(n), &b, &tol()).unwrap();
        prop_assert!(!enc.lo().is_negative());
        let cap = a.measure(&schedule).unwrap().min(b.measure(&schedule).unwrap());
        prop_assert!(enc.hi() <= &cap);
    }

    /// The recurrence h_(j+1) = h_j r_j + sigma_j holds as a big-integer
    /// identity on random schedules.
    #[test]
    fn height_recurrence(seed in 0u64..5000) {
        let mut r = rng(seed, 6);
        let (data, spec) = random_schedule(&mut r, 8, 4, 5);
        let schedule = Schedule::new(spec).unwrap();
        for (k, (cut, spacers)) in data.iter().enumerate() {
            let j = k as u64 + 1;
            let h = schedule.height(j).unwrap();
            let sigma: u64 = spacers.iter().sum();
            prop_assert_eq!(schedule.height(j + 1).unwrap(), h * cut + sigma);
        }
    }

    /// Symmetric differences obey the triangle-style bound 0 <= v <= 2 mu(A).
    #[test]
    fn sym_diff_bounds(seed in 0u64..5000, n in 1i64..2000) {
        let mut r = rng(seed, 8);
        let (_, spec) = random_schedule(&mut r, 6, 3, 3);
        let schedule = Schedule::new(spec).unwrap();
        let engine = Engine::new(schedule.clone());
        let h: u64 = (&schedule.height(2).unwrap()).try_into().unwrap();
        let a = LevelSet::from_u64s(2, vec![pick(&mut r, h), pick(&mut r, h)]);
        let enc = engine.symmetric_difference(&a, &BigInt::from(n), &tol()).unwrap();
        prop_assert!(!enc.lo().is_negative());
        let cap = a.measure(&schedule).unwrap() * BigRational::from(BigInt::from(2));
        prop_assert!(enc.hi() <= &cap);
    }
}

use num_traits::Signed;

/// Decode of every refined index round-trips to its source level, and no
/// other index decodes into the set.
#[test]
fn decode_refine_round_trip_random() {
    use rank1::tower::{decode_level, LevelProvenance};
    for case in 0..10u64 {
        let mut r = rng(606, case);
        let (_, spec) = random_schedule(&mut r, 6, 4, 4);
        let schedule = Schedule::new(spec).unwrap();
        let stage = 1 + pick(&mut r, 3);
        let h: u64 = (&schedule.height(stage).unwrap()).try_into().unwrap();
        let a = LevelSet::from_u64s(stage, vec![pick(&mut r, h), pick(&mut r, h)]);
        let to = stage + 2;
        let refined = refine_set(&schedule, &a, to, 1 << 22).unwrap();
        let mut members = 0u64;
        let h_to: u64 = (&schedule.height(to).unwrap()).try_into().unwrap();
        for l in 0..h_to {
            if let LevelProvenance::BaseLevel(base) =
                decode_level(&schedule, to, &l.into(), stage).unwrap()
            {
                if a.contains(&base) {
                    members += 1;
                }
            }
        }
        assert_eq!(members as usize, refined.levels.len(), "case {case}");
        for l in &refined.levels {
            match decode_level(&schedule, to, l, stage).unwrap() {
                LevelProvenance::BaseLevel(base) => assert!(a.contains(&base)),
                other => panic!("case {case}: refined level decoded to {other:?}"),
            }
        }
    }
}

/// The oracle's allocated space equals the schedule's total-measure lower
/// bound at the built depth: two independent constructions of the same
/// quantity.
#[test]
fn oracle_space_matches_total_measure_lower_bound() {
    for case in 0..6u64 {
        let mut r = rng(9_000, case);
        let (data, spec) = random_schedule(&mut r, 7, 4, 5);
        let schedule = Schedule::new(spec).unwrap();
        let oracle = Oracle::build(&data);
        let tm = rank1::tower::total_measure(&schedule, 8).unwrap();
        assert_eq!(oracle.space(), tm.lower, "case {case}");
        if let Some(upper) = tm.upper {
            assert!(oracle.space() <= upper);
        }
    }
}

/// Enclosures of a centered series always admit the zero-mixing deviation
/// sanity: |raw - product| stays within [0,1] after normalisation.
#[test]
fn centered_series_is_bounded() {
    let schedule = Schedule::new(preset("chacon-classical").unwrap()).unwrap();
    let engine = Engine::new(schedule.clone());
    let a = LevelSet::from_u64s(3, vec![0, 2, 4]);
    let lags: Vec<BigInt> = (0..24).map(BigInt::from).collect();
    let series =
        engine.correlation_series(&a, &a, &lags, &tol(), Normalization::Centered).unwrap();
    for (n, e) in &series.points {
        assert!(e.lo() >= &BigRational::from(BigInt::from(-1)), "lag {n}");
        assert!(e.hi() <= &BigRational::from(BigInt::from(1)), "lag {n}");
        let env = Enclosure::new(
            BigRational::from(BigInt::from(-1)),
            BigRational::from(BigInt::from(1)),
        );
        assert!(env.contains_interval(e));
    }
}
