//! Worked-example checks for the diagnostic layer: weak-limit fits on the
//! rigid and half-identity families, anomaly sign contrast, spectral
//! summaries, class-alpha decay, triple-correlation oracle agreement, and
//! injectivity through the schedule.

mod common;

use num_bigint::BigInt;
use num_traits::Zero;

use common::oracle::Oracle;
use common::{pick, random_schedule, rng};
use rank1::analysis;
use rank1::enclosure::pow10_neg;
use rank1::engine::{Engine, Normalization};
use rank1::family::{preset, FamilySpec};
use rank1::galois;
use rank1::rule::IntRule;
use rank1::tower::LevelSet;
use rank1::Schedule;

#[test]
fn odometer_weak_limit_is_identity() {
    let schedule = Schedule::new(preset("odometer").unwrap()).unwrap();
    let engine = Engine::new(schedule.clone());
    let powers: Vec<BigInt> =
        (10..=12).map(|j| BigInt::from(schedule.height(j).unwrap())).collect();
    let fit = analysis::weak_limit_fit(&engine, &powers, (0, 4), 3, &pow10_neg(9)).unwrap();
    assert!(fit.coefficients[0] > 0.99, "a_0 = {}", fit.coefficients[0]);
    assert!(fit.residual < 0.01);
}

#[test]
fn self_similar_weak_limit_is_half_identity() {
    let schedule = Schedule::new(FamilySpec::SelfSimilar { coeffs: vec![0, 1] }).unwrap();
    let engine = Engine::new(schedule.clone());
    let powers: Vec<BigInt> =
        (8..=10).map(|j| BigInt::from(schedule.height(j).unwrap())).collect();
    let fit = analysis::weak_limit_fit(&engine, &powers, (0, 4), 3, &pow10_neg(9)).unwrap();
    assert!((fit.coefficients[0] - 0.5).abs() < 0.01, "a_0 = {}", fit.coefficients[0]);
    for k in 1..fit.coefficients.len() {
        assert!(fit.coefficients[k] < 0.01, "a_{k} = {}", fit.coefficients[k]);
    }
}

#[test]
fn fit_residual_nonincreasing_in_window() {
    let schedule = Schedule::new(FamilySpec::ChaconClassical).unwrap();
    let engine = Engine::new(schedule.clone());
    let powers = vec![-BigInt::from(schedule.height(12).unwrap())];
    let mut prev = f64::INFINITY;
    for hi in [1i64, 3, 6, 9] {
        let fit =
            analysis::weak_limit_fit(&engine, &powers, (0, hi), 3, &pow10_neg(9)).unwrap();
        assert!(
            fit.residual_l2 <= prev + 1e-12,
            "window (0,{hi}): residual_l2 {} > previous {prev}",
            fit.residual_l2
        );
        prev = fit.residual_l2;
    }
}

#[test]
fn rigid_odometer_anomaly_has_opposite_sign() {
    // the anomaly witness on a rigid schedule: T^(2 h_j) acts like the
    // identity on stage-j sets, so the value approaches +(nu(A) - nu(A)^2)
    // = 1/4 rather than the staircase's -1/4
    let schedule = Schedule::new(preset("odometer").unwrap()).unwrap();
    let engine = Engine::new(schedule.clone());
    let rep = analysis::staircase_anomaly(&engine, 10, &pow10_neg(8)).unwrap();
    let mid = rep.value.mid_f64();
    assert!((mid - 0.25).abs() < 0.01, "odometer anomaly {mid}");
}

#[test]
fn wiener_average_separates_mixing_from_discrete_spectrum() {
    let tol = pow10_neg(8);
    // weak mixing side: the average decreases as the window grows
    let chacon = Schedule::new(FamilySpec::ChaconClassical).unwrap();
    let engine = Engine::new(chacon.clone());
    let a = LevelSet::from_u64s(3, vec![0, 2, 4]);
    let lags: Vec<BigInt> = (0..48).map(BigInt::from).collect();
    let series =
        engine.correlation_series(&a, &a, &lags, &tol, Normalization::Centered).unwrap();
    let w8 = analysis::wiener_average(&series, 8).unwrap();
    let w48 = analysis::wiener_average(&series, 48).unwrap();
    assert!(w48 < w8, "chacon wiener {w8} -> {w48} should decrease");

    // discrete spectrum side: bounded away from zero at matched windows
    let odo = Schedule::new(preset("odometer").unwrap()).unwrap();
    let engine = Engine::new(odo.clone());
    let b = LevelSet::from_u64s(3, vec![0, 1]);
    let series =
        engine.correlation_series(&b, &b, &lags, &tol, Normalization::Centered).unwrap();
    let w48_odo = analysis::wiener_average(&series, 48).unwrap();
    assert!(w48_odo > 4.0 * w48, "odometer wiener {w48_odo} vs chacon {w48}");

    // and the Fejér density of the centered odometer series dips negative
    // nowhere beyond the enclosure scale
    let density = analysis::spectral_density(&series, 48, 128).unwrap();
    assert!(density.iter().all(|(_, v)| *v > -1e-6));
}

#[test]
fn sidon_class_alpha_beyond_returns_is_zero() {
    let schedule = Schedule::new(preset("sidon").unwrap()).unwrap();
    let engine = Engine::new(schedule.clone());
    let a = LevelSet::base(1);
    // lags strictly inside a block gap: far from any composite offset
    let h5 = BigInt::from(schedule.height(5).unwrap());
    let window: Vec<BigInt> = (2..6).map(|k| &h5 + BigInt::from(k)).collect();
    let rep = analysis::class_alpha(&engine, &a, &[window], &pow10_neg(10)).unwrap();
    assert!(rep.per_window[0].hi() < &pow10_neg(6), "gap window alpha {}", rep.alpha);
    // and the trivial window {0} still gives 1
    let rep =
        analysis::class_alpha(&engine, &a, &[vec![BigInt::zero()]], &pow10_neg(10)).unwrap();
    assert!((rep.alpha - 1.0).abs() < 1e-9);
}

#[test]
fn ornstein_averaging_deviation_shrinks_with_window_growth() {
    // growing H_j: the averaging operator flattens on a fixed indicator
    let spec = FamilySpec::Ornstein {
        r: IntRule::Const { value: 512 },
        window: IntRule::Linear { slope: 8, intercept: 8 },
        seed: 5,
    };
    let schedule = Schedule::new(spec).unwrap();
    let engine = Engine::new(schedule.clone());
    let f = LevelSet::base(1);
    let early = analysis::averaging_deviation(&engine, 1, 3, &f, &pow10_neg(6)).unwrap();
    let late = analysis::averaging_deviation(&engine, 4, 3, &f, &pow10_neg(6)).unwrap();
    assert!(
        late.value.mid_f64() < early.value.mid_f64(),
        "deviation did not shrink: {} -> {}",
        early.value.mid_f64(),
        late.value.mid_f64()
    );
}

#[test]
fn triple_intersections_agree_with_the_oracle() {
    // self-similar (0,1,2) and random schedules, stages small enough for
    // the geometric oracle
    let mut cases: Vec<(Vec<(u64, Vec<u64>)>, FamilySpec)> = Vec::new();
    let ss = FamilySpec::SelfSimilar { coeffs: vec![0, 1, 2] };
    let sched = Schedule::new(ss.clone()).unwrap();
    let data: Vec<(u64, Vec<u64>)> = (1..=6)
        .map(|j| {
            let r = sched.cut_count(j).unwrap();
            let v = sched.spacers(j).unwrap().iter().map(|s| s.try_into().unwrap()).collect();
            (r, v)
        })
        .collect();
    cases.push((data, ss));
    for case in 0..4u64 {
        let mut r = rng(777, case);
        cases.push(random_schedule(&mut r, 6, 3, 3));
    }

    for (ci, (data, spec)) in cases.iter().enumerate() {
        let schedule = Schedule::new(spec.clone()).unwrap();
        let engine = Engine::new(schedule.clone());
        let oracle = Oracle::build(data);
        let mut r = rng(778, ci as u64);
        let h2: u64 = (&schedule.height(2).unwrap()).try_into().unwrap();
        let h4: u64 = (&schedule.height(4).unwrap()).try_into().unwrap();
        for _ in 0..8 {
            let a = LevelSet::from_u64s(2, vec![pick(&mut r, h2)]);
            let b = LevelSet::from_u64s(2, vec![pick(&mut r, h2), pick(&mut r, h2)]);
            let c = LevelSet::from_u64s(2, vec![pick(&mut r, h2), pick(&mut r, h2)]);
            let n2 = pick(&mut r, h4 / 2);
            let n1 = n2 + pick(&mut r, h4 / 2);
            let enc = engine
                .triple_intersection(
                    &a,
                    &BigInt::from(n1),
                    &b,
                    &BigInt::from(n2),
                    &c,
                    &pow10_neg(8),
                )
                .unwrap();
            let to_u = |ls: &LevelSet| -> Vec<u64> {
                ls.levels.iter().map(|l| l.try_into().unwrap()).collect()
            };
            let (lo, lost) =
                oracle.triple_intersection(1, &to_u(&a), n1, &to_u(&b), n2, &to_u(&c));
            let hi = &lo + &lost;
            assert!(
                enc.lo() <= &hi && &lo <= enc.hi(),
                "case {ci}: triple {enc} vs oracle [{lo},{hi}]"
            );
            if lost.is_zero() && enc.is_exact() {
                assert_eq!(enc.lo(), &lo);
            }
        }
    }
}

#[test]
fn schedule_level_injectivity_validation() {
    let schedule = Schedule::new(preset("galois-primitive").unwrap()).unwrap();
    // every window at a few stages of the shipped preset
    for j in [2u64, 4, 6] {
        let p = schedule.cut_count(j).unwrap();
        for w in 1..p {
            assert!(galois::validate_injectivity(&schedule, j, w).unwrap(), "stage {j} w {w}");
        }
        assert!(galois::validate_injectivity(&schedule, j, p).is_err());
    }
    // wrong family errors
    let odo = Schedule::new(preset("odometer").unwrap()).unwrap();
    assert!(galois::validate_injectivity(&odo, 2, 1).is_err());
}

#[test]
fn semibounded_weak_limit_relation() {
    // the semibounded mechanism: T^(h_j) splits between the identity and
    // T^(-s_j), so the correlation at h_j is about half of mu(A) plus half
    // of the correlation at s_j
    let schedule = Schedule::new(preset("semibounded").unwrap()).unwrap();
    let engine = Engine::new(schedule.clone());
    let a = LevelSet::from_u64s(3, vec![0, 4, 7]);
    let tol = pow10_neg(9);
    for j in [9u64, 16] {
        let h = BigInt::from(schedule.height(j).unwrap());
        let s_j = BigInt::from(schedule.spacers(j).unwrap()[1].clone());
        let at_h = engine.shifted_intersection(&a, &h, &a, &tol).unwrap().mid_f64();
        let mu_a = a
            .measure(&schedule)
            .unwrap();
        let mu_a = rank1::Enclosure::exact(mu_a).mid_f64();
        let at_s = engine.shifted_intersection(&a, &-s_j, &a, &tol).unwrap().mid_f64();
        let predicted = 0.5 * mu_a + 0.5 * at_s;
        assert!(
            (at_h - predicted).abs() < 0.12 * mu_a,
            "stage {j}: corr(h_j) = {at_h}, predicted {predicted}"
        );
    }
}
