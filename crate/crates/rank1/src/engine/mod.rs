//! Rigorous enclosures of shifted intersection measures.
//!
//! The central quantity is `mu(T^n A ∩ B)` for level sets `A, B`. Working at
//! a stage `K` whose tower is taller than `n`, every pair that stays inside
//! the stage-`K` tower is counted exactly; the only unresolved mass is the
//! part of `A` within `n` levels of the roof. That gives the enclosure
//!
//! ```text
//! m_K * inside(K)  <=  mu(T^n A ∩ B)  <=  m_K * (inside(K) + escaped(K))
//! ```
//!
//! and `escaped(K) -> 0` as `K` grows (exactly zero as soon as a stage puts
//! `n` or more spacers on top of its last column). Counting is done through
//! the stage-transfer decomposition of [`transfer`], so lags like `h_50`
//! with heights of thousands of bits are fine; nothing is materialised.
//!
//! Negative lags go through the adjoint identity
//! `mu(T^n A ∩ B) = mu(T^|n| B ∩ A)`.

pub mod levelwise;
pub mod transfer;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::enclosure::Enclosure;
use crate::schedule::Schedule;
use crate::tower::{total_measure, LevelSet, TotalMeasure};
use crate::{Error, Result};
use transfer::{push_shift, push_tail, shift_count, BaseSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// `mu(T^n A ∩ B)` with the base level of the start stage at measure 1.
    Raw,
    /// Divided by the total-measure enclosure.
    Normalized,
    /// Normalized, minus `nu(A) nu(B)`.
    Centered,
}

#[derive(Clone, Debug)]
pub struct EngineOptions {
    /// Budget for refinement sizes and transfer nodes.
    pub size_cap: u64,
    /// How many stages past the first admissible one the escape iteration
    /// may climb before giving up on the tolerance.
    pub max_extra_stages: u64,
    /// Stage depth used when a total-measure enclosure is needed for
    /// normalisation.
    pub norm_depth: u64,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { size_cap: 10_000_000, max_extra_stages: 64, norm_depth: 32 }
    }
}

/// Correlation lags paired with enclosures.
#[derive(Clone, Debug)]
pub struct CorrelationSeries {
    pub a: LevelSet,
    pub b: LevelSet,
    pub mode: Normalization,
    /// Strictly increasing lags.
    pub points: Vec<(BigInt, Enclosure)>,
}

impl CorrelationSeries {
    pub fn value_at(&self, lag: &BigInt) -> Option<&Enclosure> {
        self.points
            .binary_search_by(|(n, _)| n.cmp(lag))
            .ok()
            .map(|i| &self.points[i].1)
    }
}

pub struct Engine {
    schedule: Schedule,
    opts: EngineOptions,
}

impl Engine {
    pub fn new(schedule: Schedule) -> Engine {
        Engine { schedule, opts: EngineOptions::default() }
    }

    pub fn with_options(schedule: Schedule, opts: EngineOptions) -> Engine {
        Engine { schedule, opts }
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn options(&self) -> &EngineOptions {
        &self.opts
    }

    /// Total measure seen from a deep stage, for normalisation.
    pub fn total_measure_enclosure(&self, base_stage: u64) -> Result<TotalMeasure> {
        total_measure(&self.schedule, base_stage + self.opts.norm_depth)
    }

    /// Enclosure of `mu(T^n A ∩ B)` of width at most `tol` (or exact).
    pub fn shifted_intersection(
        &self,
        a: &LevelSet,
        n: &BigInt,
        b: &LevelSet,
        tol: &BigRational,
    ) -> Result<Enclosure> {
        self.shifted_base(&BaseSet::Levels(a.clone()), n, &BaseSet::Levels(b.clone()), tol)
    }

    pub(crate) fn shifted_base(
        &self,
        a: &BaseSet,
        n: &BigInt,
        b: &BaseSet,
        tol: &BigRational,
    ) -> Result<Enclosure> {
        if a.stage() != b.stage() {
            return Err(Error::InvalidParam(format!(
                "sets live at stages {} and {}; refine to a common stage first",
                a.stage(),
                b.stage()
            )));
        }
        if n.is_negative() {
            // mu(T^n A ∩ B) = mu(T^|n| B ∩ A)
            return self.shifted_base(b, &-n, a, tol);
        }
        let stage = a.stage();
        let h = self.schedule.height(stage)?;
        if n.is_zero() {
            let count = shift_count(a, b, n, &h);
            let m = self.schedule.level_measure(stage)?;
            return Ok(Enclosure::exact(rat(&count) * m));
        }

        // first stage whose tower is taller than n
        let mut top = stage;
        while BigInt::from(self.schedule.height(top)?) <= *n {
            top += 1;
        }

        let mut best: Option<Enclosure> = None;
        for _ in 0..=self.opts.max_extra_stages {
            let enc = self.enclosure_at(a, n, b, top)?;
            let merged = match &best {
                None => enc,
                Some(prev) => prev.intersect(&enc).ok_or_else(|| {
                    Error::InvalidParam("inconsistent enclosures across stages".into())
                })?,
            };
            if merged.width() <= *tol || merged.is_exact() {
                return Ok(merged);
            }
            best = Some(merged);
            top += 1;
        }
        Err(Error::StageBudgetExceeded { partial: best.expect("at least one stage evaluated") })
    }

    /// One-stage enclosure: exact count inside the stage-`top` tower plus
    /// the escaped mass near the roof.
    fn enclosure_at(&self, a: &BaseSet, n: &BigInt, b: &BaseSet, top: u64) -> Result<Enclosure> {
        let stage = a.stage();
        let down = push_shift(&self.schedule, stage, top, n, self.opts.size_cap)?;
        let inside = down.evaluate(&self.schedule, a, b)?;
        let theta = BigInt::from(self.schedule.height(top)?) - n;
        let tail = push_tail(&self.schedule, stage, top, &theta, self.opts.size_cap)?;
        let escaped = tail.evaluate(&self.schedule, a)?;
        let m = self.schedule.level_measure(top)?;
        let lo = rat(&inside) * &m;
        let hi = rat(&(inside + escaped)) * &m;
        Ok(Enclosure::new(lo, hi))
    }

    /// `mu(T^n A △ A) = 2 mu(A) - 2 mu(T^n A ∩ A)`.
    pub fn symmetric_difference(
        &self,
        a: &LevelSet,
        n: &BigInt,
        tol: &BigRational,
    ) -> Result<Enclosure> {
        if n.is_zero() {
            return Ok(Enclosure::zero());
        }
        let two = BigRational::from(BigInt::from(2));
        let mu_a = a.measure(&self.schedule)?;
        let inner_tol = tol / &two;
        let inter = self.shifted_intersection(a, n, a, &inner_tol)?;
        let total = Enclosure::exact(&two * mu_a);
        Ok(total.sub(&inter.scale(&two)).max_zero())
    }

    /// Per-lag enclosures for `mu(T^n A ∩ B)`, optionally normalised or
    /// centered by the total-measure enclosure.
    pub fn correlation_series(
        &self,
        a: &LevelSet,
        b: &LevelSet,
        lags: &[BigInt],
        tol: &BigRational,
        mode: Normalization,
    ) -> Result<CorrelationSeries> {
        if lags.is_empty() {
            return Err(Error::Config("empty lag list".into()));
        }
        let mut lags: Vec<BigInt> = lags.to_vec();
        lags.sort();
        lags.dedup();
        use rayon::prelude::*;
        let raw: Result<Vec<(BigInt, Enclosure)>> = lags
            .par_iter()
            .map(|n| Ok((n.clone(), self.shifted_intersection(a, n, b, tol)?)))
            .collect();
        let raw = raw?;
        let points = self.apply_mode(a, b, raw, mode)?;
        Ok(CorrelationSeries { a: a.clone(), b: b.clone(), mode, points })
    }

    fn apply_mode(
        &self,
        a: &LevelSet,
        b: &LevelSet,
        raw: Vec<(BigInt, Enclosure)>,
        mode: Normalization,
    ) -> Result<Vec<(BigInt, Enclosure)>> {
        match mode {
            Normalization::Raw => Ok(raw),
            Normalization::Normalized | Normalization::Centered => {
                let tm = self.total_measure_enclosure(a.stage)?;
                let product = match mode {
                    Normalization::Centered => {
                        let na = tm.normalize(&Enclosure::exact(a.measure(&self.schedule)?));
                        let nb = tm.normalize(&Enclosure::exact(b.measure(&self.schedule)?));
                        Some(na.mul(&nb))
                    }
                    _ => None,
                };
                Ok(raw
                    .into_iter()
                    .map(|(n, e)| {
                        let mut v = tm.normalize(&e);
                        if let Some(p) = &product {
                            v = v.sub(p);
                        }
                        (n, v)
                    })
                    .collect())
            }
        }
    }

    /// Meet-in-the-middle fast path for base correlations `mu(T^n A ∩ A)`
    /// when `A` is a union of stage-`J` levels.
    ///
    /// The stage-`K` footprint of `A` is the sumset `A ⊕ U ⊕ V`, where `U`
    /// and `V` run over composite stacking offsets of the two halves of the
    /// stage range. Both halves are enumerated and sorted; pairs at a given
    /// difference are counted by two-pointer sweeps, and the escape count
    /// near the roof bounds the enclosure width.
    pub fn base_correlation_fast(
        &self,
        a: &LevelSet,
        lags: &[BigInt],
        mode: Normalization,
    ) -> Result<CorrelationSeries> {
        if lags.is_empty() {
            return Err(Error::Config("empty lag list".into()));
        }
        let mut lags: Vec<BigInt> = lags.to_vec();
        lags.sort();
        lags.dedup();
        let stage = a.stage;
        let max_abs = lags.iter().map(|n| n.magnitude().clone()).max().unwrap();

        let mut top = stage;
        while self.schedule.height(top)? <= max_abs {
            top += 1;
        }
        top += 1; // one extra stage keeps escapes modest

        // split [stage, top): second half capped so the difference table of
        // V stays small; the first half carries the bulk under size_cap
        let q_cap: u64 = 1 << 11;
        let mut mid = top;
        let mut q_size: u64 = 1;
        while mid > stage {
            let r = self.schedule.cut_count(mid - 1)?;
            if q_size.saturating_mul(r) > q_cap {
                break;
            }
            q_size *= r;
            mid -= 1;
        }
        let mut p_size = a.levels.len() as u64;
        for k in stage..mid {
            p_size = p_size.saturating_mul(self.schedule.cut_count(k)?);
            if p_size > self.opts.size_cap {
                return Err(Error::SizeBudgetExceeded(format!(
                    "fast-path first half needs {p_size} entries (cap {})",
                    self.opts.size_cap
                )));
            }
        }

        let p_half = {
            let refined = crate::tower::refine_set(&self.schedule, a, mid, self.opts.size_cap)?;
            refined.levels.into_iter().map(BigInt::from).collect::<Vec<_>>()
        };
        let mut v_half: Vec<BigInt> = vec![BigInt::zero()];
        for k in mid..top {
            let offsets = self.schedule.offsets(k)?;
            let mut next = Vec::with_capacity(v_half.len() * offsets.len());
            for o in offsets.iter() {
                let o = BigInt::from(o.clone());
                for v in &v_half {
                    next.push(v + &o);
                }
            }
            next.sort();
            v_half = next;
        }

        // multiplicity table of V-differences
        let mut v_diffs: std::collections::BTreeMap<BigInt, u64> = Default::default();
        for qa in &v_half {
            for qb in &v_half {
                *v_diffs.entry(qb - qa).or_insert(0) += 1;
            }
        }

        let h_top = BigInt::from(self.schedule.height(top)?);
        let m_top = self.schedule.level_measure(top)?;
        let mut points = Vec::with_capacity(lags.len());
        for n in &lags {
            let n_abs = if n.is_negative() { -n.clone() } else { n.clone() };
            let mut inside = BigUint::zero();
            for (d, mult) in &v_diffs {
                // pairs (pa, pb) with pb - pa = n - d
                let delta = &n_abs - d;
                let c = sorted_pairs_at_difference(&p_half, &delta);
                if c > 0 {
                    inside += BigUint::from(c) * BigUint::from(*mult);
                }
            }
            // escape: x = p + q with x + n >= h_top
            let mut escaped = BigUint::zero();
            for q in &v_half {
                let cut = &h_top - &n_abs - q;
                let idx = p_half.partition_point(|p| *p < cut);
                escaped += BigUint::from(p_half.len() - idx);
            }
            let lo = rat(&inside) * &m_top;
            let hi = rat(&(inside + escaped)) * &m_top;
            points.push((n.clone(), Enclosure::new(lo, hi)));
        }
        let points = self.apply_mode(a, a, points, mode)?;
        Ok(CorrelationSeries { a: a.clone(), b: a.clone(), mode, points })
    }
}

/// `#{(x, y) in s × s : y - x = delta}` for sorted `s`.
fn sorted_pairs_at_difference(s: &[BigInt], delta: &BigInt) -> u64 {
    let mut count = 0u64;
    let mut j = 0usize;
    for x in s {
        let target = x + delta;
        while j < s.len() && s[j] < target {
            j += 1;
        }
        if j == s.len() {
            break;
        }
        if s[j] == target {
            count += 1;
        }
    }
    count
}

fn rat(u: &BigUint) -> BigRational {
    BigRational::from(BigInt::from(u.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enclosure::pow10_neg;
    use crate::family::{preset, FamilySpec};

    fn tol() -> BigRational {
        pow10_neg(9)
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn identity_power_is_exact() {
        let s = Schedule::new(FamilySpec::ChaconClassical).unwrap();
        let e = Engine::new(s);
        let a = LevelSet::from_u64s(3, vec![0, 2, 4]);
        let enc = e.shifted_intersection(&a, &BigInt::zero(), &a, &tol()).unwrap();
        assert!(enc.is_exact());
        assert_eq!(enc.lo(), &r(3, 4));
    }

    #[test]
    fn chacon_base_self_correlation_at_h2() {
        // A = B = E_2 (stage-2 base), n = h_2 = 3: stage-3 offsets are (0, 3);
        // level 0 -> 3 lands in the second copy, level 3 -> 6 is the spacer.
        let s = Schedule::new(FamilySpec::ChaconClassical).unwrap();
        let e = Engine::new(s);
        let a = LevelSet::base(2);
        let enc = e.shifted_intersection(&a, &BigInt::from(3), &a, &tol()).unwrap();
        assert!(enc.is_exact());
        assert_eq!(enc.lo(), &r(1, 4));
    }

    #[test]
    fn odometer_escape_resolves_geometrically() {
        let s = Schedule::new(preset("odometer").unwrap()).unwrap();
        let e = Engine::new(s.clone());
        let a = LevelSet::base(4);
        let mu_a = a.measure(&s).unwrap();
        let n = BigInt::from(s.height(6).unwrap());
        let enc = e.shifted_intersection(&a, &n, &a, &r(1, 1_000_000)).unwrap();
        // rigid: mu(T^(h_j) A ∩ A) -> mu(A)
        assert!(enc.hi() <= &mu_a);
        assert!(enc.lo() > &(&mu_a * r(99, 100)));
    }

    #[test]
    fn negative_lags_use_the_adjoint() {
        let s = Schedule::new(FamilySpec::Chacon231).unwrap();
        let e = Engine::new(s);
        let a = LevelSet::from_u64s(2, vec![0, 3]);
        let b = LevelSet::from_u64s(2, vec![1, 2, 5]);
        let plus = e.shifted_intersection(&a, &BigInt::from(4), &b, &tol()).unwrap();
        let minus = e.shifted_intersection(&b, &BigInt::from(-4), &a, &tol()).unwrap();
        assert!(plus.intersect(&minus).is_some());
        assert_eq!(plus.lo(), minus.lo());
    }

    #[test]
    fn symmetric_difference_zero_lag() {
        let s = Schedule::new(FamilySpec::ChaconClassical).unwrap();
        let e = Engine::new(s);
        let a = LevelSet::base(3);
        let enc = e.symmetric_difference(&a, &BigInt::zero(), &tol()).unwrap();
        assert!(enc.is_exact());
        assert!(enc.lo().is_zero());
    }

    #[test]
    fn series_bounds_and_sorting() {
        let s = Schedule::new(FamilySpec::ChaconClassical).unwrap();
        let e = Engine::new(s.clone());
        let a = LevelSet::from_u64s(3, vec![0, 1]);
        let b = LevelSet::from_u64s(3, vec![1, 4]);
        let lags: Vec<BigInt> = [3i64, 0, 7, 3, 1].map(BigInt::from).to_vec();
        let series = e.correlation_series(&a, &b, &lags, &tol(), Normalization::Raw).unwrap();
        assert_eq!(series.points.len(), 4);
        assert!(series.points.windows(2).all(|w| w[0].0 < w[1].0));
        let cap = a.measure(&s).unwrap().min(b.measure(&s).unwrap());
        for (_, enc) in &series.points {
            assert!(!enc.lo().is_negative());
            assert!(enc.hi() <= &cap);
        }
        assert!(series.value_at(&BigInt::from(7)).is_some());
        assert!(series.value_at(&BigInt::from(2)).is_none());
    }

    #[test]
    fn fast_path_agrees_with_transfer_path() {
        let s = Schedule::new(preset("staircase").unwrap()).unwrap();
        let e = Engine::new(s.clone());
        let a = LevelSet::from_u64s(2, vec![0, 4, 7]);
        let lags: Vec<BigInt> = (0..40).map(BigInt::from).collect();
        let fast = e.base_correlation_fast(&a, &lags, Normalization::Raw).unwrap();
        for (n, enc_fast) in &fast.points {
            let enc = e.shifted_intersection(&a, n, &a, &tol()).unwrap();
            assert!(
                enc.intersect(enc_fast).is_some(),
                "lag {n}: {enc} vs fast {enc_fast}"
            );
            if enc.is_exact() && enc_fast.is_exact() {
                assert_eq!(enc.lo(), enc_fast.lo());
            }
        }
    }

    #[test]
    fn fast_path_zero_beyond_overlap() {
        let s = Schedule::new(FamilySpec::ChaconClassical).unwrap();
        let e = Engine::new(s.clone());
        let a = LevelSet::base(1);
        // far beyond any overlap at the chosen stage: exact zero overlap
        // would need the window to close; check value is tiny but sound
        let n: BigInt = BigInt::from(s.height(12).unwrap()) - 1;
        let series = e.base_correlation_fast(&a, &[n.clone()], Normalization::Raw).unwrap();
        let enc = e.shifted_intersection(&a, &n, &a, &tol()).unwrap();
        assert!(enc.intersect(&series.points[0].1).is_some());
    }

    #[test]
    fn stage_budget_reports_partial() {
        // the odometer has no spacers, so one level of A always sits within
        // n of the roof; a ridiculous tolerance with a tiny stage budget
        // must error with a partial enclosure
        let s = Schedule::new(preset("odometer").unwrap()).unwrap();
        let e = Engine::with_options(
            s,
            EngineOptions { size_cap: 10_000_000, max_extra_stages: 2, norm_depth: 8 },
        );
        let a = LevelSet::base(2);
        let res = e.shifted_intersection(&a, &BigInt::from(5), &a, &pow10_neg(30));
        match res {
            Err(Error::StageBudgetExceeded { partial }) => {
                assert!(partial.width() > pow10_neg(30));
            }
            other => panic!("expected stage budget error, got {other:?}"),
        }
    }

    #[test]
    fn monotone_refinement_never_widens() {
        let s = Schedule::new(preset("staircase").unwrap()).unwrap();
        let a = LevelSet::from_u64s(2, vec![0, 2, 5]);
        let n = BigInt::from(17);
        let mut prev_width: Option<BigRational> = None;
        for extra in [0u64, 1, 2, 4, 8] {
            let e = Engine::with_options(
                s.clone(),
                EngineOptions { size_cap: 10_000_000, max_extra_stages: extra, norm_depth: 8 },
            );
            let enc = match e.shifted_intersection(&a, &n, &a, &BigRational::zero()) {
                Ok(enc) => enc,
                Err(Error::StageBudgetExceeded { partial }) => partial,
                Err(other) => panic!("{other}"),
            };
            if let Some(w) = prev_width {
                assert!(enc.width() <= w);
            }
            prev_width = Some(enc.width());
        }
    }
}
