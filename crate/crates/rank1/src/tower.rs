//! Towers, level sets, refinement and decoding.
//!
//! The stage-`j` tower is `h_j` levels of measure `m_j` each. Stacking maps
//! level `l` of stage `j` to the stage-`j+1` levels `o_j(i) + l`, one per
//! column, with `o_j(i) = sum_(u<i) (h_j + s_j(u))`. Refinement applies this
//! forward; decoding walks it backwards, classifying a deep level as a copy
//! of a base level or as a spacer inserted at some intermediate stage.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::family::MassProfile;
use crate::schedule::Schedule;
use crate::{Error, Result};

/// Stage snapshot: height, level measure, and the stacking offsets used to
/// build the next stage.
#[derive(Clone, Debug)]
pub struct Tower {
    pub stage: u64,
    pub height: BigUint,
    pub level_measure: BigRational,
    /// `o_j(i)` for columns `i = 1..=r_j`; index 0 is column 1.
    pub offsets: Vec<BigUint>,
    pub next_height: BigUint,
}

/// Towers for stages `start..=last`, with exact heights, measures and
/// offsets. Stages whose cut count exceeds the materialisation cap cannot be
/// represented as towers (their offset list would not fit) and error out.
pub fn tower_sequence(schedule: &Schedule, last: u64) -> Result<Vec<Tower>> {
    let mut out = Vec::new();
    for j in schedule.start_stage()..=last {
        out.push(Tower {
            stage: j,
            height: schedule.height(j)?,
            level_measure: schedule.level_measure(j)?,
            offsets: schedule.offsets(j)?.as_ref().clone(),
            next_height: schedule.height(j + 1)?,
        });
    }
    Ok(out)
}

/// A union of levels of one stage: sorted, distinct indices in `[0, h_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelSet {
    pub stage: u64,
    pub levels: Vec<BigUint>,
}

impl LevelSet {
    pub fn new(schedule: &Schedule, stage: u64, mut levels: Vec<BigUint>) -> Result<LevelSet> {
        levels.sort();
        levels.dedup();
        let h = schedule.height(stage)?;
        if let Some(last) = levels.last() {
            if *last >= h {
                return Err(Error::OutOfRange(format!(
                    "level {last} is outside the stage-{stage} tower of height {h}"
                )));
            }
        }
        Ok(LevelSet { stage, levels })
    }

    /// The base level `E_j` as a set: `{0}`.
    pub fn base(stage: u64) -> LevelSet {
        LevelSet { stage, levels: vec![BigUint::zero()] }
    }

    pub fn singleton(stage: u64, level: u64) -> LevelSet {
        LevelSet { stage, levels: vec![BigUint::from(level)] }
    }

    pub fn from_u64s(stage: u64, mut levels: Vec<u64>) -> LevelSet {
        levels.sort_unstable();
        levels.dedup();
        LevelSet { stage, levels: levels.into_iter().map(BigUint::from).collect() }
    }

    /// All levels of the stage; the tower height must fit in the cap.
    pub fn full(schedule: &Schedule, stage: u64, cap: u64) -> Result<LevelSet> {
        let h = schedule.height(stage)?;
        let h64 = u64::try_from(&h)
            .map_err(|_| Error::SizeBudgetExceeded(format!("stage {stage} height above {cap}")))?;
        if h64 > cap {
            return Err(Error::SizeBudgetExceeded(format!(
                "stage {stage} height {h64} above the cap {cap}"
            )));
        }
        Ok(LevelSet { stage, levels: (0..h64).map(BigUint::from).collect() })
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// `|levels| * m_j`.
    pub fn measure(&self, schedule: &Schedule) -> Result<BigRational> {
        let m = schedule.level_measure(self.stage)?;
        Ok(BigRational::from(BigInt::from(self.levels.len())) * m)
    }

    pub fn contains(&self, level: &BigUint) -> bool {
        self.levels.binary_search(level).is_ok()
    }
}

/// The same set expressed at stage `to >= set.stage`; measure is preserved
/// exactly because every level has exactly `r_j` disjoint copies per stage.
pub fn refine_set(schedule: &Schedule, set: &LevelSet, to: u64, cap: u64) -> Result<LevelSet> {
    if to < set.stage {
        return Err(Error::OutOfRange(format!(
            "cannot refine from stage {} down to {to}",
            set.stage
        )));
    }
    // estimate output size before doing any work
    let mut estimate = set.levels.len() as u128;
    for j in set.stage..to {
        estimate = estimate.saturating_mul(schedule.cut_count(j)? as u128);
        if estimate > cap as u128 {
            return Err(Error::SizeBudgetExceeded(format!(
                "refinement to stage {to} needs {estimate} indices (cap {cap})"
            )));
        }
    }
    let mut levels = set.levels.clone();
    for j in set.stage..to {
        let offsets = schedule.offsets(j)?;
        let mut next = Vec::with_capacity(levels.len() * offsets.len());
        for o in offsets.iter() {
            for l in &levels {
                next.push(o + l);
            }
        }
        next.sort();
        levels = next;
    }
    Ok(LevelSet { stage: to, levels })
}

/// Where a deep level came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LevelProvenance {
    /// A copy of this level of the query stage.
    BaseLevel(BigUint),
    /// Inside the spacer block added over `column` (1-based) when stacking
    /// `stage` into `stage + 1`; `offset` is the position within the block,
    /// `0 <= offset < s_stage(column)`.
    Spacer { stage: u64, column: u64, offset: BigUint },
}

/// Classify level `level` of stage `at` relative to stage `down_to`.
///
/// Walks stages downward; at each step a binary search over the offsets
/// finds the column, and the level either lands in that column's tower copy
/// (continue down) or in its spacer block (stop).
pub fn decode_level(
    schedule: &Schedule,
    at: u64,
    level: &BigUint,
    down_to: u64,
) -> Result<LevelProvenance> {
    if down_to > at {
        return Err(Error::OutOfRange(format!("decode target {down_to} is above stage {at}")));
    }
    if *level >= schedule.height(at)? {
        return Err(Error::OutOfRange(format!(
            "level {level} is outside the stage-{at} tower"
        )));
    }
    let mut cur = level.clone();
    let mut j = at;
    while j > down_to {
        let stack = j - 1; // the stacking that produced stage j
        let offsets = schedule.offsets(stack)?;
        let col = match offsets.binary_search(&cur) {
            Ok(i) => i,
            Err(i) => i - 1, // offsets[0] == 0 <= cur
        };
        let within = &cur - &offsets[col];
        let h = schedule.height(stack)?;
        if within < h {
            cur = within;
            j = stack;
        } else {
            return Ok(LevelProvenance::Spacer {
                stage: stack,
                column: col as u64 + 1,
                offset: within - h,
            });
        }
    }
    Ok(LevelProvenance::BaseLevel(cur))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Finiteness {
    Finite,
    Infinite,
    Unknown,
}

/// Total measure of the space seen from stage `j`: an exact lower bound
/// `h_j * m_j`, plus an upper bound when the family declares a tail.
#[derive(Clone, Debug)]
pub struct TotalMeasure {
    pub stage: u64,
    pub lower: BigRational,
    pub upper: Option<BigRational>,
    pub finiteness: Finiteness,
    /// True when `upper` equals the actual total measure (periodic or
    /// spacer-free schedules).
    pub upper_is_limit: bool,
}

impl TotalMeasure {
    /// Divide an enclosure by this total measure, outward.
    pub fn normalize(&self, e: &crate::Enclosure) -> crate::Enclosure {
        e.div_pos(&self.lower, self.upper.as_ref())
    }
}

pub fn total_measure(schedule: &Schedule, j: u64) -> Result<TotalMeasure> {
    let lower = BigRational::from(BigInt::from(schedule.height(j)?))
        * schedule.level_measure(j)?;
    let profile = schedule.mass_profile()?;
    let rat = |num: u64, den: u64| {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    };
    let (upper, finiteness, upper_is_limit) = match profile {
        MassProfile::Zero => (Some(lower.clone()), Finiteness::Finite, true),
        MassProfile::EventuallyPeriodic { period } => {
            // exact geometric tail: masses repeat scaled by q = prod 1/r
            let mut period_mass = BigRational::zero();
            let mut q = BigRational::one();
            for k in 0..period {
                period_mass += schedule.stage_mass(j + k)?;
                q /= BigRational::from(BigInt::from(schedule.cut_count(j + k)?));
            }
            let tail = period_mass / (BigRational::one() - q);
            (Some(&lower + tail), Finiteness::Finite, true)
        }
        MassProfile::GeometricBound { num, den, from_stage } => {
            let mut tail = BigRational::zero();
            let mut k = j;
            while k < from_stage {
                tail += schedule.stage_mass(k)?;
                k += 1;
            }
            let rho = rat(num, den);
            tail += schedule.stage_mass(k)? / (BigRational::one() - rho);
            (Some(&lower + tail), Finiteness::Finite, false)
        }
        MassProfile::GeometricPairBound { num, den, from_stage } => {
            let mut tail = BigRational::zero();
            let mut k = j;
            while k < from_stage {
                tail += schedule.stage_mass(k)?;
                k += 1;
            }
            let rho = rat(num, den);
            let pair = schedule.stage_mass(k)? + schedule.stage_mass(k + 1)?;
            tail += pair / (BigRational::one() - rho);
            (Some(&lower + tail), Finiteness::Finite, false)
        }
        MassProfile::Infinite => (None, Finiteness::Infinite, false),
        MassProfile::Unknown => (None, Finiteness::Unknown, false),
    };
    Ok(TotalMeasure { stage: j, lower, upper, finiteness, upper_is_limit })
}
