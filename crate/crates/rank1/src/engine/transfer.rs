//! Stage-transfer decompositions.
//!
//! For sets refined to stage `K`, the pair count at shift `t`
//!
//! ```text
//! G_K(t) = #{ x in A_K : x + t in B_K }
//! ```
//!
//! satisfies, one stacking step down,
//!
//! ```text
//! G_(k+1)(t) = sum over column pairs (i, i') of G_k(t - (o_k(i') - o_k(i)))
//! ```
//!
//! because a stage-(k+1) pair lives in a pair of column copies. Only column
//! pairs with `|t - (o(i') - o(i))| < h_k` can contribute, so pushing a
//! shift down to the base stage yields a coefficient map
//! `G_K(t) = sum_tau c_tau * G_J(tau)` that stays small for structured
//! schedules even when `t` is astronomically large. Tail counts
//! `#{ x in A_K : x >= theta }` decompose the same way through single
//! columns. This is what lets the engine evaluate correlations at lags far
//! beyond any materialisable refinement.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::schedule::Schedule;
use crate::tower::LevelSet;
use crate::{Error, Result};

/// A correlation base: something we can count shifted pairs and tails on at
/// the base stage without necessarily materialising levels.
#[derive(Clone, Debug)]
pub enum BaseSet {
    Levels(LevelSet),
    /// Odd level indices of the stage: 1, 3, 5, ...
    Odd { stage: u64 },
}

impl BaseSet {
    pub fn stage(&self) -> u64 {
        match self {
            BaseSet::Levels(ls) => ls.stage,
            BaseSet::Odd { stage } => *stage,
        }
    }

    /// Cardinality within a tower of height `h`.
    pub fn len(&self, h: &BigUint) -> BigUint {
        match self {
            BaseSet::Levels(ls) => BigUint::from(ls.levels.len()),
            BaseSet::Odd { .. } => h / 2u32,
        }
    }

    /// `#{ x in self : x >= theta }` within height `h`.
    pub fn tail_count(&self, theta: &BigInt, h: &BigUint) -> BigUint {
        if theta.is_negative() || theta.is_zero() {
            return self.len(h);
        }
        let theta_u = theta.to_biguint().expect("non-negative");
        if theta_u >= *h {
            return BigUint::zero();
        }
        match self {
            BaseSet::Levels(ls) => {
                let idx = ls.levels.partition_point(|l| *l < theta_u);
                BigUint::from(ls.levels.len() - idx)
            }
            BaseSet::Odd { .. } => odd_in(&theta_u, h),
        }
    }
}

/// Odd integers in `[lo, hi)`.
fn odd_in(lo: &BigUint, hi: &BigUint) -> BigUint {
    if hi <= lo {
        return BigUint::zero();
    }
    let span = hi - lo;
    let lo_odd = lo % 2u32 == BigUint::one();
    if lo_odd {
        (span + BigUint::one()) / 2u32
    } else {
        span / 2u32
    }
}

/// `#{ x in a : x + tau in b }` for base sets of a common stage with height `h`.
pub fn shift_count(a: &BaseSet, b: &BaseSet, tau: &BigInt, h: &BigUint) -> BigUint {
    let h_int = BigInt::from(h.clone());
    if tau.magnitude() >= h {
        return BigUint::zero();
    }
    match (a, b) {
        (BaseSet::Levels(la), BaseSet::Levels(lb)) => {
            let mut count = BigUint::zero();
            for x in &la.levels {
                let y = BigInt::from(x.clone()) + tau;
                if y.is_negative() || y >= h_int {
                    continue;
                }
                let y = y.to_biguint().unwrap();
                if lb.levels.binary_search(&y).is_ok() {
                    count += 1u32;
                }
            }
            count
        }
        (BaseSet::Odd { .. }, BaseSet::Odd { .. }) => {
            // x odd and x + tau odd forces tau even
            if (tau % 2u32).is_zero() {
                // overlap window for x: [max(0, -tau), min(h, h - tau))
                let lo = if tau.is_negative() {
                    (-tau).to_biguint().unwrap()
                } else {
                    BigUint::zero()
                };
                let hi = if tau.is_positive() {
                    h - tau.to_biguint().unwrap()
                } else {
                    h.clone()
                };
                odd_in(&lo, &hi)
            } else {
                BigUint::zero()
            }
        }
        (BaseSet::Levels(la), BaseSet::Odd { .. }) => {
            let mut count = BigUint::zero();
            for x in &la.levels {
                let y = BigInt::from(x.clone()) + tau;
                if !y.is_negative() && y < h_int && (&y % 2u32) == BigInt::one() {
                    count += 1u32;
                }
            }
            count
        }
        (BaseSet::Odd { .. }, BaseSet::Levels(lb)) => {
            let mut count = BigUint::zero();
            for y in &lb.levels {
                let x = BigInt::from(y.clone()) - tau;
                if !x.is_negative() && x < h_int && (&x % 2u32) == BigInt::one() {
                    count += 1u32;
                }
            }
            count
        }
    }
}

/// Decomposition of a stage-`top` shift over base-stage shifts.
#[derive(Clone, Debug)]
pub struct ShiftDown {
    pub base_stage: u64,
    pub top_stage: u64,
    /// `G_top(t) = sum coeffs[tau] * G_base(tau)`.
    pub coeffs: BTreeMap<BigInt, BigUint>,
}

impl ShiftDown {
    pub fn evaluate(&self, schedule: &Schedule, a: &BaseSet, b: &BaseSet) -> Result<BigUint> {
        let h = schedule.height(self.base_stage)?;
        let mut total = BigUint::zero();
        for (tau, c) in &self.coeffs {
            let cnt = shift_count(a, b, tau, &h);
            if !cnt.is_zero() {
                total += c * cnt;
            }
        }
        Ok(total)
    }
}

/// Decomposition of a stage-`top` tail count over base-stage tails.
#[derive(Clone, Debug)]
pub struct TailDown {
    pub base_stage: u64,
    pub top_stage: u64,
    /// Coefficient on the full base count `|A_base|`.
    pub full: BigUint,
    /// `theta` strictly inside `(0, h_base)`.
    pub coeffs: BTreeMap<BigInt, BigUint>,
}

impl TailDown {
    pub fn evaluate(&self, schedule: &Schedule, a: &BaseSet) -> Result<BigUint> {
        let h = schedule.height(self.base_stage)?;
        let mut total = &self.full * a.len(&h);
        for (theta, c) in &self.coeffs {
            let cnt = a.tail_count(theta, &h);
            if !cnt.is_zero() {
                total += c * cnt;
            }
        }
        Ok(total)
    }
}

/// Budget-guarded push of shift `t` from stage `top` down to `base`.
pub fn push_shift(
    schedule: &Schedule,
    base: u64,
    top: u64,
    t: &BigInt,
    node_budget: u64,
) -> Result<ShiftDown> {
    let mut coeffs = BTreeMap::new();
    if t.magnitude() < &schedule.height(top)? {
        coeffs.insert(t.clone(), BigUint::one());
    }
    let mut touched: u64 = 0;
    for k in (base..top).rev() {
        if coeffs.is_empty() {
            break;
        }
        let offsets = schedule.offsets(k)?;
        let offs: Vec<BigInt> = offsets.iter().map(|o| BigInt::from(o.clone())).collect();
        let h = BigInt::from(schedule.height(k)?);
        let mut next: BTreeMap<BigInt, BigUint> = BTreeMap::new();
        for (tau, c) in &coeffs {
            for (i, oi) in offs.iter().enumerate() {
                // o[i2] in (oi + tau - h, oi + tau + h)
                let lo = oi + tau - &h;
                let hi = oi + tau + &h;
                let start = offs.partition_point(|o| *o <= lo);
                for o2 in &offs[start..] {
                    if *o2 >= hi {
                        break;
                    }
                    let tau2 = tau - (o2 - oi);
                    *next.entry(tau2).or_insert_with(BigUint::zero) += c;
                    touched += 1;
                    if touched > node_budget {
                        return Err(Error::SizeBudgetExceeded(format!(
                            "shift transfer through stage {k} exceeded {node_budget} nodes"
                        )));
                    }
                }
                let _ = i;
            }
        }
        coeffs = next;
    }
    Ok(ShiftDown { base_stage: base, top_stage: top, coeffs })
}

/// Budget-guarded push of the tail threshold `theta` (counting levels
/// `>= theta` at stage `top`) down to the base stage.
pub fn push_tail(
    schedule: &Schedule,
    base: u64,
    top: u64,
    theta: &BigInt,
    node_budget: u64,
) -> Result<TailDown> {
    // prod_r[k] = number of stage-k copies of one base level = prod_(base..k) r_u
    let mut full = BigUint::zero();
    let mut coeffs = BTreeMap::new();
    let h_top = BigInt::from(schedule.height(top)?);
    if theta >= &h_top {
        return Ok(TailDown { base_stage: base, top_stage: top, full, coeffs });
    }
    if theta.is_positive() {
        coeffs.insert(theta.clone(), BigUint::one());
    } else {
        let mut prod = BigUint::one();
        for k in base..top {
            prod *= BigUint::from(schedule.cut_count(k)?);
        }
        return Ok(TailDown { base_stage: base, top_stage: top, full: prod, coeffs });
    }
    let mut prods: Vec<BigUint> = Vec::with_capacity((top - base) as usize + 1);
    prods.push(BigUint::one());
    for k in base..top {
        let last = prods.last().unwrap().clone();
        prods.push(last * BigUint::from(schedule.cut_count(k)?));
    }
    let mut touched: u64 = 0;
    for k in (base..top).rev() {
        if coeffs.is_empty() {
            break;
        }
        let offsets = schedule.offsets(k)?;
        let offs: Vec<BigInt> = offsets.iter().map(|o| BigInt::from(o.clone())).collect();
        let h = BigInt::from(schedule.height(k)?);
        let prod_k = &prods[(k - base) as usize];
        let mut next: BTreeMap<BigInt, BigUint> = BTreeMap::new();
        for (theta, c) in &coeffs {
            for oi in &offs {
                let t2 = theta - oi;
                if t2 >= h {
                    continue; // empty tail in this column
                }
                if t2.is_positive() {
                    *next.entry(t2).or_insert_with(BigUint::zero) += c;
                } else {
                    // whole column copy counts
                    full += c * prod_k;
                }
                touched += 1;
                if touched > node_budget {
                    return Err(Error::SizeBudgetExceeded(format!(
                        "tail transfer through stage {k} exceeded {node_budget} nodes"
                    )));
                }
            }
        }
        coeffs = next;
    }
    Ok(TailDown { base_stage: base, top_stage: top, full, coeffs })
}
