//! Windowed spacer sums and their distributions.
//!
//! `S_j(i, p) = s_j(i) + s_j(i+1) + ... + s_j(i+p-1)` drives the averaging
//! operators of the mixing arguments: for the random family the centred sums
//! `S_j(i, p) - p H_j` telescope to `a_j(i) - a_j(i+p)` and are distributed
//! close to the triangular law `(H - |s|) / H^2`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::schedule::Schedule;
use crate::{Error, Result};

/// Histogram of windowed spacer sums at one stage.
#[derive(Clone, Debug)]
pub struct SumHistogram {
    pub stage: u64,
    pub window: u64,
    /// value -> count over window starts `i = 1..=r_j - p`.
    pub counts: BTreeMap<BigInt, u64>,
    pub total: u64,
}

impl SumHistogram {
    /// Counts with every value shifted by `-offset`.
    pub fn centered(&self, offset: &BigInt) -> BTreeMap<BigInt, u64> {
        self.counts.iter().map(|(v, c)| (v - offset, *c)).collect()
    }

    pub fn merge_from(&mut self, other: &SumHistogram) {
        for (v, c) in &other.counts {
            *self.counts.entry(v.clone()).or_insert(0) += c;
        }
        self.total += other.total;
    }
}

/// `S_j(i, p)` with 1-based `i`; requires `i >= 1, p >= 1, i + p - 1 <= r_j`.
pub fn spacer_sum(schedule: &Schedule, j: u64, i: u64, p: u64) -> Result<BigUint> {
    let r = schedule.cut_count(j)?;
    if i == 0 || p == 0 || i + p - 1 > r {
        return Err(Error::WindowOutOfRange { stage: j, i, p, r });
    }
    let spacers = schedule.spacers(j)?;
    let mut sum = BigUint::zero();
    for u in i..i + p {
        sum += &spacers[(u - 1) as usize];
    }
    Ok(sum)
}

/// Histogram of `S_j(i, p)` over all admissible starts `i = 1..=r_j - p`.
pub fn spacer_sum_distribution(schedule: &Schedule, j: u64, p: u64) -> Result<SumHistogram> {
    let r = schedule.cut_count(j)?;
    if p == 0 || p >= r {
        return Err(Error::WindowOutOfRange { stage: j, i: 1, p, r });
    }
    let spacers = schedule.spacers(j)?;
    let mut counts: BTreeMap<BigInt, u64> = BTreeMap::new();
    let mut window: BigInt = spacers[..p as usize].iter().map(|s| BigInt::from(s.clone())).sum();
    *counts.entry(window.clone()).or_insert(0) += 1;
    for i in 1..(r - p) as usize {
        window += BigInt::from(spacers[i + p as usize - 1].clone());
        window -= BigInt::from(spacers[i - 1].clone());
        *counts.entry(window.clone()).or_insert(0) += 1;
    }
    Ok(SumHistogram { stage: j, window: p, counts, total: r - p })
}

/// Exact total-variation distance between the normalised histogram of
/// centred values and the triangular law with weight
/// `(window - |s|) / window^2` on `s = -(window-1) ..= window-1`.
pub fn triangular_total_variation(
    counts: &BTreeMap<BigInt, u64>,
    window: u64,
) -> BigRational {
    let total: u64 = counts.values().sum();
    let total = BigRational::from(BigInt::from(total));
    let h = BigInt::from(window);
    let h_sq = BigRational::from(&h * &h);
    let mut l1 = BigRational::zero();
    // union of supports: the law lives on |s| < window
    let mut seen = BTreeMap::new();
    for (v, c) in counts {
        seen.insert(v.clone(), *c);
    }
    let mut s: BigInt = -(&h) + 1;
    while s < h {
        seen.entry(s.clone()).or_insert(0);
        s += 1;
    }
    for (v, c) in seen {
        let emp = BigRational::from(BigInt::from(c)) / &total;
        let law = if v.abs() < h {
            BigRational::from(&h - v.abs()) / &h_sq
        } else {
            BigRational::zero()
        };
        l1 += (emp - law).abs();
    }
    l1 / BigRational::from(BigInt::from(2))
}
