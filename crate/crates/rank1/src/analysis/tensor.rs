//! Closeness of sampled tensor powers to Cesàro averages.
//!
//! On the product space, `<T^a (f⊗f), T^b (f⊗f)> = γ(a-b)^2` with `γ` the
//! normalised scalar correlation of `f`. That reduces
//!
//! ```text
//! || P F - Q_r F ||^2,   P = (1/M) sum_m T^p(m),   Q_r = (1/r) sum_(i<r) T^i
//! ```
//!
//! to finite sums of squared correlation values at the pairwise power
//! differences, all computable through the engine. The reported bound is
//!
//! ```text
//! rhs = ||F||^2 / M + eps_hat,
//! eps_hat = (1 - 1/M) max|delta| + 2 max|eta|
//! ```
//!
//! where `delta` and `eta` are the deviations of the two cross-term families
//! `<T^p F, T^q F>` and `<T^p F, Q F>` from `<Q F, Q F>`; aggregated with
//! exactly the coefficients with which they enter the expansion, so
//! `lhs <= rhs` whenever the engine values are right, and `eps_hat` is the
//! honest size of the cross-term error.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

use crate::engine::Engine;
use crate::schedule::Schedule;
use crate::tower::LevelSet;
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct TensorCloseness {
    pub r: u64,
    pub m_count: u64,
    /// `|| P F - Q_r F ||^2`.
    pub lhs: f64,
    /// `||F||^2 / M + eps_hat`.
    pub rhs: f64,
    pub norm_f_sq: f64,
    pub eps_hat: f64,
    /// `max |<T^p F, T^q F> - <QF, QF>|` over distinct sampled powers.
    pub max_pair_dev: f64,
    /// `max |<T^p F, Q F> - <QF, QF>|`.
    pub max_avg_dev: f64,
    pub qq: f64,
}

/// Power list `h_(j_r + step*m)` for `m = 1..=m_count`, where `j_r` is the
/// first stage with cut count `r` (the start of the slow-growth block).
pub fn slow_growth_powers(
    schedule: &Schedule,
    r: u64,
    m_count: u64,
    step: u64,
) -> Result<Vec<BigInt>> {
    let jr = schedule
        .first_stage_with_cut(r, 100_000)?
        .ok_or_else(|| Error::ScaleExceeded(format!("no stage with cut count {r} in reach")))?;
    (1..=m_count)
        .map(|m| Ok(BigInt::from(schedule.height(jr + step * m)?)))
        .collect()
}

pub fn tensor_closeness(
    engine: &Engine,
    f: &LevelSet,
    r: u64,
    powers: &[BigInt],
    tol: &BigRational,
) -> Result<TensorCloseness> {
    if powers.is_empty() || r < 1 {
        return Err(Error::Config("tensor closeness needs powers and r >= 1".into()));
    }
    let m_count = powers.len() as u64;
    let tm = engine.total_measure_enclosure(f.stage)?;

    let mut cache: BTreeMap<BigInt, f64> = BTreeMap::new();
    let mut lags: Vec<BigInt> = Vec::new();
    {
        let mut want = |d: BigInt| {
            let d = d.abs();
            if !lags.contains(&d) {
                lags.push(d);
            }
        };
        for a in powers {
            for b in powers {
                want(a - b);
            }
            for i in 0..r {
                want(a - BigInt::from(i));
            }
        }
        for i in 0..r {
            for i2 in 0..r {
                want(BigInt::from(i) - BigInt::from(i2));
            }
        }
    }
    use rayon::prelude::*;
    let computed: Result<Vec<(BigInt, f64)>> = lags
        .par_iter()
        .map(|d| {
            let raw = engine.shifted_intersection(f, d, f, tol).map_err(|e| match e {
                Error::SizeBudgetExceeded(m) | Error::ScaleExceeded(m) => Error::ScaleExceeded(m),
                Error::StageBudgetExceeded { partial } => Error::ScaleExceeded(format!(
                    "correlation at lag {d} stuck at width {}",
                    partial.width()
                )),
                other => other,
            })?;
            Ok((d.clone(), tm.normalize(&raw).mid_f64()))
        })
        .collect();
    for (d, v) in computed? {
        cache.insert(d, v);
    }
    let g = |d: BigInt| -> f64 { cache[&d.abs()] };

    let m_f = m_count as f64;
    let r_f = r as f64;
    let mut pp = 0.0;
    for a in powers {
        for b in powers {
            pp += g(a - b).powi(2);
        }
    }
    pp /= m_f * m_f;
    let mut qq = 0.0;
    for i in 0..r {
        for i2 in 0..r {
            qq += g(BigInt::from(i) - BigInt::from(i2)).powi(2);
        }
    }
    qq /= r_f * r_f;
    let avg_with_q = |p: &BigInt| -> f64 {
        (0..r).map(|i| g(p - BigInt::from(i)).powi(2)).sum::<f64>() / r_f
    };
    let mut pq = 0.0;
    for p in powers {
        pq += avg_with_q(p);
    }
    pq /= m_f;

    let lhs = pp - 2.0 * pq + qq;
    let norm_f_sq = g(BigInt::from(0)).powi(2);

    let mut max_pair_dev: f64 = 0.0;
    let mut max_avg_dev: f64 = 0.0;
    for (ai, a) in powers.iter().enumerate() {
        max_avg_dev = max_avg_dev.max((avg_with_q(a) - qq).abs());
        for (bi, b) in powers.iter().enumerate() {
            if ai != bi {
                max_pair_dev = max_pair_dev.max((g(a - b).powi(2) - qq).abs());
            }
        }
    }
    let eps_hat = (1.0 - 1.0 / m_f) * max_pair_dev + 2.0 * max_avg_dev;
    Ok(TensorCloseness {
        r,
        m_count,
        lhs,
        rhs: norm_f_sq / m_f + eps_hat,
        norm_f_sq,
        eps_hat,
        max_pair_dev,
        max_avg_dev,
        qq,
    })
}
