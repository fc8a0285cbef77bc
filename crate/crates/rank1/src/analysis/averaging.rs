//! Deviation of spacer-sum averaging operators from the constant projection.
//!
//! `Q_(j,p) = (r_j - p)^-1 * sum_i T^(-S_j(i,p))` averages the transformation
//! along windowed spacer sums. Its distance to the projection onto constants
//! on an indicator `f` expands into correlation values at the pairwise
//! differences of the sums:
//!
//! ```text
//! ||Q f - Θ f||^2 = sum_d hist(d) γ_f(d) / (r-p)^2  -  (∫f)^2 / mu(X)
//! ```
//!
//! where `hist` counts ordered pairs `(i, i')` with
//! `S(i', p) - S(i, p) = d`. Everything propagates as enclosures.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::enclosure::Enclosure;
use crate::engine::Engine;
use crate::spacer_stats::spacer_sum_distribution;
use crate::tower::LevelSet;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct DeviationReport {
    pub stage: u64,
    pub window: u64,
    /// Enclosure of the normalised squared deviation.
    pub value: Enclosure,
    /// Ordered-pair difference histogram of the windowed sums.
    pub histogram: BTreeMap<BigInt, u64>,
}

/// Cap on distinct correlation lags; the histogram compresses by value, so
/// structured families stay far below this.
const MAX_DISTINCT_LAGS: usize = 1 << 16;

pub fn averaging_deviation(
    engine: &Engine,
    j: u64,
    p: u64,
    f: &LevelSet,
    tol: &BigRational,
) -> Result<DeviationReport> {
    let sums = spacer_sum_distribution(engine.schedule(), j, p)?;
    let total = sums.total;

    // ordered-pair difference histogram from value counts
    let values: Vec<(&BigInt, &u64)> = sums.counts.iter().collect();
    let mut histogram: BTreeMap<BigInt, u64> = BTreeMap::new();
    for (va, ca) in &values {
        for (vb, cb) in &values {
            *histogram.entry(*vb - *va).or_insert(0) += *ca * *cb;
        }
    }
    if histogram.len() > MAX_DISTINCT_LAGS {
        return Err(Error::SizeBudgetExceeded(format!(
            "{} distinct sum differences at stage {j}",
            histogram.len()
        )));
    }

    let tm = engine.total_measure_enclosure(f.stage)?;
    let distinct: Vec<BigInt> = {
        let mut set: Vec<BigInt> = histogram.keys().map(|d| d.abs()).collect();
        set.sort();
        set.dedup();
        set
    };
    use rayon::prelude::*;
    let gammas: Result<Vec<(BigInt, Enclosure)>> = distinct
        .par_iter()
        .map(|d| {
            let raw = engine.shifted_intersection(f, d, f, tol)?;
            Ok((d.clone(), tm.normalize(&raw)))
        })
        .collect();
    let gammas: BTreeMap<BigInt, Enclosure> = gammas?.into_iter().collect();

    let denom = BigRational::from(BigInt::from(total)) * BigRational::from(BigInt::from(total));
    let mut q_norm_sq = Enclosure::zero();
    for (d, count) in &histogram {
        let g = &gammas[&d.abs()];
        let weight = BigRational::from(BigInt::from(*count)) / &denom;
        q_norm_sq = q_norm_sq.add(&g.scale(&weight));
    }
    let nu_f = tm.normalize(&Enclosure::exact(f.measure(engine.schedule())?));
    let value = q_norm_sq.sub(&nu_f.mul(&nu_f)).max_zero();
    Ok(DeviationReport { stage: j, window: p, value, histogram })
}
