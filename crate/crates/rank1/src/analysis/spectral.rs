//! Wiener averages and Fejér spectral densities from correlation series.

use num_bigint::BigInt;

use crate::engine::{CorrelationSeries, Normalization};
use crate::{Error, Result};

fn centered_values(series: &CorrelationSeries, n: usize) -> Result<Vec<f64>> {
    if series.mode != Normalization::Centered {
        return Err(Error::InvalidParam(
            "spectral summaries need a centered-normalized series".into(),
        ));
    }
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let lag = BigInt::from(k);
        match series.value_at(&lag) {
            Some(e) => out.push(e.mid_f64()),
            None => return Err(Error::MissingLags(format!("lag {k} missing (need 0..{n})"))),
        }
    }
    Ok(out)
}

/// `(1/N) sum_(n<N) |γ(n)|^2`; tends to zero along weak mixing, stays
/// bounded away from zero for discrete spectrum.
pub fn wiener_average(series: &CorrelationSeries, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParam("wiener average needs N >= 1".into()));
    }
    let g = centered_values(series, n)?;
    Ok(g.iter().map(|v| v * v).sum::<f64>() / n as f64)
}

/// Fejér sum `sum_(|k|<N) (1 - |k|/N) γ(k) e^(ikθ)` on a uniform grid of
/// angles over `[0, 2π)`; real by symmetry, non-negative up to the width of
/// the input enclosures.
pub fn spectral_density(
    series: &CorrelationSeries,
    n: usize,
    grid: usize,
) -> Result<Vec<(f64, f64)>> {
    if n == 0 || grid == 0 {
        return Err(Error::InvalidParam("density needs N >= 1 and a non-empty grid".into()));
    }
    let g = centered_values(series, n)?;
    let mut out = Vec::with_capacity(grid);
    for t in 0..grid {
        let theta = 2.0 * std::f64::consts::PI * t as f64 / grid as f64;
        let mut v = g[0];
        for (k, gk) in g.iter().enumerate().skip(1) {
            let w = 1.0 - k as f64 / n as f64;
            v += 2.0 * w * gk * (k as f64 * theta).cos();
        }
        out.push((theta, v));
    }
    Ok(out)
}
