//! Window-sum level statistics on random binary words.
//!
//! For `f : Z_r -> {0,1}` and a window length `m`, `P(f, m, s)` counts the
//! cyclic windows of length `m` with sum exactly `s`, and
//!
//! ```text
//! D(f, m) = sum_(s=1..m) |P(f, m, s) - P(f, m, s-1)|
//! ```
//!
//! measures how ragged the level-count profile is. The Monte Carlo here
//! samples seeded uniform words and reports the fraction for which
//! `D(f, m) < eps * r` holds simultaneously for all `L < m < r - L`.
//! Everything is exact integer arithmetic; the comparison uses the rational
//! `eps` cross-multiplied.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{Error, Result};

/// Exact `D(f, m)` for one window length, cyclic indices.
pub fn statistical_d(f: &[bool], m: usize) -> Result<u64> {
    let r = f.len();
    if m == 0 || m >= r {
        return Err(Error::InvalidParam(format!("window {m} out of range for r = {r}")));
    }
    let mut hist = vec![0u64; m + 1];
    // W(i) = f(i+1) + ... + f(i+m), cyclic
    let mut w: usize = (1..=m).map(|k| f[k % r] as usize).sum();
    hist[w] += 1;
    for i in 1..r {
        w += f[(i + m) % r] as usize;
        w -= f[i % r] as usize;
        hist[w] += 1;
    }
    let mut d = 0u64;
    for s in 1..=m {
        d += hist[s].abs_diff(hist[s - 1]);
    }
    Ok(d)
}

#[derive(Clone, Debug, Serialize)]
pub struct StatLemmaSample {
    pub r: usize,
    pub l: usize,
    pub eps_num: u64,
    pub eps_den: u64,
    pub trials: u32,
    pub seed: u64,
    /// Trials with `D(f, m) < eps r` for every `L < m < r - L`.
    pub satisfied: u32,
    pub fraction: f64,
    /// Largest `D(f, m)` seen across all trials and windows checked.
    pub max_d: u64,
    /// A witness `(m, D)` from the first failing trial, if any.
    pub first_violation: Option<(usize, u64)>,
}

/// Seeded Monte Carlo over uniform `f`; deterministic for a given seed (the
/// per-trial stream is derived from `(seed, trial)`, so thread scheduling
/// cannot affect results).
pub fn stat_lemma_mc(
    r: usize,
    l: usize,
    eps_num: u64,
    eps_den: u64,
    trials: u32,
    seed: u64,
) -> Result<StatLemmaSample> {
    if r < 4 || 2 * l + 2 >= r {
        return Err(Error::InvalidParam(format!("need 2L + 2 < r; got r = {r}, L = {l}")));
    }
    if eps_den == 0 {
        return Err(Error::InvalidParam("eps denominator is zero".into()));
    }
    use rayon::prelude::*;
    let results: Vec<(bool, u64, Option<(usize, u64)>)> = (0..trials)
        .into_par_iter()
        .map(|trial| run_trial(r, l, eps_num, eps_den, seed, trial))
        .collect();
    let satisfied = results.iter().filter(|(ok, _, _)| *ok).count() as u32;
    let max_d = results.iter().map(|(_, d, _)| *d).max().unwrap_or(0);
    let first_violation = results.iter().find_map(|(_, _, v)| *v);
    Ok(StatLemmaSample {
        r,
        l,
        eps_num,
        eps_den,
        trials,
        seed,
        satisfied,
        fraction: satisfied as f64 / trials.max(1) as f64,
        max_d,
        first_violation,
    })
}

fn run_trial(
    r: usize,
    l: usize,
    eps_num: u64,
    eps_den: u64,
    seed: u64,
    trial: u32,
) -> (bool, u64, Option<(usize, u64)>) {
    let f = random_word(r, seed, trial);
    // D < eps r  <=>  D * den < num * r  (exact in u128)
    let bound = eps_num as u128 * r as u128;
    let mut w: Vec<u32> = vec![0; r];
    let m0 = l + 1;
    for i in 0..r {
        let mut acc = 0u32;
        for k in 1..=m0 {
            acc += f[(i + k) % r] as u32;
        }
        w[i] = acc;
    }
    let mut hist = vec![0u32; r + 2];
    let mut max_d = 0u64;
    let mut m = m0;
    loop {
        // histogram of the current window sums
        let mut wmin = u32::MAX;
        let mut wmax = 0u32;
        for &x in &w {
            hist[x as usize] += 1;
            wmin = wmin.min(x);
            wmax = wmax.max(x);
        }
        // D sums transitions (s-1, s) for s = 1..=m only
        let mut d = 0u64;
        let lo = wmin.saturating_sub(1) as usize;
        let hi = (wmax as usize).min(m - 1);
        for t in lo..=hi {
            d += u64::from(hist[t + 1].abs_diff(hist[t]));
        }
        for x in &w {
            hist[*x as usize] = 0;
        }
        max_d = max_d.max(d);
        if d as u128 * eps_den as u128 >= bound {
            return (false, max_d, Some((m, d)));
        }
        m += 1;
        if m >= r - l {
            return (true, max_d, None);
        }
        for (i, x) in w.iter_mut().enumerate() {
            *x += f[(i + m) % r] as u32;
        }
    }
}

fn random_word(r: usize, seed: u64, trial: u32) -> Vec<bool> {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..12].copy_from_slice(&trial.to_le_bytes());
    key[16..24].copy_from_slice(b"statword");
    let mut rng = ChaCha8Rng::from_seed(key);
    let mut out = Vec::with_capacity(r);
    let mut buf = 0u64;
    let mut bits = 0;
    for _ in 0..r {
        if bits == 0 {
            buf = rng.next_u64();
            bits = 64;
        }
        out.push(buf & 1 == 1);
        buf >>= 1;
        bits -= 1;
    }
    out
}
