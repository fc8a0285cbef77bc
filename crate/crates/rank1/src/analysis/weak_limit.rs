//! Fitting weak limits of powers by non-negative least squares.
//!
//! For a power sequence `n_j`, the bilinear forms `<T^(n_j) 1_A, 1_B>` over
//! a family of test sets are fitted against the forms of small powers
//! `T^k`, `k` in a window, plus the projection onto constants. Coefficients
//! are constrained to the sub-Markov simplex `a_k >= 0, sum a_k <= 1`; the
//! residual says how well the observed limit is explained by a polynomial
//! in the operator.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::enclosure::Enclosure;
use crate::engine::Engine;
use crate::tower::{Finiteness, LevelSet};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct LimitFit {
    /// Operator powers whose bilinear forms were fitted.
    pub powers: Vec<BigInt>,
    /// Inclusive window of basis powers `T^k`.
    pub window: (i64, i64),
    /// `a_k` for `k = window.0 ..= window.1`.
    pub coefficients: Vec<f64>,
    /// Mass assigned to the projection onto constants (zero when the total
    /// measure is infinite or undeclared).
    pub theta: f64,
    /// Worst-case absolute mismatch over all test pairs and powers.
    pub residual: f64,
    /// Euclidean residual over all rows; non-increasing under window growth.
    pub residual_l2: f64,
    pub test_stage: u64,
    pub pairs: usize,
}

/// Fit the weak limit of `T^(powers)` on all level-indicator pairs of
/// `test_stage`.
pub fn weak_limit_fit(
    engine: &Engine,
    powers: &[BigInt],
    window: (i64, i64),
    test_stage: u64,
    tol: &BigRational,
) -> Result<LimitFit> {
    if powers.is_empty() {
        return Err(Error::Config("empty power list".into()));
    }
    if window.0 > window.1 {
        return Err(Error::Config("basis window is empty".into()));
    }
    let sched = engine.schedule();
    let h = sched.height(test_stage)?;
    let h: u64 = (&h)
        .try_into()
        .map_err(|_| Error::SizeBudgetExceeded(format!("test stage {test_stage} too tall")))?;
    if h < 2 {
        return Err(Error::IllConditioned(format!(
            "test stage {test_stage} has {h} level(s); need at least 2"
        )));
    }

    let tm = engine.total_measure_enclosure(test_stage)?;
    let finite = tm.finiteness == Finiteness::Finite && tm.upper.is_some();
    let norm = |e: &Enclosure| if finite { tm.normalize(e) } else { e.clone() };

    let sets: Vec<LevelSet> = (0..h).map(|l| LevelSet::singleton(test_stage, l)).collect();
    let pairs: Vec<(usize, usize)> =
        (0..h as usize).flat_map(|a| (0..h as usize).map(move |b| (a, b))).collect();

    // <T^n 1_A, 1_B> = mu(T^(-n) A ∩ B)
    let bilinear = |n: &BigInt, a: &LevelSet, b: &LevelSet| -> Result<f64> {
        let e = engine.shifted_intersection(a, &-n.clone(), b, tol)?;
        Ok(norm(&e).mid_f64())
    };

    use rayon::prelude::*;
    let basis: Vec<BigInt> = (window.0..=window.1).map(BigInt::from).collect();
    // rows: one per (pair, power); columns: basis powers, then theta
    let rows: Result<Vec<(Vec<f64>, Vec<f64>)>> = pairs
        .par_iter()
        .map(|&(ai, bi)| {
            let a = &sets[ai];
            let b = &sets[bi];
            let mut x = Vec::with_capacity(basis.len() + 1);
            for k in &basis {
                x.push(bilinear(k, a, b)?);
            }
            if finite {
                let pa = norm(&Enclosure::exact(a.measure(sched)?)).mid_f64();
                let pb = norm(&Enclosure::exact(b.measure(sched)?)).mid_f64();
                x.push(pa * pb);
            }
            let mut ys = Vec::with_capacity(powers.len());
            for n in powers {
                ys.push(bilinear(n, a, b)?);
            }
            Ok((x, ys))
        })
        .collect();
    let rows = rows?;

    let ncols = basis.len() + usize::from(finite);
    let mut design = Vec::new();
    let mut target = Vec::new();
    for (x, ys) in &rows {
        for y in ys {
            design.push(x.clone());
            target.push(*y);
        }
    }

    let mut coef = nnls(&design, &target, ncols);
    let total: f64 = coef.iter().sum();
    if total > 1.0 {
        project_to_simplex(&mut coef);
    }

    let mut worst: f64 = 0.0;
    let mut sq = 0.0;
    for (row, y) in design.iter().zip(&target) {
        let fit: f64 = row.iter().zip(&coef).map(|(x, c)| x * c).sum();
        let d = (fit - y).abs();
        worst = worst.max(d);
        sq += d * d;
    }

    let theta = if finite { coef[ncols - 1] } else { 0.0 };
    let coefficients = coef[..basis.len()].to_vec();
    Ok(LimitFit {
        powers: powers.to_vec(),
        window,
        coefficients,
        theta,
        residual: worst,
        residual_l2: sq.sqrt(),
        test_stage,
        pairs: pairs.len(),
    })
}

/// Lawson-Hanson style NNLS on dense rows: minimise `||G c - y||_2` with
/// `c >= 0`. Problem sizes here are tiny (a dozen columns).
pub fn nnls(rows: &[Vec<f64>], y: &[f64], ncols: usize) -> Vec<f64> {
    let mut passive = vec![false; ncols];
    let mut c = vec![0.0; ncols];
    let eps = 1e-12;
    for _ in 0..3 * ncols + 10 {
        // gradient of 1/2 ||Gc - y||^2 is G^T (Gc - y)
        let mut w = vec![0.0; ncols];
        for (row, yi) in rows.iter().zip(y) {
            let fit: f64 = row.iter().zip(&c).map(|(x, v)| x * v).sum();
            let r = yi - fit;
            for (j, x) in row.iter().enumerate() {
                w[j] += x * r;
            }
        }
        let mut best = None;
        for j in 0..ncols {
            if !passive[j] && w[j] > eps {
                best = match best {
                    Some((_, bw)) if bw >= w[j] => best,
                    _ => Some((j, w[j])),
                };
            }
        }
        let Some((enter, _)) = best else { break };
        passive[enter] = true;

        loop {
            let z = solve_ls_subset(rows, y, &passive, ncols);
            // step back if any passive coefficient went non-positive
            let mut alpha = 1.0f64;
            let mut blocked = false;
            for j in 0..ncols {
                if passive[j] && z[j] <= 0.0 {
                    let denom = c[j] - z[j];
                    if denom > 0.0 {
                        alpha = alpha.min(c[j] / denom);
                    }
                    blocked = true;
                }
            }
            if !blocked {
                c = z;
                break;
            }
            for j in 0..ncols {
                if passive[j] {
                    c[j] += alpha * (z[j] - c[j]);
                    if c[j] <= eps {
                        c[j] = 0.0;
                        passive[j] = false;
                    }
                }
            }
            if !passive.iter().any(|&p| p) {
                break;
            }
        }
    }
    c
}

/// Unconstrained least squares restricted to the passive columns, via
/// normal equations and Gaussian elimination with partial pivoting.
fn solve_ls_subset(rows: &[Vec<f64>], y: &[f64], passive: &[bool], ncols: usize) -> Vec<f64> {
    let idx: Vec<usize> = (0..ncols).filter(|&j| passive[j]).collect();
    let k = idx.len();
    if k == 0 {
        return vec![0.0; ncols];
    }
    let mut ata = vec![vec![0.0f64; k]; k];
    let mut aty = vec![0.0f64; k];
    for (row, yi) in rows.iter().zip(y) {
        for (a, &ja) in idx.iter().enumerate() {
            let xa = row[ja];
            if xa == 0.0 {
                continue;
            }
            aty[a] += xa * yi;
            for (b, &jb) in idx.iter().enumerate() {
                ata[a][b] += xa * row[jb];
            }
        }
    }
    // ridge whisper keeps near-collinear test families solvable
    for a in 0..k {
        ata[a][a] += 1e-12;
    }
    for col in 0..k {
        let piv = (col..k).max_by(|&i, &j| ata[i][col].abs().total_cmp(&ata[j][col].abs())).unwrap();
        ata.swap(col, piv);
        aty.swap(col, piv);
        let d = ata[col][col];
        if d.abs() < 1e-300 {
            continue;
        }
        for i in col + 1..k {
            let f = ata[i][col] / d;
            if f == 0.0 {
                continue;
            }
            for j in col..k {
                ata[i][j] -= f * ata[col][j];
            }
            aty[i] -= f * aty[col];
        }
    }
    let mut z = vec![0.0f64; k];
    for i in (0..k).rev() {
        let mut s = aty[i];
        for j in i + 1..k {
            s -= ata[i][j] * z[j];
        }
        z[i] = if ata[i][i].abs() < 1e-300 { 0.0 } else { s / ata[i][i] };
    }
    let mut out = vec![0.0; ncols];
    for (a, &j) in idx.iter().enumerate() {
        out[j] = z[a];
    }
    out
}

/// Euclidean projection onto the probability simplex `{c >= 0, sum c = 1}`.
pub fn project_to_simplex(c: &mut [f64]) {
    let mut sorted: Vec<f64> = c.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut acc = 0.0;
    let mut theta = 0.0;
    for (i, v) in sorted.iter().enumerate() {
        acc += v;
        let t = (acc - 1.0) / (i as f64 + 1.0);
        if v - t > 0.0 {
            theta = t;
        }
    }
    for v in c.iter_mut() {
        *v = (*v - theta).max(0.0);
    }
}
