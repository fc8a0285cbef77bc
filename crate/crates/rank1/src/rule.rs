//! Deterministic stage rules.
//!
//! Families are parameterised by small total functions of the stage index
//! (`r_j`, `s_j`, `H_j`, degree rules, ...). Rules are plain data so that
//! schedules round-trip through config files and hash deterministically.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// An integer-valued rule `j -> value`, evaluated at stage indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum IntRule {
    /// Constant value.
    Const { value: u64 },
    /// `slope * j + intercept`.
    Linear { slope: u64, intercept: u64 },
    /// `floor(log2(j + offset))`.
    Log2 { offset: u64 },
    /// `floor(sqrt(j))`.
    Sqrt,
    /// `2^j` (stage indices above 62 are rejected).
    Pow2,
    /// The `(j + offset - 1)`-th prime, 1-based: with offset 1 the values at
    /// j = 1, 2, 3 are 2, 3, 5.
    NthPrime { offset: u64 },
}

impl IntRule {
    pub fn eval(&self, j: u64) -> Result<u64> {
        match self {
            IntRule::Const { value } => Ok(*value),
            IntRule::Linear { slope, intercept } => slope
                .checked_mul(j)
                .and_then(|v| v.checked_add(*intercept))
                .ok_or_else(|| Error::InvalidParam(format!("linear rule overflow at stage {j}"))),
            IntRule::Log2 { offset } => {
                let v = j
                    .checked_add(*offset)
                    .ok_or_else(|| Error::InvalidParam("log2 rule overflow".into()))?;
                if v == 0 {
                    return Err(Error::InvalidParam("log2 of zero".into()));
                }
                Ok(63 - v.leading_zeros() as u64)
            }
            IntRule::Sqrt => Ok(isqrt(j)),
            IntRule::Pow2 => {
                if j > 62 {
                    Err(Error::InvalidParam(format!("2^{j} exceeds the u64 rule range")))
                } else {
                    Ok(1u64 << j)
                }
            }
            IntRule::NthPrime { offset } => {
                let idx = j
                    .checked_add(*offset)
                    .and_then(|v| v.checked_sub(2))
                    .ok_or_else(|| Error::InvalidParam("prime rule index underflow".into()))?;
                nth_prime(idx)
            }
        }
    }

    /// A declared cap `g` (as a rational `num/den`) with `value(j+1) <= g * value(j)`
    /// for all `j >= from_stage`, when one is known for this rule. Used for
    /// rigorous spacer-mass tail bounds.
    pub fn growth_cap(&self) -> Option<(u64, u64, u64)> {
        match self {
            IntRule::Const { .. } => Some((1, 1, 1)),
            // (j+1)/j <= 2 for j >= 1, and the intercept only helps.
            IntRule::Linear { .. } => Some((2, 1, 1)),
            IntRule::Log2 { .. } => Some((2, 1, 1)),
            IntRule::Sqrt => Some((2, 1, 1)),
            IntRule::Pow2 => Some((2, 1, 1)),
            // Bertrand: p(k+1) < 2 p(k).
            IntRule::NthPrime { .. } => Some((2, 1, 1)),
        }
    }
}

/// Block-length rule `r -> N(r)` for the slow-growth construction: the cut
/// count takes the value `r` for `N(r)` consecutive stages.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum BlockRule {
    /// `N(r) = slope * r + intercept` — the desk-scale default is `4r`.
    Linear { slope: u64, intercept: u64 },
    /// `N(r) = 2^(factor * r)`. With factor 4 this is the faithful rate,
    /// reachable only for height computations.
    PowTwo { factor: u32 },
}

impl BlockRule {
    pub fn eval(&self, r: u64) -> Result<u64> {
        match self {
            BlockRule::Linear { slope, intercept } => slope
                .checked_mul(r)
                .and_then(|v| v.checked_add(*intercept))
                .ok_or_else(|| Error::InvalidParam("block rule overflow".into())),
            BlockRule::PowTwo { factor } => {
                let e = (*factor as u64).checked_mul(r).filter(|e| *e <= 62);
                match e {
                    Some(e) => Ok(1u64 << e),
                    None => Err(Error::InvalidParam(format!(
                        "block length 2^({factor}*{r}) exceeds the u64 stage range"
                    ))),
                }
            }
        }
    }
}

pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).map_or(true, |v| v > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).map_or(false, |v| v <= n) {
        x += 1;
    }
    x
}

/// Deterministic Miller-Rabin, exact for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// 0-based: `nth_prime(0) = 2`.
pub fn nth_prime(idx: u64) -> Result<u64> {
    if idx > 2_000_000 {
        return Err(Error::InvalidParam(format!("prime index {idx} too large")));
    }
    let mut count = 0u64;
    let mut n = 1u64;
    loop {
        n += 1;
        if is_prime(n) {
            if count == idx {
                return Ok(n);
            }
            count += 1;
        }
    }
}

/// All primes below `limit` (simple sieve).
pub fn primes_below(limit: u64) -> Vec<u64> {
    if limit < 3 {
        return vec![];
    }
    let n = limit as usize;
    let mut sieve = vec![true; n];
    sieve[0] = false;
    sieve[1] = false;
    let mut p = 2usize;
    while p * p < n {
        if sieve[p] {
            let mut q = p * p;
            while q < n {
                sieve[q] = false;
                q += p;
            }
        }
        p += 1;
    }
    sieve.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert!(is_prime(2) && is_prime(3) && is_prime(9973));
        assert!(!is_prime(1) && !is_prime(9) && !is_prime(2u64.pow(31) + 1));
        assert!(is_prime(2u64.pow(31) - 1));
        assert_eq!(nth_prime(0).unwrap(), 2);
        assert_eq!(nth_prime(4).unwrap(), 11);
        assert_eq!(primes_below(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }

    #[test]
    fn rules() {
        assert_eq!(IntRule::Log2 { offset: 8 }.eval(8).unwrap(), 4);
        assert_eq!(IntRule::Sqrt.eval(15).unwrap(), 3);
        assert_eq!(IntRule::NthPrime { offset: 1 }.eval(3).unwrap(), 5);
        assert_eq!(IntRule::Pow2.eval(10).unwrap(), 1024);
        assert_eq!(BlockRule::Linear { slope: 4, intercept: 0 }.eval(3).unwrap(), 12);
        assert_eq!(BlockRule::PowTwo { factor: 4 }.eval(2).unwrap(), 256);
    }

    #[test]
    fn isqrt_edges() {
        for n in 0..1000u64 {
            let s = isqrt(n);
            assert!(s * s <= n && (s + 1) * (s + 1) > n);
        }
    }
}
