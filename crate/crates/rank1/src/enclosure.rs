//! Exact rational intervals.
//!
//! An [`Enclosure`] is a closed interval `[lo, hi]` of arbitrary-precision
//! rationals guaranteed to contain a true (usually measure) value. Because
//! the endpoints are exact rationals, interval arithmetic here is exact:
//! there is no rounding to propagate outward, only the genuine uncertainty
//! of the operands.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    lo: BigRational,
    hi: BigRational,
}

impl Enclosure {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "enclosure endpoints out of order");
        Enclosure { lo, hi }
    }

    pub fn exact(v: BigRational) -> Self {
        Enclosure { lo: v.clone(), hi: v }
    }

    pub fn zero() -> Self {
        Enclosure::exact(BigRational::zero())
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_interval(&self, other: &Enclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Intersection of two enclosures of the same value. `None` means the
    /// enclosures are inconsistent, which indicates a bug somewhere.
    pub fn intersect(&self, other: &Enclosure) -> Option<Enclosure> {
        let lo = if self.lo >= other.lo { self.lo.clone() } else { other.lo.clone() };
        let hi = if self.hi <= other.hi { self.hi.clone() } else { other.hi.clone() };
        if lo <= hi {
            Some(Enclosure { lo, hi })
        } else {
            None
        }
    }

    /// Smallest enclosure containing both.
    pub fn hull(&self, other: &Enclosure) -> Enclosure {
        let lo = if self.lo <= other.lo { self.lo.clone() } else { other.lo.clone() };
        let hi = if self.hi >= other.hi { self.hi.clone() } else { other.hi.clone() };
        Enclosure { lo, hi }
    }

    pub fn add(&self, other: &Enclosure) -> Enclosure {
        Enclosure { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    pub fn sub(&self, other: &Enclosure) -> Enclosure {
        Enclosure { lo: &self.lo - &other.hi, hi: &self.hi - &other.lo }
    }

    pub fn scale(&self, c: &BigRational) -> Enclosure {
        if c.is_negative() {
            Enclosure { lo: &self.hi * c, hi: &self.lo * c }
        } else {
            Enclosure { lo: &self.lo * c, hi: &self.hi * c }
        }
    }

    /// Interval product. General case with sign handling.
    pub fn mul(&self, other: &Enclosure) -> Enclosure {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if *c < lo {
                lo = c.clone();
            }
            if *c > hi {
                hi = c.clone();
            }
        }
        Enclosure { lo, hi }
    }

    /// Interval quotient for a strictly positive divisor.
    ///
    /// `divisor_hi = None` means the divisor is only known to be `>= lo`
    /// (an unbounded-above total measure); the lower endpoint of the
    /// quotient then collapses to zero for non-negative numerators.
    pub fn div_pos(&self, div_lo: &BigRational, div_hi: Option<&BigRational>) -> Enclosure {
        assert!(div_lo.is_positive(), "division by enclosure touching zero");
        let hi = &self.hi / div_lo;
        let lo = match div_hi {
            Some(d) => &self.lo / d,
            None => {
                if self.lo.is_negative() {
                    &self.lo / div_lo
                } else {
                    BigRational::zero()
                }
            }
        };
        Enclosure::new(lo, hi)
    }

    /// Clamp the lower endpoint at zero. Valid when the enclosed value is
    /// known to be non-negative (a measure).
    pub fn max_zero(&self) -> Enclosure {
        if self.lo.is_negative() {
            let hi = if self.hi.is_negative() { BigRational::zero() } else { self.hi.clone() };
            Enclosure { lo: BigRational::zero(), hi }
        } else {
            self.clone()
        }
    }

    /// Enclosure of the absolute value.
    pub fn abs(&self) -> Enclosure {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            Enclosure { lo: -self.hi.clone(), hi: -self.lo.clone() }
        } else {
            let a = -self.lo.clone();
            let hi = if a > self.hi { a } else { self.hi.clone() };
            Enclosure { lo: BigRational::zero(), hi }
        }
    }

    pub fn mid_f64(&self) -> f64 {
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64().unwrap_or(f64::NAN)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

/// Parse an exact rational from decimal ("0.05", "1e-6", "3") or fraction
/// ("1/20") notation.
pub fn parse_rational(s: &str) -> crate::Result<BigRational> {
    let s = s.trim();
    let err = || crate::Error::Config(format!("cannot parse rational '{s}'"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let digits = format!(
        "{}{}",
        if int_part.is_empty() { "0" } else { int_part },
        frac_part
    );
    let num: BigInt = digits.parse().map_err(|_| err())?;
    let shift = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = BigRational::from_integer(num);
    if shift >= 0 {
        value *= BigRational::from_integer(ten.pow(shift as u32));
    } else {
        value /= BigRational::from_integer(ten.pow((-shift) as u32));
    }
    Ok(value)
}

/// `10^-digits` as an exact rational; handy for tolerances.
pub fn pow10_neg(digits: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10u32).pow(digits))
}
