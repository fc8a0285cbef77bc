//! Decimal-string serialisation and file output.
//!
//! Big integers and rationals are exported as decimal strings with an
//! explicit precision; enclosure endpoints are rounded *outward* (lower
//! bound down, upper bound up) so a printed enclosure still contains the
//! true value. Output files are written atomically (temp file + rename).

use std::io::Write;
use std::path::Path;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::enclosure::Enclosure;
use crate::engine::CorrelationSeries;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
    Nearest,
}

/// Decimal expansion with `digits` fractional digits and explicit rounding.
pub fn decimal(r: &BigRational, digits: u32, rounding: Rounding) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = r * BigRational::from_integer(scale.clone());
    let (num, den) = (scaled.numer().clone(), scaled.denom().clone());
    let (q, rem) = num.div_rem(&den);
    // div_rem truncates toward zero; adjust per rounding mode
    let mut q = q;
    if !rem.is_zero() {
        let bump = match rounding {
            Rounding::Down => rem.is_negative(),
            Rounding::Up => rem.is_positive(),
            // half away from zero
            Rounding::Nearest => BigInt::from(2) * rem.abs() >= den,
        };
        if bump {
            q += if rem.is_positive() { 1 } else { -1 };
        }
    }
    let negative = q.is_negative();
    let q = q.abs().to_biguint().unwrap();
    let s = q.to_string();
    let digits = digits as usize;
    let (int_part, frac_part) = if s.len() > digits {
        (s[..s.len() - digits].to_string(), s[s.len() - digits..].to_string())
    } else {
        ("0".to_string(), format!("{:0>width$}", s, width = digits))
    };
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// `(lo, hi)` decimal strings rounded outward.
pub fn enclosure_strings(e: &Enclosure, digits: u32) -> (String, String) {
    (decimal(e.lo(), digits, Rounding::Down), decimal(e.hi(), digits, Rounding::Up))
}

pub fn rational_json(r: &BigRational) -> serde_json::Value {
    serde_json::json!({ "num": r.numer().to_string(), "den": r.denom().to_string() })
}

pub fn enclosure_json(e: &Enclosure, digits: u32) -> serde_json::Value {
    let (lo, hi) = enclosure_strings(e, digits);
    serde_json::json!({
        "lo": lo,
        "hi": hi,
        "exact": e.is_exact(),
        "lo_rational": rational_json(e.lo()),
        "hi_rational": rational_json(e.hi()),
    })
}

pub fn biguint_str(u: &BigUint) -> serde_json::Value {
    serde_json::Value::String(u.to_string())
}

/// `lag,lo,hi` rows with outward-rounded decimal strings.
pub fn series_csv(series: &CorrelationSeries, digits: u32) -> String {
    let mut out = String::from("lag,lo,hi\n");
    for (lag, e) in &series.points {
        let (lo, hi) = enclosure_strings(e, digits);
        out.push_str(&format!("{lag},{lo},{hi}\n"));
    }
    out
}

pub fn series_json(series: &CorrelationSeries, digits: u32) -> serde_json::Value {
    serde_json::json!({
        "mode": format!("{:?}", series.mode).to_lowercase(),
        "a_stage": series.a.stage,
        "b_stage": series.b.stage,
        "points": series
            .points
            .iter()
            .map(|(lag, e)| {
                serde_json::json!({ "lag": lag.to_string(), "value": enclosure_json(e, digits) })
            })
            .collect::<Vec<_>>(),
    })
}

/// Write via a temp file in the same directory, then rename.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.tmp-{}",
        path.file_name().map(|s| s.to_string_lossy()).unwrap_or_default(),
        std::process::id()
    ));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}
