//! Shifted intersection measures and correlation series.
//!
//! Computes `mu(T^n A ∩ B)` enclosures for the classical Chacon
//! construction, shows the exact self-correlation at the tower height, and
//! writes a CSV series.
//!
//! ```text
//! cargo run --release --example correlations
//! ```

use num_bigint::BigInt;

use rank1::enclosure::pow10_neg;
use rank1::engine::{Engine, Normalization};
use rank1::export::series_csv;
use rank1::{FamilySpec, LevelSet, Schedule};

fn main() -> rank1::Result<()> {
    let schedule = Schedule::new(FamilySpec::ChaconClassical)?;
    let engine = Engine::new(schedule.clone());
    let tol = pow10_neg(9);

    // the stage-2 base against itself at lag h_2 = 3: exactly 1/4
    let e2 = LevelSet::base(2);
    let enc = engine.shifted_intersection(&e2, &BigInt::from(3), &e2, &tol)?;
    println!("mu(T^3 E_2 ∩ E_2) = {enc} (exact: {})", enc.is_exact());

    // a deep lag: h_40 has a few dozen bits; the transfer engine doesn't care
    let deep = BigInt::from(schedule.height(40)?);
    let enc = engine.shifted_intersection(&e2, &deep, &e2, &tol)?;
    println!("mu(T^(h_40) E_2 ∩ E_2) in {enc}");

    // correlation series of a stage-3 set, raw and centered
    let a = LevelSet::from_u64s(3, vec![0, 2, 4]);
    let lags: Vec<BigInt> = (0..32).map(BigInt::from).collect();
    let series = engine.correlation_series(&a, &a, &lags, &tol, Normalization::Raw)?;
    println!("\nraw self-correlation of levels {{0,2,4}}@3, lags 0..32:");
    print!("{}", series_csv(&series, 6));

    let centered = engine.correlation_series(&a, &a, &lags, &tol, Normalization::Centered)?;
    let peak = centered
        .points
        .iter()
        .skip(1)
        .max_by(|x, y| x.1.mid_f64().total_cmp(&y.1.mid_f64()))
        .unwrap();
    println!("\nlargest centered value at lag {} ({:.6})", peak.0, peak.1.mid_f64());
    Ok(())
}
