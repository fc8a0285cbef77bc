//! Wiener averages and Fejér spectral densities from centered correlation
//! series: weak mixing pushes the average down; discrete spectrum keeps it
//! up and concentrates the density.
//!
//! ```text
//! cargo run --release --example spectral_density > density.csv
//! ```

use num_bigint::BigInt;

use rank1::analysis::{spectral_density, wiener_average};
use rank1::enclosure::pow10_neg;
use rank1::engine::{Engine, Normalization};
use rank1::family::preset;
use rank1::{FamilySpec, LevelSet, Schedule};

fn main() -> rank1::Result<()> {
    let tol = pow10_neg(8);
    let n = 48usize;
    let lags: Vec<BigInt> = (0..n).map(BigInt::from).collect();

    let chacon = Schedule::new(FamilySpec::ChaconClassical)?;
    let engine = Engine::new(chacon.clone());
    let a = LevelSet::from_u64s(3, vec![0, 2, 4]);
    let chacon_series =
        engine.correlation_series(&a, &a, &lags, &tol, Normalization::Centered)?;

    let odo = Schedule::new(preset("odometer")?)?;
    let engine = Engine::new(odo.clone());
    let b = LevelSet::from_u64s(3, vec![0, 1]);
    let odo_series = engine.correlation_series(&b, &b, &lags, &tol, Normalization::Centered)?;

    eprintln!("wiener averages (1/N sum gamma^2):");
    for nn in [8usize, 16, 32, 48] {
        eprintln!(
            "  N = {nn:>2}: chacon {:.3e}, odometer {:.3e}",
            wiener_average(&chacon_series, nn)?,
            wiener_average(&odo_series, nn)?
        );
    }

    // plot-ready CSV on stdout: angle, chacon density, odometer density
    let dc = spectral_density(&chacon_series, n, 256)?;
    let dd = spectral_density(&odo_series, n, 256)?;
    println!("angle,chacon,odometer");
    for ((theta, c), (_, o)) in dc.iter().zip(&dd) {
        println!("{theta:.6},{c:.6},{o:.6}");
    }
    Ok(())
}
