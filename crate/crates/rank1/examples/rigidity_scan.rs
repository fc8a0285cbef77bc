//! Rigidity against its absence: odometer symmetric differences at the
//! tower heights collapse geometrically, while the classical Chacon
//! construction keeps every lag's symmetric difference large. A semibounded
//! schedule shows the splitting mechanism behind its hidden rigidity.
//!
//! ```text
//! cargo run --release --example rigidity_scan
//! ```

use num_bigint::BigInt;

use rank1::analysis::{mixing_scan, rigidity_scan};
use rank1::enclosure::pow10_neg;
use rank1::engine::Engine;
use rank1::family::preset;
use rank1::{FamilySpec, LevelSet, Schedule};

fn main() -> rank1::Result<()> {
    let tol = pow10_neg(8);

    let odo = Schedule::new(preset("odometer")?)?;
    let engine = Engine::new(odo.clone());
    let a = LevelSet::base(4);
    let mu_a = rank1::Enclosure::exact(a.measure(&odo)?).mid_f64();
    let lags: Vec<BigInt> =
        (4..=12).map(|j| Ok(BigInt::from(odo.height(j)?))).collect::<rank1::Result<_>>()?;
    println!("odometer, A = stage-4 base: mu(T^(h_j) A △ A)/mu(A)");
    for (n, enc) in rigidity_scan(&engine, &a, &lags, &tol)? {
        println!("  lag {:>6}: {:.2e}", n.to_string(), enc.hi_f64() / mu_a);
    }

    let chacon = Schedule::new(FamilySpec::ChaconClassical)?;
    let engine = Engine::new(chacon.clone());
    let b = LevelSet::base(6);
    let mu_b = rank1::Enclosure::exact(b.measure(&chacon)?).mid_f64();
    let lags: Vec<BigInt> = (1..=63).map(BigInt::from).collect();
    let scan = rigidity_scan(&engine, &b, &lags, &tol)?;
    let min = scan.iter().map(|(_, e)| e.lo_f64()).fold(f64::INFINITY, f64::min);
    println!("\nchacon, A = stage-6 base: min over lags 1..=h_6 of symdiff/mu(A) = {:.3}", min / mu_b);
    let mix = mixing_scan(&engine, &b, &b, &lags, &tol)?;
    println!("  largest centered deviation at lag {} (sup in [{:.4}, {:.4}])", mix.argmax, mix.sup_lo, mix.sup_hi);

    // semibounded (0, s_j, 0): T^(h_j) splits between I and T^(-s_j)
    let semi = Schedule::new(preset("semibounded")?)?;
    let engine = Engine::new(semi.clone());
    let c = LevelSet::from_u64s(3, vec![0, 4, 7]);
    let mu_c = rank1::Enclosure::exact(c.measure(&semi)?).mid_f64();
    println!("\nsemibounded s_j = floor(sqrt j), A = {{0,4,7}}@3:");
    println!("  corr(h_j)/mu(A) vs 1/2 + corr(s_j)/(2 mu(A)) — the splitting identity");
    for j in [9u64, 16, 25] {
        let h = BigInt::from(semi.height(j)?);
        let s = BigInt::from(semi.spacers(j)?[1].clone());
        let at_h = engine.shifted_intersection(&c, &h, &c, &tol)?.mid_f64();
        let at_s = engine.shifted_intersection(&c, &-s.clone(), &c, &tol)?.mid_f64();
        println!(
            "  j = {j:>2} (s_j = {s}): {:.4} vs {:.4}",
            at_h / mu_c,
            0.5 + at_s / (2.0 * mu_c)
        );
    }
    Ok(())
}
