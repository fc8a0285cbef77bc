//! Sidon construction: spacers grow so fast that shifted copies of the base
//! interval overlap in at most one column pair, forcing
//! `mu(T^n E_1 ∩ E_1) <= 1/r_j` throughout the block `(h_j, h_(j+1)]`.
//!
//! ```text
//! cargo run --release --example sidon_decay
//! ```

use num_bigint::BigInt;

use rank1::enclosure::pow10_neg;
use rank1::engine::Engine;
use rank1::family::preset;
use rank1::{LevelSet, Schedule};

fn main() -> rank1::Result<()> {
    let schedule = Schedule::new(preset("sidon")?)?;
    let engine = Engine::new(schedule.clone());
    let f = LevelSet::base(1);
    let tol = pow10_neg(12);
    println!("{:>3} {:>5} {:>28} {:>12} {:>12}", "j", "r_j", "return lag", "corr", "1/r_j");
    for j in 3..=8u64 {
        let r = schedule.cut_count(j)?;
        let offsets = schedule.offsets(j)?;
        // the first return of the base happens at the second column offset
        let lag = BigInt::from(offsets[1].clone());
        let enc = engine.shifted_intersection(&f, &lag, &f, &tol)?;
        println!(
            "{j:>3} {r:>5} {:>28} {:>12.8} {:>12.8}",
            lag.to_string(),
            enc.mid_f64(),
            1.0 / r as f64
        );
        // a lag in the dead zone between returns gives exactly zero
        let dead = &lag + BigInt::from(schedule.height(j)?) + 1;
        let z = engine.shifted_intersection(&f, &dead, &f, &tol)?;
        assert!(z.is_exact());
        println!("{:>3} {:>5} {:>28} {:>12.8} (dead zone)", "", "", dead.to_string(), z.mid_f64());
    }
    Ok(())
}
