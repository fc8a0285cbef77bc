//! The staircase "good mixing" anomaly: on odd-level witness sets the
//! deviation `nu(T^(2h_j) A_j ∩ A_j) - nu(A_j)^2` stays bounded away from
//! zero. Its magnitude climbs toward 1/4 as the cut count grows; the sign
//! is negative because two consecutive staircase columns shift levels by
//! the odd amount 2i + 1, flipping parity.
//!
//! ```text
//! cargo run --release --example staircase_anomaly
//! ```

use rank1::analysis::staircase_anomaly;
use rank1::enclosure::pow10_neg;
use rank1::engine::Engine;
use rank1::family::preset;
use rank1::Schedule;

fn main() -> rank1::Result<()> {
    let schedule = Schedule::new(preset("staircase")?)?;
    let engine = Engine::new(schedule.clone());
    println!("{:>6} {:>4} {:>12} {:>12} {:>10}", "stage", "r_j", "anomaly", "|a| - 1/4", "nu(A)");
    for j in [8u64, 24, 120, 504, 2040, 8184] {
        let rep = staircase_anomaly(&engine, j, &pow10_neg(6))?;
        let mid = rep.value.mid_f64();
        println!(
            "{j:>6} {:>4} {mid:>12.6} {:>12.6} {:>10.6}",
            rep.cut,
            mid.abs() - 0.25,
            rep.nu_a.mid_f64()
        );
    }
    println!("\nodd r gives exactly -(r-2)/(4r); even r keeps the previous block's value");
    Ok(())
}
