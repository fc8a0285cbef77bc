//! The classical Chacon weak limit: powers T^(-h_j) converge to the
//! geometric combination sum_k 2^-(k+1) T^k. The fit recovers the
//! coefficients from engine enclosures alone.
//!
//! ```text
//! cargo run --release --example chacon_weak_limit
//! ```

use num_bigint::BigInt;

use rank1::analysis::weak_limit_fit;
use rank1::enclosure::pow10_neg;
use rank1::engine::Engine;
use rank1::{FamilySpec, Schedule};

fn main() -> rank1::Result<()> {
    let schedule = Schedule::new(FamilySpec::ChaconClassical)?;
    let engine = Engine::new(schedule.clone());
    let powers: Vec<BigInt> =
        (18..=22).map(|j| Ok(-BigInt::from(schedule.height(j)?))).collect::<rank1::Result<_>>()?;
    let fit = weak_limit_fit(&engine, &powers, (0, 10), 4, &pow10_neg(9))?;

    println!("fit of T^(-h_j), j = 18..22, on stage-4 indicators:");
    println!("{:>4} {:>12} {:>12} {:>12}", "k", "a_k", "2^-(k+1)", "delta");
    for (k, a) in fit.coefficients.iter().enumerate() {
        let expect = 0.5f64.powi(k as i32 + 1);
        println!("{k:>4} {a:>12.6} {expect:>12.6} {:>12.2e}", a - expect);
    }
    println!("theta (constant projection mass): {:.6}", fit.theta);
    println!("worst-case residual: {:.2e}", fit.residual);
    println!("euclidean residual:  {:.2e}", fit.residual_l2);
    Ok(())
}
