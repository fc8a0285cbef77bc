//! Tensor closeness for the slow-growth construction: powers sampled
//! inside constant-cut blocks stay close to the Cesàro average Q_r on the
//! product space, with everything reduced to squared scalar correlations.
//! Desk-scale blocks N(r) = 4r stand in for the faithful 2^(4r), which is
//! reachable only for height arithmetic (also shown).
//!
//! ```text
//! cargo run --release --example slow_growth_tensor
//! ```

use rank1::analysis::{slow_growth_powers, tensor_closeness};
use rank1::enclosure::pow10_neg;
use rank1::engine::Engine;
use rank1::family::preset;
use rank1::rule::BlockRule;
use rank1::{FamilySpec, LevelSet, Schedule};

fn main() -> rank1::Result<()> {
    let schedule = Schedule::new(preset("slow-growth")?)?;
    let engine = Engine::new(schedule.clone());
    let f = LevelSet::base(3);
    println!("desk preset N(r) = 4r, M = 2r, powers h_(j_r + 2m):");
    println!(
        "{:>3} {:>3} {:>10} {:>10} {:>10} {:>10} {:>10}",
        "r", "M", "lhs", "F^2/M", "eps^", "rhs", "qq"
    );
    for r in 2..=5u64 {
        let powers = slow_growth_powers(&schedule, r, 2 * r, 2)?;
        let t = tensor_closeness(&engine, &f, r, &powers, &pow10_neg(9))?;
        println!(
            "{r:>3} {:>3} {:>10.5} {:>10.5} {:>10.5} {:>10.5} {:>10.5}",
            t.m_count,
            t.lhs,
            t.norm_f_sq / t.m_count as f64,
            t.eps_hat,
            t.rhs,
            t.qq
        );
    }

    // the faithful block rule exists for height-only arithmetic
    let faithful =
        Schedule::new(FamilySpec::SlowGrowth { block: BlockRule::PowTwo { factor: 4 } })?;
    println!("\nfaithful rate N(r) = 2^(4r): the r = 3 block starts at stage 257;");
    let h = faithful.height(300)?;
    println!("h_300 has {} bits (cut count there: {})", h.bits(), faithful.cut_count(300)?);
    Ok(())
}
