//! The random construction: windowed spacer sums telescope to
//! `p H + a(i) - a(i+p)`, their centred histogram approaches the triangular
//! law, and the averaging operators Q_(j,p) flatten toward the constant
//! projection — the quantitative heart of the mixing argument.
//!
//! ```text
//! cargo run --release --example ornstein_mixing
//! ```

use num_bigint::BigInt;

use rank1::analysis::averaging_deviation;
use rank1::enclosure::pow10_neg;
use rank1::engine::Engine;
use rank1::family::preset;
use rank1::rule::IntRule;
use rank1::spacer_stats::{spacer_sum_distribution, triangular_total_variation};
use rank1::{FamilySpec, LevelSet, Schedule};

fn main() -> rank1::Result<()> {
    // triangular law: pooled centred histogram over the first stages
    let schedule = Schedule::new(preset("ornstein")?)?;
    let h_window = 64u64;
    println!("triangular-law fit (H = 64, r = 4096), TV distance by window:");
    for p in [1u64, 10, 100] {
        let mut pooled = spacer_sum_distribution(&schedule, 1, p)?;
        for j in 2..=8 {
            pooled.merge_from(&spacer_sum_distribution(&schedule, j, p)?);
        }
        let single = spacer_sum_distribution(&schedule, 1, p)?;
        let tv_single = triangular_total_variation(
            &single.centered(&BigInt::from(p * h_window)),
            h_window,
        );
        let tv_pooled = triangular_total_variation(
            &pooled.centered(&BigInt::from(p * h_window)),
            h_window,
        );
        println!(
            "  p = {p:>3}: one stage {:.4}, pooled over 8 stages {:.4}",
            rank1::Enclosure::exact(tv_single).mid_f64(),
            rank1::Enclosure::exact(tv_pooled).mid_f64(),
        );
    }

    // averaging deviation shrinks as the uniform window H_j grows
    let spec = FamilySpec::Ornstein {
        r: IntRule::Const { value: 512 },
        window: IntRule::Linear { slope: 8, intercept: 8 },
        seed: 5,
    };
    let schedule = Schedule::new(spec)?;
    let engine = Engine::new(schedule.clone());
    let f = LevelSet::base(1);
    println!("\n||Q_(j,3) f - Θ f||^2 on the base indicator, growing H_j:");
    for j in 1..=4u64 {
        let rep = averaging_deviation(&engine, j, 3, &f, &pow10_neg(6))?;
        println!(
            "  stage {j} (H = {:>2}): deviation ~ {:.6}  ({} distinct sum differences)",
            8 * j + 8,
            rep.value.mid_f64(),
            rep.histogram.len()
        );
    }
    Ok(())
}
