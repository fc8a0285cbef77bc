//! Tour of the construction core: realise a few families, print their
//! heights, level measures and total-measure enclosures.
//!
//! ```text
//! cargo run --release --example towers
//! ```

use rank1::export::{decimal, Rounding};
use rank1::family::preset;
use rank1::tower::{total_measure, tower_sequence};
use rank1::Schedule;

fn main() -> rank1::Result<()> {
    for tag in ["chacon-classical", "odometer", "staircase", "factorial", "sidon"] {
        let schedule = Schedule::new(preset(tag)?)?;
        println!("== {tag} ==");
        let last = schedule.start_stage() + 7;
        for t in tower_sequence(&schedule, last)? {
            println!(
                "  stage {:>2}: r = {:>2}, h = {:>12}, m = {:>10}, offsets {:?}",
                t.stage,
                t.offsets.len(),
                t.height,
                t.level_measure,
                t.offsets.iter().take(4).map(|o| o.to_string()).collect::<Vec<_>>(),
            );
        }
        let tm = total_measure(&schedule, last)?;
        let lower = decimal(&tm.lower, 8, Rounding::Down);
        match &tm.upper {
            Some(u) => println!(
                "  total measure in [{lower}, {}]{}",
                decimal(u, 8, Rounding::Up),
                if tm.upper_is_limit { " (upper bound is the exact limit)" } else { "" }
            ),
            None => println!("  total measure >= {lower} ({:?})", tm.finiteness),
        }
        println!();
    }
    Ok(())
}
