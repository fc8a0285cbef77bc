//! The family catalog and the opening stage vectors of each preset.
//!
//! ```text
//! cargo run --release --example families
//! ```

use rank1::family::{catalog, preset};
use rank1::Schedule;

fn main() -> rank1::Result<()> {
    for info in catalog() {
        println!("{:<18} {}", info.tag, info.formula);
        println!("{:<18}   parameters: {}", "", info.parameters);
        println!("{:<18}   {}", "", info.notes);
        let schedule = Schedule::new(preset(info.tag)?)?;
        let start = schedule.start_stage();
        for j in start..start + 3 {
            let r = schedule.cut_count(j)?;
            let shown = match schedule.spacers(j) {
                Ok(v) => {
                    let head: Vec<String> =
                        v.iter().take(8).map(|s| s.to_string()).collect();
                    format!("({}{})", head.join(", "), if r > 8 { ", .." } else { "" })
                }
                Err(_) => format!("<{r} entries, sum {}>", schedule.spacer_total(j)?),
            };
            println!("{:<18}   stage {j}: r = {r}, spacers {shown}", "");
        }
        println!();
    }
    Ok(())
}
