//! Algebra instead of randomness: primitive-root spacers over F_p and
//! trace spacers over F_(b^n). The windowed differences
//! `{q^i} - {q^(i+p)}` are injective in `i`, which is what replaces the
//! statistical near-uniformity of random draws.
//!
//! ```text
//! cargo run --release --example galois_spacers
//! ```

use rank1::family::preset;
use rank1::galois::{
    injectivity_window, primitive_root, trace_sequence, validate_injectivity,
};
use rank1::Schedule;

fn main() -> rank1::Result<()> {
    println!("smallest primitive roots:");
    for p in [2u64, 7, 11, 101, 9973] {
        println!("  p = {p:>5}: g = {}", primitive_root(p)?);
    }

    println!("\ninjectivity of i -> {{g^i}} - {{g^(i+w)}} mod 7:");
    println!("  generator 3, window 2: {}", injectivity_window(7, 3, 2, None));
    println!("  non-generator 2 (order 3), window 3: {}", injectivity_window(7, 2, 3, None));

    let schedule = Schedule::new(preset("galois-primitive")?)?;
    let j = 6;
    let p = schedule.cut_count(j)?;
    let all = (1..p).all(|w| validate_injectivity(&schedule, j, w).unwrap());
    println!("\npreset schedule stage {j} (p = {p}): all {} windows injective: {all}", p - 1);
    let v = schedule.spacers(j)?;
    let head: Vec<String> = v.iter().take(10).map(|s| s.to_string()).collect();
    println!("  spacers: ({}, ..)", head.join(", "));

    println!("\ntrace sequences tr(q^i):");
    for (b, n) in [(2u64, 2usize), (2, 4), (3, 2)] {
        let seq = trace_sequence(b, n, 12)?;
        println!("  F_{b}^{n}: {seq:?}");
    }

    let trace = Schedule::new(preset("galois-trace")?)?;
    println!("\ntrace-spacer schedule (b = 2): cut counts and spacer sums");
    for j in 1..=8 {
        println!(
            "  stage {j}: r = 2^{}-1 = {:>4}, sigma = {}",
            j + 1,
            trace.cut_count(j)?,
            trace.spacer_total(j)?
        );
    }
    Ok(())
}
