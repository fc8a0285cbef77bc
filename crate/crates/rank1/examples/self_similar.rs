//! Self-similar spacers `s̄_j = h_j v`: the half-identity weak limit of the
//! (0,1) construction and the time-asymmetry witness of (0,1,2).
//!
//! ```text
//! cargo run --release --example self_similar
//! ```

use num_bigint::BigInt;

use rank1::analysis::asymmetry_test;
use rank1::enclosure::pow10_neg;
use rank1::engine::Engine;
use rank1::{FamilySpec, LevelSet, Schedule};

fn main() -> rank1::Result<()> {
    let tol = pow10_neg(12);

    // (0,1): mu(T^(h_j) A ∩ A) is exactly mu(A)/2 for stage-3 sets
    let schedule = Schedule::new(FamilySpec::SelfSimilar { coeffs: vec![0, 1] })?;
    let engine = Engine::new(schedule.clone());
    let a = LevelSet::from_u64s(3, vec![1, 4]);
    let mu_a = a.measure(&schedule)?;
    println!("(0,1) construction, A = levels {{1,4}}@3, mu(A) = {mu_a}:");
    for j in [6u64, 9, 12] {
        let n = BigInt::from(schedule.height(j)?);
        let enc = engine.shifted_intersection(&a, &n, &a, &tol)?;
        println!("  mu(T^(h_{j}) A ∩ A) = {enc}  (ratio {})", enc.lo() / &mu_a);
    }

    // (0,1,2): the triple correlations that distinguish T from its inverse
    let schedule = Schedule::new(FamilySpec::SelfSimilar { coeffs: vec![0, 1, 2] })?;
    let engine = Engine::new(schedule.clone());
    let a = LevelSet::base(3);
    println!("\n(0,1,2) construction, A = stage-3 base, mu(A) = {}:", a.measure(&schedule)?);
    for j in 4..=8 {
        let (fwd, rev) = asymmetry_test(&engine, &a, j, &tol)?;
        println!(
            "  j = {j}: mu(A ∩ T^(h) A ∩ T^(3h) A) = {fwd}, mu(A ∩ T^(2h) A ∩ T^(3h) A) = {rev}"
        );
    }
    println!("forward orbit hits (0, h, 3h) with mass mu(A)/3; the reversed pattern never occurs");
    Ok(())
}
