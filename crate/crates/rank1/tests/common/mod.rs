//! Shared test support: the independent interval-exchange oracle and
//! seeded random schedule generation.
//!
//! Each integration-test target compiles its own copy and uses a subset.
#![allow(dead_code)]

pub mod oracle;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rank1::family::{CustomStage, FamilySpec};

pub fn rng(seed: u64, salt: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&salt.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

pub fn pick(rng: &mut ChaCha8Rng, bound: u64) -> u64 {
    rng.next_u64() % bound
}

/// A random periodic schedule with the given stage count, cut counts in
/// `2..=max_r` and spacers in `0..=max_s`. Returned as raw per-stage data
/// plus the equivalent family spec (the raw data feeds the oracle, the spec
/// feeds the engine).
pub fn random_schedule(
    rng: &mut ChaCha8Rng,
    stages: usize,
    max_r: u64,
    max_s: u64,
) -> (Vec<(u64, Vec<u64>)>, FamilySpec) {
    let mut data = Vec::with_capacity(stages);
    for _ in 0..stages {
        let r = 2 + pick(rng, max_r - 1);
        let spacers: Vec<u64> = (0..r).map(|_| pick(rng, max_s + 1)).collect();
        data.push((r, spacers));
    }
    let spec = FamilySpec::CustomFixed {
        stages: data.iter().map(|(_, s)| CustomStage { spacers: s.clone() }).collect(),
    };
    (data, spec)
}
