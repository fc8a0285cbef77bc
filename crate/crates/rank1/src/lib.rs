//! Exact-arithmetic rank-one cutting-and-stacking constructions.
//!
//! A rank-one transformation is determined by a spacer schedule: for each
//! stage `j` a cut count `r_j >= 2` and a vector of spacer counts
//! `s_j(1..r_j)`. The stage-`j` tower of `h_j` levels is cut into `r_j`
//! columns, `s_j(i)` new levels are stacked over column `i`, and the columns
//! are stacked left to right, giving
//!
//! ```text
//! h_(j+1) = h_j * r_j + s_j(1) + ... + s_j(r_j)
//! ```
//!
//! Everything here is computed over arbitrary-precision integers and
//! rationals. Measure values that cannot be resolved exactly are returned as
//! rigorous rational enclosures `[lo, hi]` guaranteed to contain the true
//! value; no floating point enters any measure computation. Floats appear
//! only in the diagnostic layer ([`analysis`]) and in exports.
//!
//! The crate is a library with one thin CLI binary. The `examples/`
//! directory has one runnable program per capability; start with
//! `cargo run --example towers`.
//!
//! * [`family`] / [`schedule`] — the named spacer families and their lazy,
//!   memoised realisation.
//! * [`tower`] — towers, level sets, refinement, level decoding, and total
//!   measure with declared tail bounds.
//! * [`engine`] — enclosures of shifted intersection measures
//!   `mu(T^n A ∩ B)`, correlation series, triple intersections.
//! * [`galois`] — finite-field spacers: primitive roots, trace sequences,
//!   injectivity checks.
//! * [`analysis`] — weak-limit fitting, averaging-operator deviations,
//!   window-sum statistics, tensor closeness, scans, spectral summaries.
//! * [`config`] — the reproducible experiment runner behind the CLI.

pub mod analysis;
pub mod config;
pub mod enclosure;
pub mod engine;
pub mod export;
pub mod family;
pub mod galois;
pub mod rule;
pub mod schedule;
pub mod spacer_stats;
pub mod tower;

mod error;

pub use enclosure::Enclosure;
pub use error::{Error, Result};
pub use family::FamilySpec;
pub use schedule::Schedule;
pub use tower::{LevelSet, Tower};
