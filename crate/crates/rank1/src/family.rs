//! The named spacer families.
//!
//! A [`FamilySpec`] is pure data: family tag plus parameters (rules, seeds,
//! coefficient vectors). Realising a spec as an actual stage-by-stage
//! schedule happens in [`crate::schedule`]. Specs serialise to/from config
//! files and are compared/hashes as data, which is what makes runs
//! reproducible.

use serde::{Deserialize, Serialize};

use crate::rule::{BlockRule, IntRule};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CustomStage {
    /// Spacer vector for one stage; the cut count is its length.
    pub spacers: Vec<u64>,
}

/// One spacer family with its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilySpec {
    /// No spacers at all; cut count from a rule. Discrete spectrum, rigid.
    Odometer { r: IntRule },
    /// `s̄_j = (0, 1)`.
    ChaconClassical,
    /// `s̄_j = (0, 1, 0)`.
    ChaconModified,
    /// `s̄_j = (2, 3, 1)`.
    Chacon231,
    /// Single middle spacer, `s̄_j = (0, .., 0, 1, 0, .., 0)`, growing `r_j`.
    DelJuncoRudolph { r: IntRule },
    /// Zeros then ones, `s̄_j = (0, .., 0, 1, .., 1)`, growing `r_j`.
    Katok { r: IntRule },
    /// `s̄_j = (0, s_j, 0)`.
    Semibounded { s: IntRule },
    /// Random spacers `s_j(i) = H_j + a_j(i) - a_j(i+1)` with `a_j(i)`
    /// i.i.d. uniform on `{0, .., H_j - 1}`, drawn from a per-stage stream
    /// derived from `seed`.
    Ornstein { r: IntRule, window: IntRule, seed: u64 },
    /// `s̄_j = (1, 2, .., r_j)`.
    Staircase { r: IntRule },
    /// `s_j(i) = r_j + {q^i} - {q^(i+1)}` with `r_j` prime and `q` the
    /// smallest generator mod `r_j`.
    GaloisPrimitive { primes: IntRule },
    /// Trace spacers over `F_(base^n_j)`: `s_j(i) = base + a(i) - a(i+1)`,
    /// `a(i) = tr(q^i)`.
    GaloisTrace { base: u64, degree: IntRule },
    /// `s_j(i) = ceil(c^i) * h_j` with `c = ratio_num/ratio_den > 1`:
    /// spacers dwarf the tower, correlations decay like `1/r_j`.
    Sidon { ratio_num: u64, ratio_den: u64, r: IntRule },
    /// `s̄_j = h_j * coeffs`.
    SelfSimilar { coeffs: Vec<u64> },
    /// `s̄_j = (1, 2, .., r_j - 1, 0)` where the cut count takes each value
    /// `r` for `N(r)` consecutive stages, starting at `r = 2`.
    SlowGrowth { block: BlockRule },
    /// `h_j = j!`: `r_j = j`, `s_j(i) = (j-1)!`, starting at stage 2.
    Factorial,
    /// `r_j = j + 1`, `s_j(i) = C(j, i)`.
    Binomial,
    /// `s̄_j = (0, p(j), 0)` with `p(j)` the j-th prime.
    PrimeSpacers,
    /// Explicit stage vectors, cycled.
    CustomFixed { stages: Vec<CustomStage> },
}

/// Declared behaviour of the spacer mass `sigma_j * m_(j+1)` added per
/// stage; the source of rigorous total-measure tail bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MassProfile {
    /// No spacer mass ever.
    Zero,
    /// Stage vectors repeat with this period; the tail is an exact
    /// geometric series.
    EventuallyPeriodic { period: u64 },
    /// `mass_(j+1) <= (num/den) * mass_j` for all `j >= from_stage`.
    GeometricBound { num: u64, den: u64, from_stage: u64 },
    /// `mass_(j+2) <= (num/den) * mass_j` for all `j >= from_stage` (used
    /// when single-stage ratios can touch 1 at block boundaries).
    GeometricPairBound { num: u64, den: u64, from_stage: u64 },
    /// Declared infinite total measure.
    Infinite,
    /// No declaration; the total measure is reported unbounded above.
    Unknown,
}

impl FamilySpec {
    pub fn tag(&self) -> &'static str {
        match self {
            FamilySpec::Odometer { .. } => "odometer",
            FamilySpec::ChaconClassical => "chacon-classical",
            FamilySpec::ChaconModified => "chacon-modified",
            FamilySpec::Chacon231 => "chacon-231",
            FamilySpec::DelJuncoRudolph { .. } => "del-junco-rudolph",
            FamilySpec::Katok { .. } => "katok",
            FamilySpec::Semibounded { .. } => "semibounded",
            FamilySpec::Ornstein { .. } => "ornstein",
            FamilySpec::Staircase { .. } => "staircase",
            FamilySpec::GaloisPrimitive { .. } => "galois-primitive",
            FamilySpec::GaloisTrace { .. } => "galois-trace",
            FamilySpec::Sidon { .. } => "sidon",
            FamilySpec::SelfSimilar { .. } => "self-similar",
            FamilySpec::SlowGrowth { .. } => "slow-growth",
            FamilySpec::Factorial => "factorial",
            FamilySpec::Binomial => "binomial",
            FamilySpec::PrimeSpacers => "prime-spacers",
            FamilySpec::CustomFixed { .. } => "custom-fixed",
        }
    }

    /// First stage index and the height there.
    pub fn start(&self) -> (u64, u64) {
        match self {
            // r_j = j only reaches 2 at stage 2, where the height is 2! = 2.
            FamilySpec::Factorial => (2, 2),
            _ => (1, 1),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParam(m));
        match self {
            FamilySpec::Sidon { ratio_num, ratio_den, .. } => {
                if *ratio_den == 0 || ratio_num <= ratio_den {
                    return bad(format!(
                        "sidon growth ratio {ratio_num}/{ratio_den} must exceed 1"
                    ));
                }
            }
            FamilySpec::SelfSimilar { coeffs } => {
                if coeffs.len() < 2 {
                    return bad("self-similar coefficient vector needs length >= 2".into());
                }
            }
            FamilySpec::Ornstein { window, .. } => {
                if window.eval(1)? == 0 {
                    return bad("ornstein window H_j must be >= 1".into());
                }
            }
            FamilySpec::GaloisTrace { base, degree } => {
                if !crate::rule::is_prime(*base) {
                    return Err(Error::NotPrime(*base));
                }
                let n = degree.eval(1)?;
                if n == 0 {
                    return bad("galois-trace degree must be >= 1".into());
                }
            }
            FamilySpec::CustomFixed { stages } => {
                if stages.is_empty() {
                    return bad("custom-fixed needs at least one stage vector".into());
                }
                for (k, st) in stages.iter().enumerate() {
                    if st.spacers.len() < 2 {
                        return bad(format!("custom-fixed stage {k} has cut count < 2"));
                    }
                }
            }
            FamilySpec::SlowGrowth { block } => {
                if block.eval(2)? < 2 {
                    return bad("slow-growth block length N(2) must be >= 2".into());
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Whether this family draws seeded randomness.
    pub fn is_stochastic(&self) -> bool {
        matches!(self, FamilySpec::Ornstein { .. })
    }

    pub fn mass_profile(&self) -> MassProfile {
        use MassProfile::*;
        match self {
            FamilySpec::Odometer { .. } => Zero,
            FamilySpec::ChaconClassical
            | FamilySpec::ChaconModified
            | FamilySpec::Chacon231 => EventuallyPeriodic { period: 1 },
            FamilySpec::CustomFixed { stages } => {
                if stages.iter().all(|s| s.spacers.iter().all(|&v| v == 0)) {
                    Zero
                } else {
                    EventuallyPeriodic { period: stages.len() as u64 }
                }
            }
            // sigma_j = 1, so mass ratio = 1/r_(j+1) <= 1/2.
            FamilySpec::DelJuncoRudolph { .. } => GeometricBound { num: 1, den: 2, from_stage: 1 },
            // sigma_j = floor(r_j/2) >= 1; ratio <= (r/2) / (1 * r) = 1/2.
            FamilySpec::Katok { .. } => GeometricBound { num: 1, den: 2, from_stage: 1 },
            FamilySpec::Semibounded { s } => match s {
                IntRule::Const { value: 0 } => Zero,
                _ => match s.growth_cap() {
                    // ratio = (s_(j+1)/s_j) / 3 <= cap/3, needs s_j >= 1.
                    Some((num, den, from)) if num < 3 * den => {
                        GeometricBound { num, den: den * 3, from_stage: from }
                    }
                    _ => Unknown,
                },
            },
            FamilySpec::PrimeSpacers => GeometricBound { num: 2, den: 3, from_stage: 1 },
            // sigma ratio <= (r+2)/r and cut >= 2 would give 1, but with the
            // growth caps at hand (r_(j+1) <= 2 r_j) the stage ratio
            // (r_(j+1)+1)/(r_j (r_j+1)) stays below 5/6 for r_j >= 2.
            FamilySpec::Staircase { r } => match r.growth_cap() {
                Some((num, den, from)) if num <= 2 * den => {
                    GeometricBound { num: 5, den: 6, from_stage: from }
                }
                _ => Unknown,
            },
            // sigma = r_j * base exactly; ratio = 1/r_j <= 1/2.
            FamilySpec::GaloisTrace { .. } => GeometricBound { num: 1, den: 2, from_stage: 1 },
            // ratio <= (2r+1)/(r^2 - r) <= 11/20 once r >= 5; the schedule
            // resolves the actual from_stage when it knows the prime rule.
            FamilySpec::GaloisPrimitive { .. } => Unknown,
            FamilySpec::Ornstein { .. } => Unknown,
            FamilySpec::Sidon { .. } => Infinite,
            FamilySpec::SelfSimilar { coeffs } => {
                if coeffs.iter().all(|&v| v == 0) {
                    Zero
                } else {
                    Infinite
                }
            }
            // in-block ratio 1/r; a block boundary can reach 1, but any two
            // consecutive stages multiply to <= 1/2.
            FamilySpec::SlowGrowth { .. } => GeometricPairBound { num: 1, den: 2, from_stage: 1 },
            FamilySpec::Factorial => Infinite,
            FamilySpec::Binomial => GeometricBound { num: 3, den: 5, from_stage: 2 },
        }
    }
}

/// Catalog entry for one family: tag, the defining spacer formula, and the
/// parameters it takes.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyInfo {
    pub tag: &'static str,
    pub formula: &'static str,
    pub parameters: &'static str,
    pub notes: &'static str,
}

pub fn catalog() -> Vec<FamilyInfo> {
    vec![
        FamilyInfo {
            tag: "odometer",
            formula: "s̄_j = (0, .., 0)",
            parameters: "r: cut-count rule",
            notes: "no spacers; discrete spectrum; rigid along h_j",
        },
        FamilyInfo {
            tag: "chacon-classical",
            formula: "s̄_j = (0, 1)",
            parameters: "none",
            notes: "h_(j+1) = 2 h_j + 1; weakly but not strongly mixing",
        },
        FamilyInfo {
            tag: "chacon-modified",
            formula: "s̄_j = (0, 1, 0)",
            parameters: "none",
            notes: "three columns, single middle spacer",
        },
        FamilyInfo {
            tag: "chacon-231",
            formula: "s̄_j = (2, 3, 1)",
            parameters: "none",
            notes: "bounded construction with continuous spectrum",
        },
        FamilyInfo {
            tag: "del-junco-rudolph",
            formula: "s̄_j = (0, .., 0, 1, 0, .., 0)",
            parameters: "r: cut-count rule (growing)",
            notes: "single middle spacer, r_j -> infinity",
        },
        FamilyInfo {
            tag: "katok",
            formula: "s̄_j = (0, .., 0, 1, .., 1)",
            parameters: "r: cut-count rule (growing)",
            notes: "zeros then ones",
        },
        FamilyInfo {
            tag: "semibounded",
            formula: "s̄_j = (0, s_j, 0)",
            parameters: "s: spacer rule",
            notes: "slowly growing s_j gives rigidity and rich weak limits",
        },
        FamilyInfo {
            tag: "ornstein",
            formula: "s_j(i) = H_j + a_j(i) - a_j(i+1), a_j(i) ~ U{0..H_j-1}",
            parameters: "r, window (H_j) rules; seed (required)",
            notes: "seeded stochastic construction; windowed sums telescope to p*H_j + a(i) - a(i+p)",
        },
        FamilyInfo {
            tag: "staircase",
            formula: "s̄_j = (1, 2, .., r_j)",
            parameters: "r: cut-count rule",
            notes: "mixing for slow r_j; r_j/h_j -> 0 monitored",
        },
        FamilyInfo {
            tag: "galois-primitive",
            formula: "s_j(i) = r_j + {q^i} - {q^(i+1)}, q generating F_(r_j)",
            parameters: "primes: prime rule",
            notes: "windowed differences {q^i} - {q^(i+p)} are injective in i",
        },
        FamilyInfo {
            tag: "galois-trace",
            formula: "s_j(i) = b + tr(q^i) - tr(q^(i+1)) over F_(b^n_j)",
            parameters: "base b (prime), degree rule n_j",
            notes: "quasi-random spacers from the trace map",
        },
        FamilyInfo {
            tag: "sidon",
            formula: "s_j(i) = ceil(c^i) * h_j",
            parameters: "ratio_num/ratio_den = c > 1; r: cut-count rule",
            notes: "returns overlap in at most one column pair: |corr| <= 1/r_j",
        },
        FamilyInfo {
            tag: "self-similar",
            formula: "s̄_j = h_j * (v_1, .., v_r)",
            parameters: "coeffs: coefficient vector v",
            notes: "(0,1) gives half-identity weak limits; (0,1,2) is not isomorphic to its inverse",
        },
        FamilyInfo {
            tag: "slow-growth",
            formula: "s̄_j = (1, 2, .., r_j - 1, 0); r_j = r for N(r) stages",
            parameters: "block: N(r) rule (desk default 4r; faithful 2^(4r))",
            notes: "powers sampled inside constant blocks stay close to Cesàro averages",
        },
        FamilyInfo {
            tag: "factorial",
            formula: "h_j = j!, r_j = j, s_j(i) = (j-1)!",
            parameters: "none",
            notes: "infinite measure; lower bound grows by exactly 1 per stage",
        },
        FamilyInfo {
            tag: "binomial",
            formula: "r_j = j + 1, s_j(i) = C(j, i)",
            parameters: "none",
            notes: "binomial-coefficient spacers",
        },
        FamilyInfo {
            tag: "prime-spacers",
            formula: "s̄_j = (0, p(j), 0)",
            parameters: "none",
            notes: "p(j) = j-th prime, exact sieve",
        },
        FamilyInfo {
            tag: "custom-fixed",
            formula: "explicit stage vectors, cycled",
            parameters: "stages: list of spacer vectors",
            notes: "periodic schedules have exactly computable total measure",
        },
    ]
}

pub fn describe(tag: &str) -> Result<FamilyInfo> {
    catalog()
        .into_iter()
        .find(|f| f.tag == tag)
        .ok_or_else(|| Error::UnknownFamily(tag.to_string()))
}

/// Shipped default parameters per family, used by the CLI when only a tag is
/// given and by the acceptance suite's whole-catalog sweeps.
pub fn preset(tag: &str) -> Result<FamilySpec> {
    let spec = match tag {
        "odometer" => FamilySpec::Odometer { r: IntRule::Const { value: 2 } },
        "chacon-classical" => FamilySpec::ChaconClassical,
        "chacon-modified" => FamilySpec::ChaconModified,
        "chacon-231" => FamilySpec::Chacon231,
        "del-junco-rudolph" => {
            FamilySpec::DelJuncoRudolph { r: IntRule::Linear { slope: 1, intercept: 2 } }
        }
        "katok" => FamilySpec::Katok { r: IntRule::Linear { slope: 1, intercept: 2 } },
        "semibounded" => FamilySpec::Semibounded { s: IntRule::Sqrt },
        "ornstein" => FamilySpec::Ornstein {
            r: IntRule::Const { value: 4096 },
            window: IntRule::Const { value: 64 },
            seed: 2024,
        },
        "staircase" => FamilySpec::Staircase { r: IntRule::Log2 { offset: 8 } },
        "galois-primitive" => FamilySpec::GaloisPrimitive { primes: IntRule::NthPrime { offset: 1 } },
        "galois-trace" => {
            FamilySpec::GaloisTrace { base: 2, degree: IntRule::Linear { slope: 1, intercept: 1 } }
        }
        "sidon" => FamilySpec::Sidon {
            ratio_num: 4,
            ratio_den: 1,
            r: IntRule::Linear { slope: 1, intercept: 2 },
        },
        "self-similar" => FamilySpec::SelfSimilar { coeffs: vec![0, 1] },
        "slow-growth" => FamilySpec::SlowGrowth { block: BlockRule::Linear { slope: 4, intercept: 0 } },
        "factorial" => FamilySpec::Factorial,
        "binomial" => FamilySpec::Binomial,
        "prime-spacers" => FamilySpec::PrimeSpacers,
        "custom-fixed" => FamilySpec::CustomFixed {
            stages: vec![CustomStage { spacers: vec![0, 1] }, CustomStage { spacers: vec![1, 0, 2] }],
        },
        other => return Err(Error::UnknownFamily(other.to_string())),
    };
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_covers_presets() {
        let cat = catalog();
        assert!(cat.len() >= 16);
        for info in &cat {
            let spec = preset(info.tag).unwrap();
            assert_eq!(spec.tag(), info.tag);
            spec.validate().unwrap();
        }
        assert!(describe("chacon-classical").unwrap().formula.contains("(0, 1)"));
        assert!(matches!(describe("no-such"), Err(Error::UnknownFamily(_))));
        assert!(matches!(preset("no-such"), Err(Error::UnknownFamily(_))));
    }

    #[test]
    fn validation_rejects_bad_params() {
        assert!(FamilySpec::Sidon {
            ratio_num: 1,
            ratio_den: 1,
            r: IntRule::Const { value: 3 }
        }
        .validate()
        .is_err());
        assert!(FamilySpec::SelfSimilar { coeffs: vec![] }.validate().is_err());
        assert!(FamilySpec::GaloisTrace { base: 4, degree: IntRule::Const { value: 2 } }
            .validate()
            .is_err());
        assert!(FamilySpec::CustomFixed { stages: vec![] }.validate().is_err());
    }

    #[test]
    fn specs_round_trip_through_config_text() {
        for info in catalog() {
            let spec = preset(info.tag).unwrap();
            let text = toml::to_string(&spec).unwrap();
            let back: FamilySpec = toml::from_str(&text).unwrap();
            assert_eq!(spec, back);
        }
    }
}
