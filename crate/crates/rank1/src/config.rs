//! Config-driven experiment runner.
//!
//! A TOML [`ExperimentConfig`] names a schedule, one operation with its
//! parameters, tolerances and budgets, and optional output paths. Running a
//! config produces a [`RunRecord`] whose hash identifies the inputs;
//! identical configs yield byte-identical output files (wall time lives
//! only in the record, never in data files).

use std::path::PathBuf;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::analysis;
use crate::enclosure::{parse_rational, pow10_neg};
use crate::engine::{Engine, EngineOptions, Normalization};
use crate::export;
use crate::family::FamilySpec;
use crate::galois;
use crate::rule::primes_below;
use crate::schedule::Schedule;
use crate::spacer_stats;
use crate::tower::{self, LevelSet};
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "set", rename_all = "kebab-case")]
pub enum SetSpec {
    /// `{0}` at a stage.
    Base { stage: u64 },
    Levels { stage: u64, levels: Vec<u64> },
    Odd { stage: u64 },
    All { stage: u64 },
}

impl SetSpec {
    pub fn realize(&self, schedule: &Schedule, cap: u64) -> Result<LevelSet> {
        match self {
            SetSpec::Base { stage } => Ok(LevelSet::base(*stage)),
            SetSpec::Levels { stage, levels } => LevelSet::new(
                schedule,
                *stage,
                levels.iter().map(|&l| l.into()).collect(),
            ),
            SetSpec::Odd { stage } => {
                let h: u64 = (&schedule.height(*stage)?).try_into().map_err(|_| {
                    Error::SizeBudgetExceeded(format!("stage {stage} too tall for explicit odds"))
                })?;
                if h > cap {
                    return Err(Error::SizeBudgetExceeded(format!(
                        "stage {stage} height {h} above cap {cap}"
                    )));
                }
                Ok(LevelSet::from_u64s(*stage, (0..h).filter(|l| l % 2 == 1).collect()))
            }
            SetSpec::All { stage } => LevelSet::full(schedule, *stage, cap),
        }
    }

    pub fn parse(s: &str) -> Result<SetSpec> {
        let err = || Error::Config(format!("cannot parse set spec '{s}'"));
        let (kind, rest) = s.split_once('@').ok_or_else(err)?;
        match kind {
            "base" => Ok(SetSpec::Base { stage: rest.parse().map_err(|_| err())? }),
            "odd" => Ok(SetSpec::Odd { stage: rest.parse().map_err(|_| err())? }),
            "all" => Ok(SetSpec::All { stage: rest.parse().map_err(|_| err())? }),
            "levels" => {
                let (stage, levels) = rest.split_once(':').ok_or_else(err)?;
                let levels: std::result::Result<Vec<u64>, _> =
                    levels.split(',').map(|v| v.trim().parse()).collect();
                Ok(SetSpec::Levels {
                    stage: stage.parse().map_err(|_| err())?,
                    levels: levels.map_err(|_| err())?,
                })
            }
            _ => Err(err()),
        }
    }
}

/// Lags / powers, resolvable against the schedule (heights may be huge).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "lags", rename_all = "kebab-case")]
pub enum LagSpec {
    List { values: Vec<i64> },
    Range { from: i64, to: i64, step: u64 },
    /// `scale * h_j` for `j = from_stage ..= to_stage`.
    Heights { from_stage: u64, to_stage: u64, scale: i64 },
}

impl LagSpec {
    pub fn resolve(&self, schedule: &Schedule) -> Result<Vec<BigInt>> {
        match self {
            LagSpec::List { values } => {
                if values.is_empty() {
                    return Err(Error::Config("empty lag list".into()));
                }
                Ok(values.iter().map(|&v| BigInt::from(v)).collect())
            }
            LagSpec::Range { from, to, step } => {
                if to < from || *step == 0 {
                    return Err(Error::Config(format!("bad lag range {from}..{to}/{step}")));
                }
                Ok((*from..=*to).step_by(*step as usize).map(BigInt::from).collect())
            }
            LagSpec::Heights { from_stage, to_stage, scale } => {
                if to_stage < from_stage {
                    return Err(Error::Config("bad stage range".into()));
                }
                (*from_stage..=*to_stage)
                    .map(|j| Ok(BigInt::from(schedule.height(j)?) * BigInt::from(*scale)))
                    .collect()
            }
        }
    }

    pub fn parse(s: &str) -> Result<LagSpec> {
        let err = || Error::Config(format!("cannot parse lags '{s}'"));
        if let Some(rest) = s.strip_prefix("heights:") {
            let mut parts = rest.split(':');
            let range = parts.next().ok_or_else(err)?;
            let scale: i64 = parts.next().unwrap_or("1").parse().map_err(|_| err())?;
            let (a, b) = range.split_once("..").ok_or_else(err)?;
            return Ok(LagSpec::Heights {
                from_stage: a.parse().map_err(|_| err())?,
                to_stage: b.parse().map_err(|_| err())?,
                scale,
            });
        }
        if let Some((a, rest)) = s.split_once("..") {
            let (b, step) = match rest.split_once(':') {
                Some((b, st)) => (b, st.parse().map_err(|_| err())?),
                None => (rest, 1),
            };
            return Ok(LagSpec::Range {
                from: a.parse().map_err(|_| err())?,
                to: b.parse().map_err(|_| err())?,
                step,
            });
        }
        let values: std::result::Result<Vec<i64>, _> =
            s.split(',').map(|v| v.trim().parse()).collect();
        Ok(LagSpec::List { values: values.map_err(|_| err())? })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum OperationConfig {
    Heights { stages: u64 },
    StageVectors { stages: u64 },
    TotalMeasure { stage: u64 },
    Refine { set: SetSpec, to_stage: u64 },
    Decode { stage: u64, level: u64, down_to: u64 },
    Correlate { a: SetSpec, b: SetSpec, lags: LagSpec, mode: Normalization },
    FastCorrelate { a: SetSpec, lags: LagSpec, mode: Normalization },
    WeakLimit { powers: LagSpec, window_lo: i64, window_hi: i64, test_stage: u64 },
    Averaging { stage: u64, window: u64, f: SetSpec },
    StatLemma { r: usize, l: usize, eps_num: u64, eps_den: u64, trials: u32 },
    Tensor { f: SetSpec, r_values: Vec<u64>, m_factor: u64, step: u64 },
    Anomaly { stage: u64 },
    Asymmetry { a: SetSpec, from_stage: u64, to_stage: u64 },
    ClassAlpha { a: SetSpec, windows: Vec<Vec<i64>> },
    Wiener { a: SetSpec, b: SetSpec, n: usize },
    Density { a: SetSpec, b: SetSpec, n: usize, grid: usize },
    Rigidity { a: SetSpec, lags: LagSpec },
    Mixing { a: SetSpec, b: SetSpec, lags: LagSpec },
    Injectivity { max_prime: u64 },
    SpacerHist { stage: u64, window: u64, centered: bool },
}

impl OperationConfig {
    pub fn tag(&self) -> &'static str {
        match self {
            OperationConfig::Heights { .. } => "heights",
            OperationConfig::StageVectors { .. } => "stage-vectors",
            OperationConfig::TotalMeasure { .. } => "total-measure",
            OperationConfig::Refine { .. } => "refine",
            OperationConfig::Decode { .. } => "decode",
            OperationConfig::Correlate { .. } => "correlate",
            OperationConfig::FastCorrelate { .. } => "fast-correlate",
            OperationConfig::WeakLimit { .. } => "weak-limit",
            OperationConfig::Averaging { .. } => "averaging",
            OperationConfig::StatLemma { .. } => "stat-lemma",
            OperationConfig::Tensor { .. } => "tensor",
            OperationConfig::Anomaly { .. } => "anomaly",
            OperationConfig::Asymmetry { .. } => "asymmetry",
            OperationConfig::ClassAlpha { .. } => "class-alpha",
            OperationConfig::Wiener { .. } => "wiener",
            OperationConfig::Density { .. } => "density",
            OperationConfig::Rigidity { .. } => "rigidity",
            OperationConfig::Mixing { .. } => "mixing",
            OperationConfig::Injectivity { .. } => "injectivity",
            OperationConfig::SpacerHist { .. } => "spacer-hist",
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ExperimentConfig {
    pub schedule: FamilySpec,
    pub operation: OperationConfig,
    /// Enclosure tolerance as decimal or fraction text; default `1e-6`.
    pub tolerance: Option<String>,
    pub size_cap: Option<u64>,
    pub max_extra_stages: Option<u64>,
    /// Seed for seeded operations (stat-lemma); stochastic families carry
    /// their own seed in the schedule spec.
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
    /// Fractional digits for decimal exports.
    pub digits: Option<u32>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<ExperimentConfig> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// FNV-1a over the canonical JSON encoding; deterministically
    /// identifies the inputs.
    pub fn hash(&self) -> String {
        let canonical =
            serde_json::to_string(&serde_json::to_value(self).expect("config serialises"))
                .expect("canonical json");
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for byte in canonical.as_bytes() {
            h ^= *byte as u64;
            h = h.wrapping_mul(0x1000_0000_01b3);
        }
        format!("{h:016x}")
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BudgetFlags {
    /// A stage budget ran out; the summary holds a partial enclosure.
    pub partial: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunRecord {
    pub config_hash: String,
    pub version: &'static str,
    pub operation: &'static str,
    pub wall_ms: u128,
    pub outputs: Vec<PathBuf>,
    pub budget: BudgetFlags,
    pub summary: serde_json::Value,
}

/// Execute one experiment; writes output files atomically when requested.
pub fn run(config: &ExperimentConfig) -> Result<RunRecord> {
    if let Some(threads) = config.threads {
        // ignore failure: the global pool may already exist
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let start = Instant::now();
    let schedule = match config.size_cap {
        Some(cap) => Schedule::with_materialize_cap(config.schedule.clone(), cap)?,
        None => Schedule::new(config.schedule.clone())?,
    };
    let mut opts = EngineOptions::default();
    if let Some(cap) = config.size_cap {
        opts.size_cap = cap;
    }
    if let Some(m) = config.max_extra_stages {
        opts.max_extra_stages = m;
    }
    let engine = Engine::with_options(schedule.clone(), opts);
    let tol = match &config.tolerance {
        Some(t) => parse_rational(t)?,
        None => pow10_neg(6),
    };
    if tol <= BigRational::from(BigInt::from(0)) {
        return Err(Error::Config("tolerance must be positive".into()));
    }
    let digits = config.digits.unwrap_or(12);

    let mut budget = BudgetFlags::default();
    let (summary, csv) = dispatch(config, &schedule, &engine, &tol, digits, &mut budget)?;

    let mut outputs = Vec::new();
    if let Some(path) = &config.output {
        let bytes = match config.format.unwrap_or(Format::Json) {
            Format::Json => serde_json::to_vec_pretty(&summary)
                .map_err(|e| Error::Config(e.to_string()))?,
            Format::Csv => csv
                .clone()
                .ok_or_else(|| {
                    Error::Config(format!(
                        "operation '{}' has no CSV representation",
                        config.operation.tag()
                    ))
                })?
                .into_bytes(),
        };
        export::atomic_write(path, &bytes)?;
        outputs.push(path.clone());
    }
    Ok(RunRecord {
        config_hash: config.hash(),
        version: env!("CARGO_PKG_VERSION"),
        operation: config.operation.tag(),
        wall_ms: start.elapsed().as_millis(),
        outputs,
        budget,
        summary,
    })
}

fn enclosure_or_partial(
    res: Result<crate::Enclosure>,
    budget: &mut BudgetFlags,
) -> Result<(crate::Enclosure, bool)> {
    match res {
        Ok(e) => Ok((e, false)),
        Err(Error::StageBudgetExceeded { partial }) => {
            budget.partial = true;
            Ok((partial, true))
        }
        Err(e) => Err(e),
    }
}

fn dispatch(
    config: &ExperimentConfig,
    schedule: &Schedule,
    engine: &Engine,
    tol: &BigRational,
    digits: u32,
    budget: &mut BudgetFlags,
) -> Result<(serde_json::Value, Option<String>)> {
    let cap = engine.options().size_cap;
    match &config.operation {
        OperationConfig::Heights { stages } => {
            let mut rows = Vec::new();
            let start = schedule.start_stage();
            for j in start..start + stages {
                rows.push(json!({
                    "stage": j,
                    "cut": schedule.cut_count(j)?,
                    "height": schedule.height(j)?.to_string(),
                    "level_measure": export::rational_json(&schedule.level_measure(j)?),
                }));
            }
            let mut csv = String::from("stage,cut,height\n");
            for row in &rows {
                csv.push_str(&format!(
                    "{},{},{}\n",
                    row["stage"], row["cut"],
                    row["height"].as_str().unwrap()
                ));
            }
            Ok((json!({ "family": schedule.spec().tag(), "rows": rows }), Some(csv)))
        }
        OperationConfig::StageVectors { stages } => {
            let mut rows = Vec::new();
            let start = schedule.start_stage();
            for j in start..start + stages {
                let spacers = schedule.spacers(j)?;
                rows.push(json!({
                    "stage": j,
                    "cut": schedule.cut_count(j)?,
                    "spacers": spacers.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                }));
            }
            Ok((json!({ "family": schedule.spec().tag(), "stages": rows }), None))
        }
        OperationConfig::TotalMeasure { stage } => {
            let tm = tower::total_measure(schedule, *stage)?;
            Ok((
                json!({
                    "stage": stage,
                    "lower": export::rational_json(&tm.lower),
                    "lower_decimal": export::decimal(&tm.lower, digits, export::Rounding::Down),
                    "upper": tm.upper.as_ref().map(export::rational_json),
                    "upper_decimal": tm.upper.as_ref()
                        .map(|u| export::decimal(u, digits, export::Rounding::Up)),
                    "finiteness": tm.finiteness,
                    "upper_is_limit": tm.upper_is_limit,
                }),
                None,
            ))
        }
        OperationConfig::Refine { set, to_stage } => {
            let a = set.realize(schedule, cap)?;
            let refined = tower::refine_set(schedule, &a, *to_stage, cap)?;
            Ok((
                json!({
                    "stage": refined.stage,
                    "height": schedule.height(refined.stage)?.to_string(),
                    "levels": refined.levels.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                    "measure": export::rational_json(&refined.measure(schedule)?),
                }),
                None,
            ))
        }
        OperationConfig::Decode { stage, level, down_to } => {
            let prov = tower::decode_level(schedule, *stage, &(*level).into(), *down_to)?;
            let value = match prov {
                tower::LevelProvenance::BaseLevel(l) => {
                    json!({ "kind": "base-level", "level": l.to_string() })
                }
                tower::LevelProvenance::Spacer { stage, column, offset } => json!({
                    "kind": "spacer", "stage": stage, "column": column,
                    "offset": offset.to_string()
                }),
            };
            Ok((value, None))
        }
        OperationConfig::Correlate { a, b, lags, mode } => {
            let a = a.realize(schedule, cap)?;
            let b = b.realize(schedule, cap)?;
            let lags = lags.resolve(schedule)?;
            let series = engine.correlation_series(&a, &b, &lags, tol, *mode)?;
            Ok((export::series_json(&series, digits), Some(export::series_csv(&series, digits))))
        }
        OperationConfig::FastCorrelate { a, lags, mode } => {
            let a = a.realize(schedule, cap)?;
            let lags = lags.resolve(schedule)?;
            let series = engine.base_correlation_fast(&a, &lags, *mode)?;
            Ok((export::series_json(&series, digits), Some(export::series_csv(&series, digits))))
        }
        OperationConfig::WeakLimit { powers, window_lo, window_hi, test_stage } => {
            let powers = powers.resolve(schedule)?;
            let fit = analysis::weak_limit_fit(
                engine,
                &powers,
                (*window_lo, *window_hi),
                *test_stage,
                tol,
            )?;
            Ok((
                json!({
                    "window": [fit.window.0, fit.window.1],
                    "coefficients": fit.coefficients,
                    "theta": fit.theta,
                    "residual": fit.residual,
                    "residual_l2": fit.residual_l2,
                    "test_stage": fit.test_stage,
                    "pairs": fit.pairs,
                }),
                None,
            ))
        }
        OperationConfig::Averaging { stage, window, f } => {
            let f = f.realize(schedule, cap)?;
            let rep = analysis::averaging_deviation(engine, *stage, *window, &f, tol)?;
            Ok((
                json!({
                    "stage": rep.stage,
                    "window": rep.window,
                    "deviation": export::enclosure_json(&rep.value, digits),
                    "distinct_differences": rep.histogram.len(),
                }),
                None,
            ))
        }
        OperationConfig::StatLemma { r, l, eps_num, eps_den, trials } => {
            let seed = config
                .seed
                .ok_or_else(|| Error::Config("stat-lemma requires a seed".into()))?;
            let sample = analysis::stat_lemma_mc(*r, *l, *eps_num, *eps_den, *trials, seed)?;
            Ok((serde_json::to_value(&sample).map_err(|e| Error::Config(e.to_string()))?, None))
        }
        OperationConfig::Tensor { f, r_values, m_factor, step } => {
            let f = f.realize(schedule, cap)?;
            let mut rows = Vec::new();
            for &r in r_values {
                let powers = analysis::slow_growth_powers(schedule, r, m_factor * r, *step)?;
                let res = analysis::tensor_closeness(engine, &f, r, &powers, tol)?;
                rows.push(serde_json::to_value(&res).map_err(|e| Error::Config(e.to_string()))?);
            }
            Ok((json!({ "rows": rows }), None))
        }
        OperationConfig::Anomaly { stage } => {
            let rep = analysis::staircase_anomaly(engine, *stage, tol)?;
            Ok((
                json!({
                    "stage": rep.stage,
                    "cut": rep.cut,
                    "anomaly": export::enclosure_json(&rep.value, digits),
                    "nu_a": export::enclosure_json(&rep.nu_a, digits),
                }),
                None,
            ))
        }
        OperationConfig::Asymmetry { a, from_stage, to_stage } => {
            let a = a.realize(schedule, cap)?;
            let mut rows = Vec::new();
            for j in *from_stage..=*to_stage {
                let (first, second) = analysis::asymmetry_test(engine, &a, j, tol)?;
                rows.push(json!({
                    "stage": j,
                    "forward": export::enclosure_json(&first, digits),
                    "reversed": export::enclosure_json(&second, digits),
                }));
            }
            Ok((json!({ "rows": rows }), None))
        }
        OperationConfig::ClassAlpha { a, windows } => {
            let a = a.realize(schedule, cap)?;
            let windows: Vec<Vec<BigInt>> = windows
                .iter()
                .map(|w| w.iter().map(|&n| BigInt::from(n)).collect())
                .collect();
            let rep = analysis::class_alpha(engine, &a, &windows, tol)?;
            Ok((
                json!({
                    "alpha": rep.alpha,
                    "per_window": rep
                        .per_window
                        .iter()
                        .map(|e| export::enclosure_json(e, digits))
                        .collect::<Vec<_>>(),
                }),
                None,
            ))
        }
        OperationConfig::Wiener { a, b, n } => {
            let a = a.realize(schedule, cap)?;
            let b = b.realize(schedule, cap)?;
            let lags: Vec<BigInt> = (0..*n).map(BigInt::from).collect();
            let series =
                engine.correlation_series(&a, &b, &lags, tol, Normalization::Centered)?;
            let w = analysis::wiener_average(&series, *n)?;
            Ok((json!({ "n": n, "wiener_average": w }), None))
        }
        OperationConfig::Density { a, b, n, grid } => {
            let a = a.realize(schedule, cap)?;
            let b = b.realize(schedule, cap)?;
            let lags: Vec<BigInt> = (0..*n).map(BigInt::from).collect();
            let series =
                engine.correlation_series(&a, &b, &lags, tol, Normalization::Centered)?;
            let density = analysis::spectral_density(&series, *n, *grid)?;
            let mut csv = String::from("angle,value\n");
            for (th, v) in &density {
                csv.push_str(&format!("{th},{v}\n"));
            }
            Ok((
                json!({
                    "n": n,
                    "points": density
                        .iter()
                        .map(|(th, v)| json!({ "angle": th, "value": v }))
                        .collect::<Vec<_>>(),
                }),
                Some(csv),
            ))
        }
        OperationConfig::Rigidity { a, lags } => {
            let a = a.realize(schedule, cap)?;
            let lags = lags.resolve(schedule)?;
            let mut rows = Vec::new();
            let mut csv = String::from("lag,lo,hi\n");
            for n in &lags {
                let (enc, _) =
                    enclosure_or_partial(engine.symmetric_difference(&a, n, tol), budget)?;
                let (lo, hi) = export::enclosure_strings(&enc, digits);
                csv.push_str(&format!("{n},{lo},{hi}\n"));
                rows.push(json!({ "lag": n.to_string(), "sym_diff": export::enclosure_json(&enc, digits) }));
            }
            Ok((json!({ "rows": rows }), Some(csv)))
        }
        OperationConfig::Mixing { a, b, lags } => {
            let a = a.realize(schedule, cap)?;
            let b = b.realize(schedule, cap)?;
            let lags = lags.resolve(schedule)?;
            let scan = analysis::mixing_scan(engine, &a, &b, &lags, tol)?;
            Ok((serde_json::to_value(&scan).map_err(|e| Error::Config(e.to_string()))?, None))
        }
        OperationConfig::Injectivity { max_prime } => {
            let mut rows = Vec::new();
            for p in primes_below(*max_prime) {
                let g = galois::primitive_root(p)?;
                let ok = (1..p).all(|w| galois::injectivity_window(p, g, w, None));
                rows.push(json!({ "prime": p, "generator": g, "injective": ok }));
            }
            Ok((json!({ "rows": rows }), None))
        }
        OperationConfig::SpacerHist { stage, window, centered } => {
            let hist = spacer_stats::spacer_sum_distribution(schedule, *stage, *window)?;
            let counts = if *centered {
                let offset = BigInt::from(*window)
                    * BigInt::from(match schedule.spec() {
                        FamilySpec::Ornstein { window, .. } => window.eval(*stage)?,
                        _ => 0,
                    });
                hist.centered(&offset)
            } else {
                hist.counts.clone()
            };
            Ok((
                json!({
                    "stage": stage,
                    "window": window,
                    "total": hist.total,
                    "counts": counts
                        .iter()
                        .map(|(v, c)| json!({ "value": v.to_string(), "count": c }))
                        .collect::<Vec<_>>(),
                }),
                None,
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_and_lag_parsing() {
        assert_eq!(SetSpec::parse("base@3").unwrap(), SetSpec::Base { stage: 3 });
        assert_eq!(
            SetSpec::parse("levels@4:0,2,5").unwrap(),
            SetSpec::Levels { stage: 4, levels: vec![0, 2, 5] }
        );
        assert_eq!(SetSpec::parse("odd@8").unwrap(), SetSpec::Odd { stage: 8 });
        assert!(SetSpec::parse("nope").is_err());

        assert_eq!(
            LagSpec::parse("0..10:2").unwrap(),
            LagSpec::Range { from: 0, to: 10, step: 2 }
        );
        assert_eq!(LagSpec::parse("1,5,9").unwrap(), LagSpec::List { values: vec![1, 5, 9] });
        assert_eq!(
            LagSpec::parse("heights:18..22:-1").unwrap(),
            LagSpec::Heights { from_stage: 18, to_stage: 22, scale: -1 }
        );
    }

    #[test]
    fn config_round_trip_and_hash_stability() {
        let cfg = ExperimentConfig {
            schedule: crate::family::preset("chacon-classical").unwrap(),
            operation: OperationConfig::Correlate {
                a: SetSpec::Base { stage: 2 },
                b: SetSpec::Base { stage: 2 },
                lags: LagSpec::Range { from: 0, to: 8, step: 1 },
                mode: Normalization::Raw,
            },
            tolerance: Some("1e-9".into()),
            size_cap: None,
            max_extra_stages: None,
            seed: None,
            output: None,
            format: None,
            threads: None,
            digits: None,
        };
        let text = cfg.to_toml().unwrap();
        let back = ExperimentConfig::from_toml(&text).unwrap();
        assert_eq!(cfg, back);
        assert_eq!(cfg.hash(), back.hash());
        let mut other = cfg.clone();
        other.tolerance = Some("1e-8".into());
        assert_ne!(cfg.hash(), other.hash());
    }

    #[test]
    fn run_correlate_and_rerun_identical() {
        let dir = std::env::temp_dir().join(format!("rank1-cfg-test-{}", std::process::id()));
        let out = dir.join("series.csv");
        let cfg = ExperimentConfig {
            schedule: crate::family::preset("chacon-classical").unwrap(),
            operation: OperationConfig::Correlate {
                a: SetSpec::Base { stage: 2 },
                b: SetSpec::Base { stage: 2 },
                lags: LagSpec::Range { from: 0, to: 6, step: 1 },
                mode: Normalization::Raw,
            },
            tolerance: Some("1e-9".into()),
            size_cap: None,
            max_extra_stages: None,
            seed: None,
            output: Some(out.clone()),
            format: Some(Format::Csv),
            threads: None,
            digits: Some(8),
        };
        let rec1 = run(&cfg).unwrap();
        let bytes1 = std::fs::read(&out).unwrap();
        let rec2 = run(&cfg).unwrap();
        let bytes2 = std::fs::read(&out).unwrap();
        assert_eq!(bytes1, bytes2);
        assert_eq!(rec1.config_hash, rec2.config_hash);
        assert!(!rec1.budget.partial);
        // the series CSV has a header plus 7 lags
        assert_eq!(bytes1.iter().filter(|&&b| b == b'\n').count(), 8);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn config_errors() {
        let cfg = ExperimentConfig {
            schedule: crate::family::preset("odometer").unwrap(),
            operation: OperationConfig::StatLemma {
                r: 100,
                l: 4,
                eps_num: 1,
                eps_den: 2,
                trials: 2,
            },
            tolerance: None,
            size_cap: None,
            max_extra_stages: None,
            seed: None, // missing: must error
            output: None,
            format: None,
            threads: None,
            digits: None,
        };
        assert!(matches!(run(&cfg), Err(Error::Config(_))));
        let mut bad_tol = cfg.clone();
        bad_tol.seed = Some(1);
        bad_tol.tolerance = Some("0".into());
        assert!(matches!(run(&bad_tol), Err(Error::Config(_))));
    }
}
