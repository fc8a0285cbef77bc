//! Thin command-line front end. Every subcommand builds an experiment
//! config and hands it to the library runner; `run --config file.toml`
//! executes a stored config directly. Exit codes: 0 success, 2 config or
//! parameter error, 3 budget exceeded (partial output flagged).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rank1::config::{
    run, ExperimentConfig, Format, LagSpec, OperationConfig, SetSpec,
};
use rank1::engine::Normalization;
use rank1::family::{self, FamilySpec};
use rank1::{Error, Result};

#[derive(Parser)]
#[command(name = "rank1", version, about = "rank-one cutting-and-stacking constructions with exact enclosures")]
struct Cli {
    /// Family tag (see `families`); presets fill the parameters.
    #[arg(long, global = true)]
    family: Option<String>,
    /// TOML file with a full family spec (overrides --family).
    #[arg(long, global = true)]
    schedule: Option<PathBuf>,
    /// Enclosure tolerance (decimal or fraction).
    #[arg(long, global = true)]
    tol: Option<String>,
    /// Extra stages the escape iteration may climb.
    #[arg(long, global = true)]
    max_stage: Option<u64>,
    /// Refinement / transfer node budget.
    #[arg(long, global = true)]
    size_cap: Option<u64>,
    /// Seed for seeded operations.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format: json or csv.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Worker threads (0 = rayon default).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Fractional digits in decimal exports.
    #[arg(long, global = true)]
    digits: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the family catalog.
    Families,
    /// Show one family's definition and parameters.
    Describe { tag: String },
    /// Heights, cut counts and level measures for the first stages.
    Heights {
        #[arg(long, default_value_t = 30)]
        stages: u64,
    },
    /// The first stage vectors (r_j, spacers) as JSON.
    Stages {
        #[arg(long, default_value_t = 6)]
        stages: u64,
    },
    /// Total-measure enclosure at a stage.
    Measure {
        #[arg(long)]
        stage: u64,
    },
    /// Express a level set at a deeper stage.
    Refine {
        #[arg(long)]
        set: String,
        #[arg(long)]
        to_stage: u64,
    },
    /// Classify a level of a deep stage against a base stage.
    Decode {
        #[arg(long)]
        stage: u64,
        #[arg(long)]
        level: u64,
        #[arg(long)]
        down_to: u64,
    },
    /// Correlation series mu(T^n A ∩ B).
    Correlate {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        lags: String,
        #[arg(long, default_value = "raw")]
        mode: String,
    },
    /// Meet-in-the-middle fast path for self-correlations.
    FastCorrelate {
        #[arg(long)]
        a: String,
        #[arg(long)]
        lags: String,
        #[arg(long, default_value = "raw")]
        mode: String,
    },
    /// Fit a weak limit of powers against a window of basis powers.
    WeakLimit {
        #[arg(long)]
        powers: String,
        #[arg(long, default_value_t = 0)]
        window_lo: i64,
        #[arg(long, default_value_t = 10)]
        window_hi: i64,
        #[arg(long, default_value_t = 4)]
        test_stage: u64,
    },
    /// Averaging-operator deviation from the constant projection.
    Averaging {
        #[arg(long)]
        stage: u64,
        #[arg(long)]
        window: u64,
        #[arg(long)]
        f: String,
    },
    /// Monte Carlo for the window-sum statistic D(f, m).
    StatLemma {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = 1)]
        eps_num: u64,
        #[arg(long, default_value_t = 10)]
        eps_den: u64,
        #[arg(long, default_value_t = 200)]
        trials: u32,
    },
    /// Tensor closeness of sampled powers to Cesàro averages.
    Tensor {
        #[arg(long)]
        f: String,
        #[arg(long, value_delimiter = ',', default_values_t = [2u64, 3, 4, 5])]
        r_values: Vec<u64>,
        #[arg(long, default_value_t = 2)]
        m_factor: u64,
        #[arg(long, default_value_t = 2)]
        step: u64,
    },
    /// Staircase anomaly at one stage (odd levels vs lag 2 h_j).
    Anomaly {
        #[arg(long)]
        stage: u64,
    },
    /// Triple-correlation asymmetry over a stage range.
    Asymmetry {
        #[arg(long)]
        a: String,
        #[arg(long)]
        from_stage: u64,
        #[arg(long)]
        to_stage: u64,
    },
    /// Conditional measure of unions of shifted copies.
    ClassAlpha {
        #[arg(long)]
        a: String,
        /// Windows as semicolon-separated lag lists, e.g. "0;1,2,3".
        #[arg(long)]
        windows: String,
    },
    /// Wiener average of a centered series.
    Wiener {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        n: usize,
    },
    /// Fejér spectral density on a grid.
    Density {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 256)]
        grid: usize,
    },
    /// Symmetric differences mu(T^n A △ A) over candidate lags.
    Rigidity {
        #[arg(long)]
        a: String,
        #[arg(long)]
        lags: String,
    },
    /// Sup of |nu(T^n A ∩ B) - nu(A) nu(B)| over a lag range.
    Mixing {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        lags: String,
    },
    /// Injectivity of {q^i} - {q^(i+p)} for all primes below a bound.
    Injectivity {
        #[arg(long, default_value_t = 100)]
        max_prime: u64,
    },
    /// Histogram of windowed spacer sums at one stage.
    SpacerHist {
        #[arg(long)]
        stage: u64,
        #[arg(long)]
        window: u64,
        #[arg(long, default_value_t = false)]
        centered: bool,
    },
    /// Execute a stored experiment config.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

fn parse_mode(s: &str) -> Result<Normalization> {
    match s {
        "raw" => Ok(Normalization::Raw),
        "normalized" => Ok(Normalization::Normalized),
        "centered" => Ok(Normalization::Centered),
        other => Err(Error::Config(format!("unknown mode '{other}'"))),
    }
}

fn parse_format(s: &str) -> Result<Format> {
    match s {
        "json" => Ok(Format::Json),
        "csv" => Ok(Format::Csv),
        other => Err(Error::Config(format!("unknown format '{other}'"))),
    }
}

fn family_spec(cli: &Cli) -> Result<FamilySpec> {
    if let Some(path) = &cli.schedule {
        let text = std::fs::read_to_string(path)?;
        return toml::from_str(&text).map_err(|e| Error::Config(e.to_string()));
    }
    match &cli.family {
        Some(tag) => family::preset(tag),
        None => Err(Error::Config("missing --family or --schedule".into())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(&cli) {
        Ok(partial) => {
            if partial {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_budget() {
                ExitCode::from(3)
            } else if matches!(e, Error::Io(_)) {
                ExitCode::FAILURE
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn main_inner(cli: &Cli) -> Result<bool> {
    // catalog commands need no schedule
    match &cli.command {
        Command::Families => {
            let cat = family::catalog();
            println!("{}", serde_json::to_string_pretty(&cat).unwrap());
            return Ok(false);
        }
        Command::Describe { tag } => {
            let info = family::describe(tag)?;
            println!("{}", serde_json::to_string_pretty(&info).unwrap());
            return Ok(false);
        }
        Command::Run { config } => {
            let text = std::fs::read_to_string(config)?;
            let cfg = ExperimentConfig::from_toml(&text)?;
            let record = run(&cfg)?;
            println!("{}", serde_json::to_string_pretty(&record).unwrap());
            return Ok(record.budget.partial);
        }
        _ => {}
    }

    let operation = match &cli.command {
        Command::Heights { stages } => OperationConfig::Heights { stages: *stages },
        Command::Stages { stages } => OperationConfig::StageVectors { stages: *stages },
        Command::Measure { stage } => OperationConfig::TotalMeasure { stage: *stage },
        Command::Refine { set, to_stage } => {
            OperationConfig::Refine { set: SetSpec::parse(set)?, to_stage: *to_stage }
        }
        Command::Decode { stage, level, down_to } => {
            OperationConfig::Decode { stage: *stage, level: *level, down_to: *down_to }
        }
        Command::Correlate { a, b, lags, mode } => OperationConfig::Correlate {
            a: SetSpec::parse(a)?,
            b: SetSpec::parse(b)?,
            lags: LagSpec::parse(lags)?,
            mode: parse_mode(mode)?,
        },
        Command::FastCorrelate { a, lags, mode } => OperationConfig::FastCorrelate {
            a: SetSpec::parse(a)?,
            lags: LagSpec::parse(lags)?,
            mode: parse_mode(mode)?,
        },
        Command::WeakLimit { powers, window_lo, window_hi, test_stage } => {
            OperationConfig::WeakLimit {
                powers: LagSpec::parse(powers)?,
                window_lo: *window_lo,
                window_hi: *window_hi,
                test_stage: *test_stage,
            }
        }
        Command::Averaging { stage, window, f } => OperationConfig::Averaging {
            stage: *stage,
            window: *window,
            f: SetSpec::parse(f)?,
        },
        Command::StatLemma { r, l, eps_num, eps_den, trials } => OperationConfig::StatLemma {
            r: *r,
            l: *l,
            eps_num: *eps_num,
            eps_den: *eps_den,
            trials: *trials,
        },
        Command::Tensor { f, r_values, m_factor, step } => OperationConfig::Tensor {
            f: SetSpec::parse(f)?,
            r_values: r_values.clone(),
            m_factor: *m_factor,
            step: *step,
        },
        Command::Anomaly { stage } => OperationConfig::Anomaly { stage: *stage },
        Command::Asymmetry { a, from_stage, to_stage } => OperationConfig::Asymmetry {
            a: SetSpec::parse(a)?,
            from_stage: *from_stage,
            to_stage: *to_stage,
        },
        Command::ClassAlpha { a, windows } => {
            let windows: Result<Vec<Vec<i64>>> = windows
                .split(';')
                .map(|w| {
                    w.split(',')
                        .map(|v| {
                            v.trim()
                                .parse()
                                .map_err(|_| Error::Config(format!("bad window entry '{v}'")))
                        })
                        .collect()
                })
                .collect();
            OperationConfig::ClassAlpha { a: SetSpec::parse(a)?, windows: windows? }
        }
        Command::Wiener { a, b, n } => {
            OperationConfig::Wiener { a: SetSpec::parse(a)?, b: SetSpec::parse(b)?, n: *n }
        }
        Command::Density { a, b, n, grid } => OperationConfig::Density {
            a: SetSpec::parse(a)?,
            b: SetSpec::parse(b)?,
            n: *n,
            grid: *grid,
        },
        Command::Rigidity { a, lags } => {
            OperationConfig::Rigidity { a: SetSpec::parse(a)?, lags: LagSpec::parse(lags)? }
        }
        Command::Mixing { a, b, lags } => OperationConfig::Mixing {
            a: SetSpec::parse(a)?,
            b: SetSpec::parse(b)?,
            lags: LagSpec::parse(lags)?,
        },
        Command::Injectivity { max_prime } => {
            OperationConfig::Injectivity { max_prime: *max_prime }
        }
        Command::SpacerHist { stage, window, centered } => OperationConfig::SpacerHist {
            stage: *stage,
            window: *window,
            centered: *centered,
        },
        Command::Families | Command::Describe { .. } | Command::Run { .. } => unreachable!(),
    };

    let config = ExperimentConfig {
        schedule: family_spec(cli)?,
        operation,
        tolerance: cli.tol.clone(),
        size_cap: cli.size_cap,
        max_extra_stages: cli.max_stage,
        seed: cli.seed,
        output: cli.out.clone(),
        format: cli.format.as_deref().map(parse_format).transpose()?,
        threads: cli.threads,
        digits: cli.digits,
    };
    let record = run(&config)?;
    println!("{}", serde_json::to_string_pretty(&record).unwrap());
    Ok(record.budget.partial)
}
