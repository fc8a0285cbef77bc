use crate::enclosure::Enclosure;

pub type Result<T> = std::result::Result<T, Error>;

/// Library-wide error type.
///
/// Budget errors ([`Error::SizeBudgetExceeded`], [`Error::StageBudgetExceeded`],
/// [`Error::ScaleExceeded`]) are loud by design: the engine never silently
/// widens or truncates a result.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid schedule at stage {stage}: {reason}")]
    InvalidSchedule { stage: u64, reason: String },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("size budget exceeded: {0}")]
    SizeBudgetExceeded(String),

    /// The requested tolerance was not reached within the configured number
    /// of extra stages. Carries the best enclosure obtained so far.
    #[error("stage budget exceeded: enclosure width {} after budget exhausted", .partial.width())]
    StageBudgetExceeded { partial: Enclosure },

    #[error("spacer-sum window out of range: stage {stage}, i={i}, p={p}, r={r}")]
    WindowOutOfRange { stage: u64, i: u64, p: u64, r: u64 },

    #[error("level index out of range: {0}")]
    OutOfRange(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("no irreducible polynomial found: {0}")]
    NotIrreducible(String),

    #[error("no multiplicative generator found: {0}")]
    NoGenerator(String),

    #[error("missing lags: {0}")]
    MissingLags(String),

    #[error("ill-conditioned fit: {0}")]
    IllConditioned(String),

    #[error("scale exceeded: {0}")]
    ScaleExceeded(String),

    #[error("unknown family: {0}")]
    UnknownFamily(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by an exhausted size/stage budget rather than
    /// by invalid input. The CLI maps these to a dedicated exit code.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::SizeBudgetExceeded(_)
                | Error::StageBudgetExceeded { .. }
                | Error::ScaleExceeded(_)
        )
    }
}
