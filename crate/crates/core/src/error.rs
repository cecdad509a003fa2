use thiserror::Error;

/// Errors produced by the descent engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial input could not be parsed: {0}")]
    PolynomialParse(String),

    #[error("argument must be nonzero")]
    ZeroArgument,

    #[error("factorization budget exhausted while factoring {0}")]
    FactorizationTimeout(String),

    #[error("{0} is a perfect square, so x^2 - d y^2 = 1 degenerates")]
    PerfectSquareInput(String),

    #[error("computation needs roughly {needed} decimal digits, budget is {budget}")]
    DigitBudgetExceeded { needed: u64, budget: u64 },

    #[error("f and g share a root over the algebraic closure (resultant is zero)")]
    CommonRoots,

    #[error("cubic twist construction needs a monic cubic f")]
    NotMonicCubic,

    #[error("curve is singular: f has a repeated root")]
    SingularCurve,

    #[error("f must be a binomial A x^p + B with A, B nonzero")]
    NotBinomial,

    #[error("unsupported curve shape: {0}")]
    UnsupportedShape(String),

    #[error("no exact solver exists for twist kind {0}")]
    NoExactBackend(String),

    #[error("external adapter unavailable: {0}")]
    AdapterUnavailable(String),

    #[error("external adapter protocol violation: {0}")]
    AdapterProtocol(String),

    #[error("external adapter timed out after {0} seconds")]
    AdapterTimeout(u64),

    #[error("twist cache unusable: {0}")]
    CacheCorrupt(String),

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
