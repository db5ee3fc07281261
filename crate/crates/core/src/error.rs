use thiserror::Error;

/// Errors raised by the library.
///
/// Every variant maps onto one machine-readable category (see
/// [`Error::category`]) and one process exit code used by the command line
/// front end.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// Positive probability where the reference measure has none.
    #[error("non-equivalent measures at bucket {bucket} (x = {x}): {detail}")]
    NonEquivalence { bucket: usize, x: f64, detail: String },

    #[error("arbitrage in inputs: negative implied mass {negative_fraction:.4} exceeds tolerance {tolerance}")]
    Arbitrage { negative_fraction: f64, tolerance: f64 },

    #[error("infeasible view: {0}")]
    InfeasibleView(String),

    #[error("coverage error: {0}")]
    Coverage(String),

    #[error("unsupported view: {0}")]
    UnsupportedView(String),

    #[error("rank-deficient basis: {instrument} is collinear with {}", collinear_with.join(", "))]
    RankDeficient { instrument: String, collinear_with: Vec<String> },

    #[error("index wipeout: {0}")]
    Wipeout(String),
}

impl Error {
    pub fn category(&self) -> &'static str {
        match self {
            Error::Argument(_) => "argument",
            Error::Domain(_) => "domain",
            Error::NonEquivalence { .. } => "non_equivalence",
            Error::Arbitrage { .. } => "arbitrage",
            Error::InfeasibleView(_) => "infeasible_view",
            Error::Coverage(_) => "coverage",
            Error::UnsupportedView(_) => "unsupported_view",
            Error::RankDeficient { .. } => "rank_deficient",
            Error::Wipeout(_) => "wipeout",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Argument(_) => 5,
            Error::Domain(_) => 6,
            Error::NonEquivalence { .. } => 7,
            Error::Arbitrage { .. } => 8,
            Error::InfeasibleView(_) => 9,
            Error::Coverage(_) => 10,
            Error::UnsupportedView(_) => 11,
            Error::RankDeficient { .. } => 12,
            Error::Wipeout(_) => 13,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn argument(msg: impl Into<String>) -> Error {
    Error::Argument(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
