use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("weight exponent must be positive, got {0}")]
    NonPositiveExponent(f64),

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("invalid table weight: {0}")]
    InvalidTable(String),

    #[error("block ratio too small: n[{k}] = {got} but at least {need} is required")]
    RatioTooSmall { k: usize, got: u64, need: u64 },

    #[error("block index n[{k}] exceeds the integer budget {budget}")]
    Overflow { k: usize, budget: u64 },

    #[error("gaussian model needs sigma^2 <= 1, got sigma = {0}")]
    BadSigma(f64),

    #[error("model `{0}` produces complex samples; use the analytic flavor")]
    ComplexModel(&'static str),

    #[error("block sequence is empty")]
    EmptyBlocks,

    #[error("degree budget exceeded: {0}")]
    DegreeBudget(String),

    #[error("flavor mismatch: {0}")]
    FlavorMismatch(String),

    #[error("radius {0} is outside [0, 1]")]
    RadiusOutOfRange(f64),

    #[error("covering too coarse: degree {degree} times radius {delta} is {product} >= 1")]
    CoveringTooCoarse {
        degree: usize,
        delta: f64,
        product: f64,
    },

    #[error("empty range: {0}")]
    EmptyRange(String),

    #[error("blocks end at {blocks_end} but the scheme reaches degree {degree}")]
    BlocksTooShort { blocks_end: u64, degree: usize },

    #[error("estimated work {estimated:.3e} exceeds budget {budget:.3e}")]
    BudgetExceeded { estimated: f64, budget: f64 },

    #[error("growth fit needs at least 3 radii, got {0}")]
    InsufficientRadii(usize),

    #[error("report kind `{report}` cannot produce plot data of kind `{requested}`")]
    KindMismatch { report: String, requested: String },

    #[error("invalid configuration at `{pointer}`: {message}")]
    ConfigInvalid { pointer: String, message: String },

    #[error("unknown subcommand `{0}`")]
    UnknownSubcommand(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cannot regenerate scheme from provenance `{0}`")]
    NotRegenerable(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Stable machine-readable code, used in CLI diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonPositiveExponent(_) => "NON_POSITIVE_EXPONENT",
            Error::Domain(_) => "DOMAIN",
            Error::InvalidTable(_) => "INVALID_TABLE",
            Error::RatioTooSmall { .. } => "RATIO_TOO_SMALL",
            Error::Overflow { .. } => "OVERFLOW",
            Error::BadSigma(_) => "BAD_SIGMA",
            Error::ComplexModel(_) => "COMPLEX_MODEL",
            Error::EmptyBlocks => "EMPTY_BLOCKS",
            Error::DegreeBudget(_) => "DEGREE_BUDGET",
            Error::FlavorMismatch(_) => "FLAVOR_MISMATCH",
            Error::RadiusOutOfRange(_) => "RADIUS_OUT_OF_RANGE",
            Error::CoveringTooCoarse { .. } => "COVERING_TOO_COARSE",
            Error::EmptyRange(_) => "EMPTY_RANGE",
            Error::BlocksTooShort { .. } => "BLOCKS_TOO_SHORT",
            Error::BudgetExceeded { .. } => "BUDGET_EXCEEDED",
            Error::InsufficientRadii(_) => "INSUFFICIENT_RADII",
            Error::KindMismatch { .. } => "KIND_MISMATCH",
            Error::ConfigInvalid { .. } => "CONFIG_INVALID",
            Error::UnknownSubcommand(_) => "UNKNOWN_SUBCOMMAND",
            Error::InvalidArgument(_) => "INVALID_ARGUMENT",
            Error::NotRegenerable(_) => "NOT_REGENERABLE",
            Error::Io { .. } => "IO",
            Error::Json(_) => "JSON",
            Error::Csv(_) => "CSV",
        }
    }

    /// Whether the error stems from user input rather than an internal failure.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io { .. } | Error::Csv(_))
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
