use thiserror::Error;

/// Errors raised by the character, fusion-ring and verification routines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    InvalidPrime(u64),

    #[error("level n must be at least 1, got {0}")]
    InvalidLevel(u32),

    #[error("level (p={p}, n={n}) is too large to index with 64-bit labels")]
    LevelTooLarge { p: u64, n: u32 },

    #[error(
        "character is not invariant under v -> v^-1 (exponent {exponent} differs from {mirror})"
    )]
    NonSymmetricInput { exponent: i64, mirror: i64 },

    #[error("basis element {index} is not unitriangular: {reason}")]
    BasisNotUnitriangular { index: u64, reason: String },

    #[error("label {a} is outside Lambda for (p={p}, n={n}); valid labels are 0..{bound}")]
    LabelOutOfRange { p: u64, n: u32, a: u64, bound: u64 },

    #[error("L_1 does not exist in Ver_{p}^{n}: Lambda is {{0}}")]
    NoSuchSimple { p: u64, n: u32 },

    #[error("negative multiplicity {value} at {label} in {context}")]
    NegativeMultiplicity {
        context: String,
        label: u64,
        value: String,
    },

    #[error("fusion table for (p={p}, n={n}) needs {required} entries, budget is {budget}")]
    BudgetExceeded {
        p: u64,
        n: u32,
        required: u128,
        budget: u128,
    },

    #[error("power iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: u32 },

    #[error("label {b} is not in Lambda at level {lower} for p={p}; Frobenius is undefined")]
    OutsideFrobeniusDomain { p: u64, lower: u32, b: u64 },

    #[error("stabilization regime violated: need 2r < p^(n-1) - p^(n-2), got p={p}, n={n}, r={r}")]
    BoundViolated { p: u64, n: u32, r: u32 },

    #[error("levels {lower} and {upper} disagree on the class of the {i}-th tensor power (p={p})")]
    StabilityFailure {
        p: u64,
        i: u32,
        lower: u32,
        upper: u32,
    },

    #[error("no Steinberg level r <= {r_max} makes the product tilting")]
    NotFound { r_max: u32 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown check id {0:?}")]
    UnknownCheckId(String),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("cannot parse character {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("fusion table file: {0}")]
    TableFormat(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidPrime(_) => "InvalidPrime",
            Error::InvalidLevel(_) => "InvalidLevel",
            Error::LevelTooLarge { .. } => "LevelTooLarge",
            Error::NonSymmetricInput { .. } => "NonSymmetricInput",
            Error::BasisNotUnitriangular { .. } => "BasisNotUnitriangular",
            Error::LabelOutOfRange { .. } => "LabelOutOfRange",
            Error::NoSuchSimple { .. } => "NoSuchSimple",
            Error::NegativeMultiplicity { .. } => "NegativeMultiplicity",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::OutsideFrobeniusDomain { .. } => "OutsideFrobeniusDomain",
            Error::BoundViolated { .. } => "BoundViolated",
            Error::StabilityFailure { .. } => "StabilityFailure",
            Error::NotFound { .. } => "NotFound",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::UnknownCheckId(_) => "UnknownCheckId",
            Error::Inconsistent(_) => "Inconsistent",
            Error::Parse { .. } => "Parse",
            Error::TableFormat(_) => "TableFormat",
            Error::Io(_) => "Io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
