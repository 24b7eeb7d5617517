use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("characteristic mismatch: F_{left} vs F_{right}")]
    CharacteristicMismatch { left: u32, right: u32 },

    #[error("polynomial of degree {degree} exceeds the bound: degree must be below {bound}")]
    DegreeBound { degree: usize, bound: usize },

    #[error("zero has no multiplicative inverse")]
    ZeroHasNoInverse,

    #[error("{0} is not invertible modulo the given polynomial")]
    NotInvertible(String),

    #[error("{0} is not monic")]
    NotMonic(String),

    #[error("{0} is constant; a polynomial of degree at least 1 is required")]
    Constant(String),

    #[error("{poly} is not irreducible over F_{p}{}", factor.as_ref().map(|f| format!(" (factor: {f})")).unwrap_or_default())]
    NotIrreducible {
        poly: String,
        p: u32,
        factor: Option<String>,
    },

    #[error("enumeration of {size} items exceeds the guard of {guard}")]
    GuardExceeded { size: u128, guard: u64 },

    #[error("cannot parse polynomial {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("basis schedule is empty")]
    EmptySchedule,

    #[error("bases must be pairwise distinct, but {0} is repeated")]
    RepeatedBasis(String),

    #[error("schedule needs at least {needed} bases, got {found}")]
    ScheduleTooShort { needed: usize, found: usize },

    #[error("orientation vector has {found} entries but there are {expected} cycles")]
    OrientationLength { expected: usize, found: usize },

    #[error("only {available} irreducible polynomials of degree {n} exist, {needed} distinct ones are required")]
    TooFewIrreducibles { n: usize, available: u128, needed: usize },

    #[error("internal error: iteration cap {cap} exceeded while chaining from {start}")]
    IterationCap { cap: u64, start: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
