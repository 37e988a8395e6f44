use thiserror::Error;

/// Unified error type for construction, counting, and verification.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid extension degree {0} (must be in 1..={1})")]
    InvalidDegree(usize, usize),

    #[error("field order p^k = {p}^{k} does not fit the 64-bit budget")]
    FieldTooLarge { p: u64, k: usize },

    #[error("characteristic {0} too large (coefficients are stored as bytes; need p < 256)")]
    CharacteristicTooLarge(u64),

    #[error("division by zero in F_{0}")]
    DivisionByZero(u64),

    #[error("quadratic character is undefined in characteristic 2")]
    EvenCharacter,

    #[error("coefficient {0} is not reduced mod {1}")]
    UnreducedCoefficient(u64, u64),

    #[error("support of the polynomial is degenerate (contained in a line or a point)")]
    DegeneratePolygon,

    #[error("polygon is not strictly convex")]
    NotConvex,

    #[error("no curve of genus {genus} is available over F_{q} in family {family}: {detail}")]
    InfeasibleGenus {
        q: u64,
        genus: u64,
        family: &'static str,
        detail: String,
    },

    #[error("enumeration budget exceeded: needs {needed} steps, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("argument {what} = {got} outside supported range [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        got: u64,
        lo: u64,
        hi: u64,
    },

    #[error("no strictly convex {v}-gon fits in [0, {bound}]²")]
    NoSuchPolygon { v: usize, bound: i64 },

    #[error("unsupported operation for family {family}: {detail}")]
    UnsupportedFamily {
        family: &'static str,
        detail: String,
    },

    #[error("ramification data fits no genus: {0}")]
    NonIntegralGenus(String),

    #[error("malformed certificate: {0}")]
    BadCertificate(String),

    #[error("point counts are inconsistent with any genus-{genus} zeta function: {detail}")]
    InconsistentCounts { genus: u64, detail: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
