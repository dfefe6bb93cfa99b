use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {modulus:?} is reducible over F_{p}")]
    ReducibleModulus { modulus: Vec<u32>, p: u32 },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("field too large: {0}")]
    FieldTooLarge(String),
    #[error("element does not belong to the expected field")]
    ForeignElement,

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("variable index {index} out of range 1..={n}")]
    VariableOutOfRange { index: usize, n: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("the zero polynomial has no homogeneous decomposition")]
    ZeroPolynomial,
    #[error("exponent overflow")]
    ExponentOverflow,

    #[error("enumeration budget exceeded: {required} evaluations needed, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
    #[error("non-integral L-function coefficient at t^{0}")]
    NonIntegral(usize),
    #[error("degree mismatch: Lambda is not a polynomial of degree {expected} ({detail})")]
    DegreeMismatch { expected: usize, detail: String },
    #[error("no rational function with deg(num) <= {num} and deg(den) <= {den} matches the series")]
    NoRationalFunction { num: usize, den: usize },
    #[error("series too short: {needed} coefficients needed, {got} given")]
    InsufficientTerms { needed: usize, got: usize },
    #[error("root finding did not converge (last attempt at {0} digits)")]
    RootFinding(u32),

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("factorization mismatch: {0}")]
    FactorizationMismatch(String),
    #[error("non-isolated critical locus: the Jacobian quotient is infinite-dimensional")]
    NonIsolated,
    #[error("f is homogeneous, so it has no second-highest homogeneous part")]
    MissingDeltaPrime,

    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("truncation too small: guaranteed precision {guaranteed} < requested {requested}")]
    PrecisionTooSmall { requested: u32, guaranteed: u32 },
    #[error("newton iteration failed: {0}")]
    NewtonFailure(String),
    #[error("valuation bound violated: {0}")]
    ValuationBound(String),
    #[error("trace congruence failed at i = {i}: {detail}")]
    CongruenceFailure { i: usize, detail: String },
    #[error("invalid b-range parameters: need 1 <= e <= delta (e = {e}, delta = {delta})")]
    InvalidBRange { delta: u64, e: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
