use thiserror::Error;

/// Errors raised across the engine. Variant names follow the failure they
/// signal; the payload names the violated condition where one exists.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a subgroup: generator {0} is not contained in the larger group")]
    NotASubgroup(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero has no value")]
    ZeroHasNoValue,
    #[error("precision exhausted: result is zero to the tracked precision {0}")]
    PrecisionExhausted(String),
    #[error("p-th root not representable in the coefficient model: {0}")]
    RootNotRepresentable(String),
    #[error("element has negative value")]
    NegativeValue,
    #[error("element is not a 1-unit")]
    NotAOneUnit,
    #[error("operation requires value-transcendental mode")]
    RtMode,
    #[error("operation requires an element of positive value")]
    PositiveValueRequired,
    #[error("operation requires an element of negative value")]
    NonNegativeValue,
    #[error("1-unit level {level} is not above the root threshold {threshold}")]
    LevelTooLow { level: String, threshold: String },
    #[error("rewrite rule {rule} not applicable: {violated}")]
    RuleNotApplicable { rule: String, violated: String },
    #[error("generator is zero")]
    ZeroGenerator,
    #[error("malformed normal form: {0}")]
    MalformedNormalForm(String),
    #[error("basis violation: {0}")]
    BasisViolation(String),
    #[error("quotient {0} is not a power of p")]
    NotAPPower(String),
    #[error("e*f does not divide n")]
    NotDivisible,
    #[error("fundamental inequality violated: slack {0}")]
    Violated(i64),
    #[error("rational rank {0} unsupported (at most 1 independent direction)")]
    UnsupportedRank(u32),
    #[error("syntax error at {position}: expected {expected}")]
    SyntaxError { position: usize, expected: String },
    #[error("x-exponents must be integers (at {0})")]
    RationalExponentOnX(usize),
    #[error("configuration mismatch: {0}")]
    ConfigMismatch(String),
    #[error("characteristic mismatch: {0}")]
    CharacteristicMismatch(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
