use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported field d = {0}: expected one of -2, -3, -7, -11, -19, -43, -67, -163")]
    UnsupportedField(i64),
    #[error("zero modulus")]
    ZeroModulus,
    #[error("{divisor} does not divide {dividend}")]
    NotDivisible { divisor: String, dividend: String },
    #[error("{0} is not a prime of the ring of integers")]
    NotPrime(String),
    #[error("{0} is not coprime to the excluded primes and has no primary generator")]
    NotPrimaryEligible(String),
    #[error("modulus {0} has even norm")]
    EvenModulus(String),
    #[error("argument {0} is not coprime to 2")]
    EvenArgument(String),
    #[error("{0} and {1} are not coprime")]
    NotCoprime(String, String),
    #[error("family parameter {0} is not coprime to 2")]
    EvenC(String),
    #[error("no integer coprime to {0} is represented by the form")]
    NoRepresentableA(i64),
    #[error("support radius {0} outside the admissible range")]
    BadSupport(f64),
    #[error("X = {0} is too small, need X >= 16")]
    XTooSmall(u64),
    #[error("quadrature reached error {achieved:e}, target {target:e}")]
    QuadratureFailure { achieved: f64, target: f64 },
    #[error("norm bound {needed} exceeds the budget {cap}")]
    BudgetExceeded { needed: f64, cap: f64 },
    #[error("cannot parse ring element {0:?}")]
    Parse(String),
    #[error("value {0} does not fit the working integer type")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
