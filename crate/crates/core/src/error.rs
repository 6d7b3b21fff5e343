use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("factorization budget exceeded while factoring {0}")]
    FactorizationBudgetExceeded(String),
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("zero is not a valid argument here")]
    ZeroInput,
    #[error("polynomial moduli differ ({0} vs {1})")]
    ModulusMismatch(u128, u128),
    #[error("modulus {0} exceeds the supported range (< 2^127)")]
    ModulusTooLarge(String),
    #[error("prime {0} divides the discriminant")]
    RamifiedPrime(String),
    #[error("degree {degree} exceeds the configured bound {bound}")]
    DegreeBudgetExceeded { degree: usize, bound: usize },
    #[error("prime {0} does not divide the discriminant")]
    NotADiscriminantPrime(String),
    #[error("polynomial is reducible over Q")]
    Reducible,
    #[error("b = {0} is not a unit; the case ledger only covers b = +1 or -1")]
    UnsupportedB(String),
    #[error("no index criterion applies to q = {0}")]
    EngineGap(String),
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("invalid trinomial: {0}")]
    InvalidTrinomial(String),
    #[error("independent monogenicity checks disagree: {0}")]
    Inconsistent(String),
    #[error("search budget exceeded: {0}")]
    SearchBudgetExceeded(String),
    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    /// True for errors that mean "could not decide" rather than "bad input".
    pub fn is_unknown(&self) -> bool {
        matches!(
            self,
            Error::FactorizationBudgetExceeded(_)
                | Error::DegreeBudgetExceeded { .. }
                | Error::SearchBudgetExceeded(_)
        )
    }
}
