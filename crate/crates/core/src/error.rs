use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precision exhausted: need {needed}, have {available}")]
    PrecisionExhausted { needed: u32, available: u32 },

    #[error("element is not divisible by (zeta - 1)")]
    NotDivisible,

    #[error("element is not a unit")]
    NotInvertible,

    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0} is not a supported prime")]
    InvalidPrime(u64),

    #[error("invalid invariants (r={r}, s={s}, t={t}) for p={p}")]
    InvalidInvariants { p: u64, r: u32, s: u32, t: u64 },

    #[error("element does not generate the module")]
    NotAGenerator,

    #[error("module has rank {0}, expected at most 1")]
    RankExceeded(u32),

    #[error("relation subgroup is not invariant under g")]
    NotInvariant,

    #[error("work budget of {0} candidate bases exceeded")]
    BudgetExceeded(u64),

    #[error("submodule has index p^{actual}, expected p^{expected}")]
    IndexMismatch { expected: u32, actual: u32 },

    #[error("no canonical presentation matches the submodule")]
    NoMatch,

    #[error("classification mismatch: {0}")]
    ClassificationMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit code: 2 for malformed input, 3 for contract
    /// violations, 4 for exhausted precision or work budget.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::InvalidPrime(_) => 2,
            Error::PrecisionExhausted { .. } | Error::BudgetExceeded(_) => 4,
            _ => 3,
        }
    }
}
