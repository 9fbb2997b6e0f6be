use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("factor index {index} out of range for {count} factors")]
    FactorOutOfRange { index: usize, count: usize },

    #[error("matrix is not Hermitian (residual {0:.3e})")]
    NotHermitian(f64),

    #[error("operator is not positive semi-definite (min eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("trace is {0}, expected 1")]
    BadTrace(f64),

    #[error("negative weight {0} in low-rank factorization")]
    NegativeWeight(f64),

    #[error("Kraus operators are not trace preserving (residual {0:.3e})")]
    NotTracePreserving(f64),

    #[error("matrix is not unitary (residual {0:.3e})")]
    NotUnitary(f64),

    #[error("not a permutation of 0..{0}")]
    NotBijective(usize),

    #[error("eigensolver failed to converge")]
    NoConvergence,

    #[error("n = {n} is not a positive multiple of d = {d}")]
    NotMultiple { n: usize, d: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("value {value} out of range 0..{d}")]
    ValueOutOfRange { value: usize, d: usize },

    #[error("problem size exceeds the feasibility guard: {0}")]
    Infeasible(String),

    #[error("probe is not invariant under the hidden parameter (spread {0:.3e})")]
    NonInvariantProbe(f64),

    #[error("every sampled pair was skipped")]
    AllSamplesSkipped,
}

pub type Result<T> = std::result::Result<T, Error>;
