use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported dimension {0}; only 2 (qubit) and 4 (two qubits) are allowed")]
    InvalidDimension(usize),
    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("trace {0} differs from 1")]
    NotUnitTrace(f64),
    #[error("operator has negative eigenvalue {0:e}")]
    NotPositive(f64),
    #[error("direction is not a unit vector (norm {0})")]
    NotUnitVector(f64),
    #[error("{name} = {value} is outside {range}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("outcome probability {0:e} is below the impossibility floor")]
    ImpossibleOutcome(f64),
    #[error("witness is already modulated")]
    AlreadyModulated,
    #[error("partial transpose has no negative eigenvalue; no witness can be derived")]
    PositivePartialTranspose,
    #[error("partial transpose has {0} negative eigenvalues; expected exactly one")]
    DegenerateNegativeSpectrum(usize),
    #[error("Jacobi sweeps did not converge (off-diagonal mass {0:e})")]
    NoConvergence(f64),
    #[error("no root in the parameter range: {0}")]
    NoRoot(String),
    #[error("infeasible constraint set: {0}")]
    Infeasible(String),
    #[error("operation does not support the {0} family")]
    UnsupportedFamily(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
