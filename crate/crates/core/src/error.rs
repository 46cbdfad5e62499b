use thiserror::Error;

pub type Result<T, E = QcaError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QcaError {
    #[error("{name} = {value} is outside the admissible range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("site {site} out of range for a lattice of {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },
    #[error("size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },
    #[error("state has zero norm and cannot be normalized")]
    ZeroNorm,
    #[error("amplitude matrix is not antisymmetric (residual {residual:e})")]
    NotAntisymmetric { residual: f64 },
    #[error("single-particle states are parallel; antisymmetrized product vanishes")]
    ParallelStates,
    #[error("open boundary breaks unitarity at the lattice edges (residual {residual:e})")]
    NonUnitaryBoundary { residual: f64 },
    #[error("matrix is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },
    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("{0} requires a periodic boundary")]
    RequiresPeriodic(&'static str),
    #[error("{what} requires an even number of sites, got {n_sites}")]
    OddSites { what: &'static str, n_sites: usize },
    #[error("phase {phi} is not commensurate with a lattice of {n_sites} sites")]
    IncommensurateMomentum { phi: f64, n_sites: usize },
    #[error("{n_qubits} qubits exceeds the dense-simulation limit of {limit}")]
    TooManyQubits { n_qubits: usize, limit: usize },
    #[error("{sites} sites exceed the two-dimensional oracle limit of {limit}")]
    LatticeTooLarge { sites: usize, limit: usize },
    #[error("the zero vector has no step phase")]
    ZeroVector,
    #[error("sites must be distinct")]
    CoincidentSites,
    #[error("links {first:?} and {second:?} are distinct but parallel")]
    ParallelLinks { first: (i64, i64), second: (i64, i64) },
    #[error("observables for links {first:?} and {second:?} do not commute (residual {residual:e})")]
    NonCommutingLinks {
        first: ((i64, i64), (i64, i64)),
        second: ((i64, i64), (i64, i64)),
        residual: f64,
    },
    #[error("sites {from:?} and {to:?} are not joined by an oriented link")]
    NotLinked { from: (i64, i64), to: (i64, i64) },
    #[error("inconsistent joint eigenvalue assignment: {0}")]
    InconsistentEigenvalues(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}
