//! Error type shared across the crate.

use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("matrix dimension {0}x{1} is not a valid symplectic size")]
    Dimension(usize, usize),
    #[error("matrix is not symplectic")]
    NotSymplectic,
    #[error("genus mismatch: {0} vs {1}")]
    GenusMismatch(usize, usize),
    #[error("C block has an odd entry; Fricke conjugate is not integral")]
    NotConjugable,
    #[error("no generating set registered for {0}")]
    MissingGenerators(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("imaginary part is not positive definite")]
    NotPositiveDefinite,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("required truncation radius {needed} exceeds the cap {cap}; point is ill-conditioned")]
    RadiusExceeded { needed: u32, cap: u32 },
    #[error("ill-conditioned point: {0}")]
    IllConditioned(String),
    #[error("numerical inconsistency: {0}")]
    Inconsistent(String),
    #[error("coset enumeration exceeded the element bound {0}")]
    EnumerationBound(usize),
    #[error("no factorizable representative found for class {0}")]
    NoRepresentative(usize),
    #[error("generator classes do not close into a subgroup")]
    NotSubgroup,
    #[error("unknown job {0:?}")]
    UnknownJob(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
