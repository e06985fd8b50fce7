use thiserror::Error;

use crate::reduction::QrCertificate;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("reflection closure exceeded {0} elements; root data is not a finite crystallographic system")]
    NonFiniteSystem(usize),

    #[error("reflection along {0} does not preserve the weight lattice")]
    NotCrystallographic(String),

    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("polarization is degenerate: {0}")]
    DegeneratePolarization(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("inconsistent GKM data: {0}")]
    InconsistentGkm(String),

    #[error("box is too small for the root padding")]
    BoxTooSmall,

    #[error("no quasi-polynomial with period <= {period} and degree <= {degree} validates on the region")]
    NotQuasiPolynomial { period: i64, degree: u32 },

    #[error("point is not in the region: {0}")]
    NotInRegion(String),

    #[error("0 is not in the moment polytope; use the vanishing mode (m(k,0) = 0 for all k >= 1)")]
    ZeroNotInDelta,

    #[error("no admissible gamma found after {0} candidates; supply one with --gamma")]
    GammaSearchExhausted(usize),

    #[error("gamma rejected: {0}")]
    InvalidGamma(String),

    #[error("polytope p is degenerate: {0}")]
    EmptyP(String),

    #[error("polyhedron is unbounded")]
    Unbounded,

    #[error("polyhedron is empty")]
    EmptyPolytope,

    #[error("level {0} is not weakly regular")]
    NotWeaklyRegular(String),

    #[error("model is not of toric type: {0}")]
    NotToricModel(String),

    #[error("check failed with {} mismatches", .0.mismatches.len())]
    CheckFailed(Box<QrCertificate>),

    #[error("unknown example '{0}'")]
    UnknownExample(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the CLI: 2 for a failed check, 4 for an
    /// exhausted search, 3 for everything caused by the input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CheckFailed(_) => 2,
            Error::GammaSearchExhausted(_) | Error::NotQuasiPolynomial { .. } => 4,
            _ => 3,
        }
    }
}
