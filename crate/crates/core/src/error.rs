//! Error type shared by every module of the crate.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of the exact and numeric routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not unipotent: (M - I)^k != 0 for all k <= {dim}")]
    NotUnipotent { dim: usize },
    #[error("matrix is not nilpotent: N^{dim} != 0")]
    NotNilpotent { dim: usize },
    #[error("no power M^k with k <= {k_max} is unipotent")]
    NotQuasiUnipotent { k_max: usize },
    #[error("characteristic polynomial has rational roots (discriminant {0} is a square)")]
    RationalSpectrum(String),
    #[error("characteristic polynomial has non-real roots (discriminant {0})")]
    ComplexSpectrum(String),
    #[error("expected a 2x2 matrix, got {0}x{1}")]
    NotTwoByTwo(usize, usize),
    #[error("mixed radicands: sqrt({0}) and sqrt({1})")]
    MixedRadicand(u64, u64),
    #[error("radicand {0} is not a squarefree integer > 1")]
    BadRadicand(u64),
    #[error("N^{0} != 0: center too small for this nilpotent")]
    WrongCenter(usize),
    #[error("triple product N_{i}N_{j}N_{k} is not a multiple of the reference nilpotent")]
    NotProportional { i: usize, j: usize, k: usize },
    #[error("coupling tensor is not totally symmetric at ({i},{j},{k})")]
    AsymmetricTensor { i: usize, j: usize, k: usize },
    #[error("word is not composable: {0}")]
    NotComposable(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("image of {0} is not in the lattice spanned by the reference generators")]
    NotInQuotientLattice(String),
    #[error("fans computed to different depths ({0} vs {1})")]
    DepthMismatch(usize, usize),
    #[error("truncation degree {have} too small, need at least {need}")]
    TruncationTooSmall { have: usize, need: usize },
    #[error("identity fails; residual {0}")]
    IdentityFails(String),
    #[error("shift is not a quadratic form in A-periods; surviving term {0}")]
    NotAQuadraticShiftInA(String),
    #[error("elimination gives holonomic rank {got}, expected {expected}")]
    WrongHolonomicRank { got: usize, expected: usize },
    #[error("path passes within {distance:e} of the singular locus (margin {margin:e})")]
    SingularityTooClose { distance: f64, margin: f64 },
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
}
