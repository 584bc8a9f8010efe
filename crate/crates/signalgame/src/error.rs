//! Error type shared by all solver and simulation modules.

use std::fmt;

/// Errors reported by matrix primitives, solvers, and the simulation harness.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A matrix contains NaN or infinite entries.
    InvalidMatrix { context: &'static str },
    /// A matrix required to be positive semidefinite has an eigenvalue below
    /// the PSD tolerance.
    NotPsd { min_eigenvalue: f64 },
    /// A matrix required to be strictly positive definite is singular or
    /// indefinite.
    NotPd { min_eigenvalue: f64 },
    /// Operands have incompatible dimensions.
    Dim { expected: usize, got: usize },
    /// A non-square matrix was passed where a square one is required.
    NotSquare { rows: usize, cols: usize },
    /// The scenario is not a cheap-talk instance (noisy channel or priced
    /// transmission).
    NotCheapTalk { reason: &'static str },
    /// The scenario is not a signaling instance (zero power price); the
    /// cheap-talk solver applies instead.
    NotSignaling,
    /// A candidate posterior covariance violates the Loewner feasibility
    /// interval.
    Infeasible { reason: &'static str },
    /// A negative transmission power budget.
    InvalidPower { power: f64 },
    /// Scenario parameters violate a model precondition.
    InvalidScenario { reason: &'static str },
    /// The sensitivity matrix is not a scalar multiple of the identity.
    NotIsotropic,
    /// Exhaustive search would exceed the subset-enumeration cap.
    TooLarge { dim: usize, max: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidMatrix { context } => {
                write!(f, "matrix has non-finite entries ({context})")
            }
            Self::NotPsd { min_eigenvalue } => {
                write!(
                    f,
                    "matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})"
                )
            }
            Self::NotPd { min_eigenvalue } => {
                write!(
                    f,
                    "matrix is not positive definite (min eigenvalue {min_eigenvalue:e})"
                )
            }
            Self::Dim { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Self::NotSquare { rows, cols } => {
                write!(f, "matrix must be square, got {rows}x{cols}")
            }
            Self::NotCheapTalk { reason } => {
                write!(f, "not a cheap-talk scenario: {reason}")
            }
            Self::NotSignaling => {
                write!(f, "power price is zero; use the cheap-talk solver")
            }
            Self::Infeasible { reason } => {
                write!(f, "infeasible posterior covariance: {reason}")
            }
            Self::InvalidPower { power } => {
                write!(f, "transmission power must be nonnegative, got {power}")
            }
            Self::InvalidScenario { reason } => {
                write!(f, "invalid scenario: {reason}")
            }
            Self::NotIsotropic => {
                write!(f, "sensitivity matrix is not isotropic (a*I)")
            }
            Self::TooLarge { dim, max } => {
                write!(f, "dimension {dim} exceeds exhaustive-search cap {max}")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
