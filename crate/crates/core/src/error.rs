use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Pauli term: indices ({mu}, {nu}) must lie in 0..=3")]
    InvalidTerm { mu: u8, nu: u8 },

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid ribbon: {0}")]
    InvalidRibbon(String),

    #[error("invalid k-grid: {0}")]
    InvalidGrid(String),

    /// Eigensolver or root finder failed to converge.
    #[error("numerical failure at {context}: {reason}")]
    Numerical { context: String, reason: String },

    #[error("spectrum carries no boundary-weight data")]
    MissingLocalization,

    #[error("spectrum is empty after applying filter `{0}`")]
    EmptySpectrum(String),

    #[error("malformed spectrum grouping: {0}")]
    MalformedGrouping(String),

    #[error("reference energy {re}{im:+}i lies within {distance:.3e} of the sampled spectrum")]
    ReferenceOnSpectrum { re: f64, im: f64, distance: f64 },

    #[error("phase step of {step:.3} rad exceeds pi/2; refine the momentum sampling")]
    PhaseAmbiguity { step: f64 },

    #[error("accumulated winding {cycles:.4} is not within 0.05 of an integer")]
    NonIntegerWinding { cycles: f64 },

    #[error("degenerate characteristic polynomial: {0}")]
    DegeneratePolynomial(String),

    #[error("on-site pattern undefined: perturbation has off-diagonal entries (max {0:.3e})")]
    NotDiagonal(f64),

    #[error("invalid scan: {0}")]
    InvalidScan(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn numerical(context: impl Into<String>, reason: impl std::fmt::Display) -> Self {
        Error::Numerical {
            context: context.into(),
            reason: reason.to_string(),
        }
    }
}
