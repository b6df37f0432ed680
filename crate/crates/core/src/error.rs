use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A constructor argument is outside its physical domain.
    #[error("invalid {field}: {value} (expected {expected})")]
    InvalidDomain {
        field: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// The 2x2 stationary system for the loss gauge is singular (e.g. a
    /// vacuum arm with eta < 1); callers fall back to direct minimisation.
    #[error("degenerate photon moments: stationary system for gamma' is singular")]
    DegenerateMoments,

    /// C_tilde = 0: the state carries no phase information, Δφ is unbounded.
    #[error("zero information: C_tilde = 0, phase sensitivity unbounded")]
    ZeroInformation,

    #[error("photon number must be positive, got {0}")]
    NonPositivePhotonNumber(f64),

    /// The threshold solver could not certify a root; this signals a formula
    /// bug (a monotonicity or sign-change assertion failed), not a user error.
    #[error("bracket failure in threshold solve: {0}")]
    BracketFailure(&'static str),

    /// Truncated-Fock construction leaked more probability than allowed.
    #[error("truncation leakage {leakage:.3e} at n_max = {n_max} exceeds 1e-8")]
    TruncationOverflow { leakage: f64, n_max: usize },

    /// Density matrix lost too much trace to truncation for a reliable
    /// eigendecomposition; raise n_max.
    #[error("ill-conditioned density matrix: trace deficit {0:.3e} exceeds 1e-6")]
    IllConditioned(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
