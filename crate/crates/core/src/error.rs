use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("grid size {0} is not a power of two >= 8")]
    GridSize(usize),

    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("grid mismatch: (n={left_n}, L={left_len}) vs (n={right_n}, L={right_len})")]
    GridMismatch {
        left_n: usize,
        left_len: f64,
        right_n: usize,
        right_len: f64,
    },

    #[error("background level mismatch: {0} vs {1}")]
    RhoMismatch(f64, f64),

    #[error("non-finite value encountered at t = {time}")]
    NonFinite { time: f64 },

    #[error("trajectory has {found} records, at least {needed} required")]
    InsufficientRecords { found: usize, needed: usize },

    #[error("trajectory records are not uniformly spaced in time")]
    NonUniformRecords,

    #[error("parameters (alpha={alpha}, beta={beta}) are outside the integrable family beta = ±|alpha| != 0")]
    NotIntegrable { alpha: f64, beta: f64 },

    #[error("quadrature did not converge: achieved error estimate {achieved:e}")]
    Quadrature { achieved: f64 },

    #[error("state is not flat near the box seam: max ||u|-rho| = {gap:e} exceeds {tol:e}")]
    SeamViolation { gap: f64, tol: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            reason: reason.into(),
        }
    }
}
