use thiserror::Error;

/// Errors produced by the QFI library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    /// The purity term of the Gaussian QFI is singular at P = 1 with a
    /// non-vanishing purity derivative.
    #[error("pure-state boundary: P = {purity}, dP = {d_purity:e}")]
    PureStateBoundary { purity: f64, d_purity: f64 },

    #[error("no steady state exists for an undamped oscillator")]
    NoSteadyState,

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("Fock truncation too small: tail population {tail:e} at dim {dim}; try dim >= {suggested_dim}")]
    Truncation {
        tail: f64,
        dim: usize,
        suggested_dim: usize,
    },

    #[error("integration step {dt} violates the RK4 stability bound (dt * rate = {product:.3} > {limit})")]
    StepSize { dt: f64, product: f64, limit: f64 },

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
