use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of {function} at {at}")]
    Pole { function: &'static str, at: String },

    #[error("series diverges: {0}")]
    Divergence(String),

    #[error("did not converge: {0}")]
    NonConvergence(String),

    #[error("integrand not decayed at truncation point {t} (tail/peak = {ratio:e})")]
    Truncation { t: f64, ratio: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("point is outside the ball or too close to its boundary (1 - |z|^2 = {slack:e})")]
    OutsideBall { slack: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("imaginary residue {residue:e} exceeds the allowed {allowed:e}")]
    ImaginaryResidue { residue: f64, allowed: f64 },

    #[error("integration routes disagree: direct {direct}, pullback {pullback}")]
    RouteDisagreement { direct: f64, pullback: f64 },

    #[error("finite-difference step {0:e} is outside the usable range")]
    BadStep(f64),
}

impl Error {
    /// True for errors caused by invalid user input rather than numerics.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidParams(_)
                | Error::DimensionMismatch { .. }
                | Error::OutsideBall { .. }
                | Error::IndexOutOfRange { .. }
                | Error::BadStep(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
