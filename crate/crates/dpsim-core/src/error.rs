//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Gamma function evaluated at a nonpositive integer.
    #[error("gamma pole at z = {re}{im:+}i")]
    GammaPole { re: f64, im: f64 },

    /// Adaptive step control shrank the step below resolution.
    #[error("step size underflow at t = {t:.6} (h = {h:.3e}); the Hamiltonian is too stiff for the requested tolerance")]
    StepSizeUnderflow { t: f64, h: f64 },

    /// Integrated propagator drifted off the unit sphere.
    #[error("unitarity defect {defect:.3e} exceeds tolerance {tol:.3e}")]
    UnitarityLoss { defect: f64, tol: f64 },

    /// A series-order or slope fit failed to converge.
    #[error("order estimate did not converge: {msg} (residuals: {residuals:?})")]
    NonConvergent { msg: String, residuals: Vec<f64> },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
