//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    /// A constructor or operation received data violating a precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error("quadrature did not converge over [{a}, {b}]: error estimate {estimate:.3e} > tolerance {tolerance:.3e} after {evals} evaluations")]
    QuadratureNonConvergence {
        a: f64,
        b: f64,
        estimate: f64,
        tolerance: f64,
        evals: usize,
    },

    /// A model evaluation produced a non-finite value.
    #[error("non-finite value from {context} at (t={t}, x={x:?}, u={u})")]
    NonFiniteEvaluation {
        context: &'static str,
        t: f64,
        x: Vec<f64>,
        u: f64,
    },

    /// The supplied analytic derivative disagrees with a finite-difference probe.
    #[error("derivative consistency check failed: {0}")]
    DerivativeMismatch(String),

    /// Time step underflowed while enforcing the CFL restriction.
    #[error("CFL time step underflow at t={t}: dt={dt:.3e}")]
    CflUnderflow { t: f64, dt: f64 },

    /// The numerical solution left the admissible range.
    #[error("solution blow-up detected at t={t}: |u|={magnitude:.3e} exceeds {limit:.3e}")]
    BlowUp { t: f64, magnitude: f64, limit: f64 },

    /// A residual evaluation was asked for data the field does not carry.
    #[error("missing trace data: {0}")]
    MissingTrace(String),

    /// Test-function support does not fit the field extent.
    #[error("test-function support mismatch: {0}")]
    SupportMismatch(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
