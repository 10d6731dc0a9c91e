//! Error type shared by the whole engine.

use thiserror::Error;

/// Errors produced by series arithmetic and identity evaluation.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum QError {
    /// Two values from different coefficient domains were combined.
    #[error("coefficient domain mismatch: {0} vs {1}")]
    DomainMismatch(String, String),

    /// A factor of a finite product vanishes inside a denominator.
    #[error("pole: denominator factor {0} vanishes (switch to evaluation mode or a limit form)")]
    Pole(String),

    /// A numerator and denominator zero collide; the value is a genuine 0/0.
    #[error("indeterminate 0/0 in factored product; use the dedicated limit form")]
    Indeterminate,

    /// Series inversion with a non-invertible lowest coefficient.
    #[error("lowest coefficient {0} is not invertible in this domain")]
    NonInvertibleLeading(String),

    /// Inverting the zero series, or an exact polynomial without target order.
    #[error("cannot invert: {0}")]
    BadInversion(String),

    /// (a;q^p)_inf where the factors never leave the truncation window.
    #[error("formal product does not converge: argument {0} has free symbols at q-degree <= 0")]
    NonconvergentProduct(String),

    /// Exact polynomial division failed in symbolic mode.
    #[error("symbolic division failed: {0} is not divisible by {1}")]
    SymbolicDivision(String, String),

    /// A graded-sum shell produced a term below its declared degree bound.
    #[error("degree bound certificate violated at shell {shell}: declared {declared}, term starts at {actual}")]
    CertificateViolated {
        shell: u64,
        declared: i64,
        actual: i64,
    },

    /// Parameters outside the range an operation supports.
    #[error("bad parameter: {0}")]
    BadParameter(String),

    /// Symbolic coefficients require integer monomial coefficients.
    #[error("symbolic mode needs integer coefficients, got {0}")]
    NonIntegerSymbolic(String),
}

pub type Result<T> = std::result::Result<T, QError>;
