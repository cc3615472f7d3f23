use thiserror::Error;

/// Failures reported by the solver.
///
/// `InvalidParameter` signals caller misuse; the remaining variants mean the
/// requested accuracy could not be reached with the chosen basis size.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QrmaError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "truncation n_max = {n_max} is insufficient: tail mass {tail:.3e} exceeds {limit:.1e}"
    )]
    TruncationInsufficient { n_max: usize, tail: f64, limit: f64 },

    #[error("eigensolver did not converge for eigenvalue {index} after {iterations} iterations")]
    NoConvergence { index: usize, iterations: usize },

    #[error("energies not converged to {tol:.1e} at the basis-size cap {cap} (last change {change:.3e})")]
    TruncationCap { cap: usize, change: f64, tol: f64 },

    #[error("initial-state projection lost weight: sum |A|^2 = {weight:.12} (n_max = {n_max})")]
    CompletenessDeficit { weight: f64, n_max: usize },

    #[error("Poisson series truncated at {n_terms} terms leaves tail {tail:.3e}")]
    TailTolerance { n_terms: usize, tail: f64 },
}

pub type Result<T> = std::result::Result<T, QrmaError>;
