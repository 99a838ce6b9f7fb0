use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimensions: {0}")]
    InvalidDims(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not Hermitian (max entry deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("trace is not one (trace {trace:.17e})")]
    TraceNotOne { trace: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("matrix is not unitary (max deviation of U†U from identity {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("Kraus operators are not trace preserving (max deviation {deviation:.3e})")]
    NotTracePreserving { deviation: f64 },

    #[error(
        "local state of subsystem A is degenerate (smallest eigenvalue gap {gap:.3e}); \
         its eigenbasis is not unique, so the dephasing basis must be chosen explicitly"
    )]
    DegenerateLocalState { gap: f64 },

    #[error("state is not pure (purity {purity:.17e})")]
    NotPure { purity: f64 },

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("parameter `{0}` must be finite")]
    NonFinite(&'static str),

    #[error("invalid time grid: {0}")]
    InvalidTimeGrid(String),

    #[error("time average of the witness distance is zero; the dynamics carry no local signature")]
    TimeAverageZero,

    #[error(
        "time average not converged (relative change {relative_change:.3e} when halving the window); \
         best estimate d_eff = {d_eff:.6}, time average = {time_average:.6e}"
    )]
    NotConverged {
        d_eff: f64,
        time_average: f64,
        relative_change: f64,
    },
}
