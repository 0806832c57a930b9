use thiserror::Error;

/// Errors surfaced by scenario validation, geometry and the engine.
#[derive(Debug, Error)]
pub enum Error {
    /// The scenario or region description violates a structural invariant.
    #[error("configuration error: {0}")]
    Config(String),

    /// The sufficiency condition (summed pursuer energy must exceed the
    /// evader's on some coordinate) fails on both axes; no capture guarantee
    /// can be asserted.
    #[error(
        "sufficiency condition violated: pursuer energy does not exceed the evader's \
         on either coordinate (margins: axis1 {margin1}, axis2 {margin2})"
    )]
    HypothesisViolated { margin1: f64, margin2: f64 },

    /// An iterative numeric routine failed to converge.
    #[error("numeric error in {context}: {detail}")]
    Numeric { context: &'static str, detail: String },

    /// An energy ledger was driven past its budget by more than the
    /// round-off allowance. Indicates a strategy bug, never expected.
    #[error("ledger overdraft on coordinate {axis}: consumed {consumed} > budget {budget}")]
    Overdraft { axis: usize, consumed: f64, budget: f64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("scenario parse error: {0}")]
    Parse(#[from] serde_json::Error),
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
