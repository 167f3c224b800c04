//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by model construction and the analysis operations.
#[derive(Debug, Error)]
pub enum Error {
    /// A model invariant was violated; the message names the invariant.
    #[error("invalid model: {0}")]
    Model(String),

    /// An input fell outside its documented domain.
    #[error("input outside domain: {0}")]
    Domain(String),

    /// Two bundles that must be disjoint overlap.
    #[error("bundles {bundle} and {endowment} overlap; conditional values require disjoint bundles")]
    Overlap { bundle: String, endowment: String },

    /// A degenerate input for which the requested quantity is undefined.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Hazard rate f/(1-F) requested at t = 1.
    #[error("hazard rate is infinite at t = 1")]
    InfiniteHazard,

    /// An operation precondition does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The tariff recursion found tied conditional volumes (argmax not a singleton).
    #[error("conditional-volume argmax is not unique; tied quantities: {tied:?}")]
    NonUniqueArgmax { tied: Vec<f64> },

    /// Product count outside the supported range.
    #[error("{n} products unsupported (max {max})")]
    UnsupportedProducts { n: usize, max: usize },

    /// A curve expected to be single-peaked has an interior dip.
    #[error("input not single-peaked: {0}")]
    NotSinglePeaked(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
