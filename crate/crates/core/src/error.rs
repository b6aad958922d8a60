use thiserror::Error;

/// Errors raised anywhere in the approximation pipeline.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// The provider cannot emit a node beyond the requested magnitude.
    #[error("provider exhausted: no node {direction} {bound}; supply a longer list or an extension rule")]
    Exhausted { direction: &'static str, bound: String },

    #[error("separation violated: nodes {left} and {right} differ by {gap} < delta {delta}")]
    SeparationViolation {
        left: String,
        right: String,
        gap: String,
        delta: String,
    },

    #[error("invalid doubling sequence: {0}")]
    InvalidDoubling(String),

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    /// Parameters outside the range where the expansion polynomials are known to form a basis.
    #[error("unsupported parameters: {0}")]
    UnsupportedParameter(String),

    #[error("F(y) vanishes at node {node}; raise the extraction floor")]
    ZeroF { node: String },

    #[error("residual {residual:e} exceeds threshold {threshold:e} at {bits} bits")]
    PrecisionFailure {
        residual: f64,
        threshold: f64,
        bits: u32,
    },

    #[error("singular alternant system for node multiset [{nodes}]")]
    Singular { nodes: String },

    #[error("degenerate basis: leading coefficient of A_{index} is zero (misclassified offset?)")]
    Degeneracy { index: usize },

    #[error("degree cap {cap} reached; best grid error {best_error:e} > tolerance {tol:e}")]
    DegreeCap { cap: usize, best_error: f64, tol: f64 },

    #[error("recovery error {error:e} exceeds budget {budget:e} at y1 = {y1}")]
    FloorTooSmall { error: f64, budget: f64, y1: String },

    #[error("budget cap reached for basis index {index}: best sup error {best_error:e}")]
    BudgetCap { index: usize, best_error: f64 },

    #[error("certified sup error {sup_error:e} is not below epsilon {epsilon:e}")]
    NotCertified { sup_error: f64, epsilon: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Wraps a failure with the pipeline stage that produced it.
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// The innermost error, with stage wrappers removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
