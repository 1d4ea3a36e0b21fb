use thiserror::Error;

/// Errors raised by the capacity computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CapacityError {
    /// An argument fell outside the domain of the function.
    #[error("domain error in {what}: {detail}")]
    Domain { what: &'static str, detail: String },

    /// A quantity that should be real and finite came out otherwise.
    #[error("numeric error in {what}: {detail}")]
    Numeric { what: &'static str, detail: String },

    /// An iterative solver ran out of budget or lost its bracket.
    #[error("no convergence in {what}: {detail}")]
    NoConvergence { what: &'static str, detail: String },

    /// Invalid channel or physical configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// The requested closed form does not exist for this noise model.
    #[error("model mismatch: {0}")]
    ModelMismatch(String),

    /// A sub-computation failed while assembling a named quantity.
    #[error("{quantity}: {source}")]
    Quantity {
        quantity: &'static str,
        #[source]
        source: Box<CapacityError>,
    },
}

impl CapacityError {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        Self::Domain { what, detail: detail.into() }
    }

    pub(crate) fn numeric(what: &'static str, detail: impl Into<String>) -> Self {
        Self::Numeric { what, detail: detail.into() }
    }

    pub(crate) fn no_convergence(what: &'static str, detail: impl Into<String>) -> Self {
        Self::NoConvergence { what, detail: detail.into() }
    }

    /// Short machine-readable tag for the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Domain { .. } => "domain",
            Self::Numeric { .. } => "numeric",
            Self::NoConvergence { .. } => "no_convergence",
            Self::Config(_) => "config",
            Self::ModelMismatch(_) => "model_mismatch",
            Self::Quantity { source, .. } => source.kind(),
        }
    }
}

pub type Result<T> = std::result::Result<T, CapacityError>;
