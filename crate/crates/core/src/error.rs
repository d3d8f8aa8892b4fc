use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("support violation: 1 + delta*xi < 0 at {} node(s), first at xi = {}", .nodes.len(), .nodes.first().copied().unwrap_or(f64::NAN))]
    SupportViolation { nodes: Vec<f64> },

    #[error("window overflow: {0}")]
    WindowOverflow(String),

    #[error("support overlap: {0}")]
    SupportOverlap(String),

    #[error("grid is not symmetric about 0: {0}")]
    GridAsymmetry(String),

    #[error("empty dyadic family")]
    EmptyFamily,

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("singular point at xi = {xi} (1 + delta*xi = 0)")]
    SingularPoint { xi: f64 },

    #[error("non-finite objective: {0}")]
    NonFiniteObjective(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by invalid parameters, as opposed to numerical
    /// breakdown or I/O.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::GridMismatch(_)
                | Error::SupportViolation { .. }
                | Error::WindowOverflow(_)
                | Error::SupportOverlap(_)
                | Error::GridAsymmetry(_)
                | Error::EmptyFamily
                | Error::PreconditionViolation(_)
                | Error::SingularPoint { .. }
        )
    }
}
