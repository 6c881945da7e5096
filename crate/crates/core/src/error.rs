use thiserror::Error;

/// Errors raised by the geometry, meshing, eigensolver and optimization layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid discretization: {0}")]
    InvalidDiscretization(String),

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    /// Halfplane intersection is empty or has no interior.
    #[error("degenerate shape: {0}")]
    DegenerateShape(String),

    /// The body is thinner than the collapse threshold.
    #[error("collapsed shape: minimal width {width:.3e} below threshold")]
    CollapsedShape { width: f64 },

    #[error("eigensolver did not converge: {0}")]
    SolverDivergence(String),

    #[error("degenerate mass matrix: {0}")]
    DegenerateMass(String),

    #[error("no feasible starting point could be constructed")]
    NoFeasibleStart,

    #[error("candidate is not contained in the box")]
    NotContained,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("serialization: {0}")]
    Serialization(String),
}

impl Error {
    /// True for errors that come from the geometry or meshing stage.
    pub fn is_geometric(&self) -> bool {
        matches!(
            self,
            Error::InvalidShape(_)
                | Error::DegenerateShape(_)
                | Error::CollapsedShape { .. }
                | Error::InvalidDiscretization(_)
                | Error::NotContained
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
