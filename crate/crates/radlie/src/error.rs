use thiserror::Error;

/// Errors shared by all computational modules.
#[derive(Debug, Error)]
pub enum Error {
    /// Matrix shapes do not fit the requested operation.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// A mathematical precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// No admissible integration contour could be constructed.
    #[error("contour error: {0}")]
    Contour(String),

    /// The requested resolvent point is too close to the spectrum.
    #[error("resolvent error: {0}")]
    Resolvent(String),

    /// An iteration failed to converge or a rank decision was ambiguous.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// A closure or generated object exceeded its size cap.
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
