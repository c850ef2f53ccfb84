use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// The derivative of the map is discontinuous at the queried point.
    #[error("point ({x}, {y}) lies on a break line")]
    BreakLine { x: f64, y: f64 },

    #[error("certification failed: {what} (residual {residual:e})")]
    Certification { what: String, residual: f64 },

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("search error: {0}")]
    Search(String),

    #[error("trace unusable: {0}")]
    UnusableTrace(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
