use std::path::PathBuf;

use thiserror::Error;

/// Everything that can abort a solver run.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{file}:{line}: {message}")]
    MeshFormat {
        file: String,
        line: usize,
        message: String,
    },

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("degenerate triangle {cell}: det = {det:e}")]
    DegenerateCell { cell: usize, det: f64 },

    #[error("unsupported polynomial degree {0} (expected 1 or 3)")]
    UnsupportedDegree(usize),

    #[error("singular Vandermonde matrix: nodes are not unisolvent")]
    SingularVandermonde,

    #[error("positive cubature not found after {iterations} iterations (residual {residual:e}, min weight {min_weight:e})")]
    CubatureNotConverged {
        iterations: usize,
        residual: f64,
        min_weight: f64,
    },

    #[error("no positive filter time found below {t_max:e}")]
    NoPositiveFilter { t_max: f64 },

    #[error("filter check failed: {0}")]
    FilterCheck(String),

    #[error("non-physical state {context}: rho = {rho:e}, p = {p:e}")]
    NonPhysical { context: String, rho: f64, p: f64 },

    #[error("degenerate wave speed estimate a_l = a_r = {0:e}")]
    DegenerateSpeeds(f64),

    #[error("no boundary condition configured for marker {0}")]
    UnknownMarker(i32),

    #[error("time step underflow at t = {t}: dt = {dt:e}")]
    TimeStepUnderflow { t: f64, dt: f64 },

    #[error("unknown test case '{0}'")]
    UnknownCase(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Short stable identifier, used for the machine-readable error line of the CLI.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MeshFormat { .. } => "mesh_format",
            Error::InvalidMesh(_) => "invalid_mesh",
            Error::DegenerateCell { .. } => "degenerate_cell",
            Error::UnsupportedDegree(_) => "unsupported_degree",
            Error::SingularVandermonde => "singular_vandermonde",
            Error::CubatureNotConverged { .. } => "cubature_not_converged",
            Error::NoPositiveFilter { .. } => "no_positive_filter",
            Error::FilterCheck(_) => "filter_check",
            Error::NonPhysical { .. } => "positivity",
            Error::DegenerateSpeeds(_) => "degenerate_speeds",
            Error::UnknownMarker(_) => "unknown_marker",
            Error::TimeStepUnderflow { .. } => "dt_underflow",
            Error::UnknownCase(_) => "unknown_case",
            Error::Config(_) => "config",
            Error::Io { .. } => "io",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
