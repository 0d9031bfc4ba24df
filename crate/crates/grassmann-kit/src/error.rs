//! Error type shared by all modules of the crate.

/// Errors reported by the geometry kernels and the CLI plumbing.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Matrix dimensions do not match what the operation requires.
    #[error("shape mismatch: expected {expected}, got {found}")]
    ShapeMismatch { expected: String, found: String },

    /// Input contains NaN or infinite entries.
    #[error("input matrix contains non-finite entries")]
    NonFinite,

    /// A matrix that should have orthonormal columns does not, within tolerance.
    #[error("matrix is not orthonormal: ‖UᵀU − I‖_F = {defect:e}")]
    NotOrthonormal { defect: f64 },

    /// A matrix that should be a rank-p orthogonal projector is not one.
    #[error("matrix is not an orthogonal projector: {reason}")]
    InvalidProjector { reason: String },

    /// A matrix fails the tangent-space (or horizontal-space) characterization.
    #[error("matrix is not a tangent vector at the given base point: defect {defect:e}")]
    NotTangent { defect: f64 },

    /// Two tangent vectors are based at different points.
    #[error("tangent vectors are based at different points")]
    BaseMismatch,

    /// A matrix expected to have full column rank is rank-deficient.
    #[error("matrix is rank-deficient within tolerance")]
    RankDeficient,

    /// Singular values are clustered or zero, so the derivative formula is ill-posed.
    #[error("singular values are clustered or zero (separation {separation:e}); use the QR or projector route")]
    IllPosedSingularValues { separation: f64 },

    /// Input lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The two tangent vectors do not span a plane.
    #[error("tangent vectors span a degenerate plane")]
    DegeneratePlane,

    /// A projector lies outside the affine chart.
    #[error("point is outside the chart: {0}")]
    OutOfChart(String),

    /// A matrix expected to be orthogonal is not.
    #[error("matrix is not orthogonal: ‖WᵀW − I‖_F = {defect:e}")]
    NotOrthogonal { defect: f64 },

    /// An iterative kernel failed to converge.
    #[error("numerical kernel failed: {0}")]
    Numerical(String),

    /// File-system problem, annotated with the offending path.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// A matrix file could not be parsed.
    #[error("parse error in {path}: {reason}")]
    Parse { path: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn shape(expected: impl Into<String>, found: impl Into<String>) -> Self {
        Error::ShapeMismatch {
            expected: expected.into(),
            found: found.into(),
        }
    }
}
