use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("Riemann tensor violates {identity} symmetry (residual {residual:.3e})")]
    SymmetryViolation { identity: &'static str, residual: f64 },

    #[error("ambiguous rank: eigenvalue {value:.3e} sits just above the zero threshold {threshold:.3e}")]
    DegenerateSplit { value: f64, threshold: f64 },

    #[error("holonomy generators do not close under commutation (residual {residual:.3e})")]
    NotClosed { residual: f64 },

    #[error("invalid parameters: {0}")]
    BadParams(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("representation relations broken (residual {residual:.3e})")]
    RepresentationBroken { residual: f64 },

    #[error("Abelian field is not supported on the flat subspace (|Bh| = {residual:.3e})")]
    BadAbelianField { residual: f64 },

    #[error("truncation overflow: {0}")]
    TruncationOverflow(String),

    #[error("odd power of sqrt(t) carries a nonzero coefficient at order {order}")]
    ParityViolation { order: usize },

    #[error("sinh-determinant vanishes near the evaluation point (|det| = {modulus:.3e})")]
    PoleHit { modulus: f64 },

    #[error("quadrature did not converge: relative change {change:.3e} with {nodes} nodes")]
    QuadratureNotConverged { change: f64, nodes: usize },

    #[error("spectral tail bound {tail:.3e} too large at cutoff {kmax}")]
    TailTooLarge { tail: f64, kmax: usize },

    #[error("contour cannot be separated per direction: {0}")]
    MixedContourUnsupported(String),

    #[error("space has non-compact directions")]
    NotCompact,

    #[error("index {value} is not within tolerance of an integer")]
    NotInteger { value: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
