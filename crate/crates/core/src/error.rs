use thiserror::Error;

/// Errors produced by algebra construction, curvature evaluation and
/// rigidity certification.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("not a subalgebra: commutator expansion residual {residual:e}")]
    NotSubalgebra { residual: f64 },

    #[error("dependent basis: Gram matrix of the trace pairing is singular")]
    DependentBasis,

    #[error("not a metric: Gram matrix is not positive definite")]
    NotAMetric,

    #[error("not bi-invariant: ad-invariance defect {defect:e}")]
    NotBiInvariant { defect: f64 },

    #[error("basis not bi-invariant-orthonormal: antisymmetry defect {defect:e}")]
    NotOrthonormal { defect: f64 },

    #[error("block {block} not irreducible-compatible: refine decomposition ({reason})")]
    BlockNotIrreducible { block: usize, reason: String },

    #[error("decomposition identity requires bi-invariant g0: A-symmetry defect {defect:e}")]
    AsymmetricA { defect: f64 },

    #[error("center present: rigidity fails structurally (central blocks {blocks:?})")]
    CenterPresent { blocks: Vec<usize> },

    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}
