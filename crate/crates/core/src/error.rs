use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix is singular (|det| = {det:.3e}, floor {floor:.3e})")]
    Singular { det: f64, floor: f64 },

    #[error("condition number {cond:.3e} exceeds bound {bound:.3e}")]
    ConditionExceeded { cond: f64, bound: f64 },

    #[error("all matrices of the tuple are zero")]
    ZeroTuple,

    #[error("no acceptable transition matrix after {attempts} draws")]
    RejectionExhausted { attempts: usize },

    #[error("block entries admit no commuting completion (|a1| = {a1_abs:.3e})")]
    CommutationUnsatisfiable { a1_abs: f64 },

    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),

    #[error("scalar denominator {modulus:.3e} below pole floor")]
    NearPole { modulus: f64 },

    #[error("matrix denominator condition {cond:.3e} above limit")]
    NearPoleMatrix { cond: f64 },

    #[error("tuple carries no spectral data")]
    NoSpectralData,

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("malformed map chain: {0}")]
    MalformedChain(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("spectrum point {index} has norm {norm:.12} outside the closed unit ball")]
    SpectrumOutsideBall { index: usize, norm: f64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
