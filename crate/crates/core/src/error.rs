use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop at site {0}: coupling graphs must not contain loops")]
    SelfLoop(usize),

    #[error("graph is disconnected ({components} components); bounds require a connected graph")]
    Disconnected { components: usize },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("sites must differ (got {0} twice)")]
    SameSite(usize),

    #[error("site {site} out of range for {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("displacement out of range: {0}")]
    DisplacementOutOfRange(String),

    #[error("invalid sector: {n_flipped} flipped spins out of {n_qubits} qubits")]
    InvalidSector { n_qubits: usize, n_flipped: usize },

    #[error("{n_qubits} qubits exceeds the configured maximum of {max}")]
    TooManyQubits { n_qubits: usize, max: usize },

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("dense method limited to dimension {max}, got {dim}")]
    DenseTooLarge { dim: usize, max: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "eigensolver did not converge after {iterations} iterations \
         (best estimate {estimate:.6e}, residual {residual:.3e})"
    )]
    NoConvergence {
        estimate: f64,
        residual: f64,
        iterations: usize,
    },

    #[error("weights for pair ({source_site}, {target_site}) violate the reciprocal-sum constraint: sum = {sum}")]
    ReciprocalSum {
        source_site: usize,
        target_site: usize,
        sum: f64,
    },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
