use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown preset `{name}`; valid presets: {valid}")]
    UnknownPreset { name: String, valid: String },

    #[error("cluster file parse error: {0}")]
    Parse(String),

    #[error("invalid cluster: {0}")]
    InvalidCluster(String),

    #[error("sector out of range: N={num_sites}, m={num_down} (need 0 <= m <= N <= {max})")]
    SectorOutOfRange {
        num_sites: usize,
        num_down: usize,
        max: usize,
    },

    #[error("configuration {word:#b} does not belong to sector (N={num_sites}, m={num_down})")]
    ForeignConfiguration {
        word: u32,
        num_sites: usize,
        num_down: usize,
    },

    #[error("basis index {index} out of range (dimension {dim})")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid site pair ({i}, {j}) for {num_sites} sites")]
    InvalidPair {
        i: usize,
        j: usize,
        num_sites: usize,
    },

    #[error("invalid site {site} for {num_sites} sites")]
    InvalidSite { site: usize, num_sites: usize },

    #[error("lanczos did not converge after {iterations} matvecs; residuals {residuals:?}")]
    NoConvergence {
        iterations: usize,
        residuals: Vec<f64>,
    },

    #[error("dense spectrum limited to dimension {max}, sector has {dim}")]
    DenseTooLarge { dim: usize, max: usize },

    #[error("degenerate window not resolved with k={k}: all eigenvalues fall inside it; raise k")]
    WindowUnresolved { k: usize },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("|gamma| = {0} exceeds 1/4")]
    GammaOutOfRange(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("expected one report per unordered pair ({expected}), got {got}")]
    IncompletePairs { expected: usize, got: usize },

    #[error("extremal search needs exactly 2 degenerate states, got {0}")]
    UnsupportedDegeneracy(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
