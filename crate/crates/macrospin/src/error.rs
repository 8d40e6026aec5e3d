use thiserror::Error;

/// Errors raised by state constructors, unitaries and experiment drivers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cutoff {cutoff} inadequate for |alpha| = {alpha_mag}: tail mass {tail:.3e} exceeds {limit:.1e}")]
    CutoffInadequate {
        cutoff: usize,
        alpha_mag: f64,
        tail: f64,
        limit: f64,
    },

    #[error("quadrature did not converge: panel refinement still differs by {disagreement:.3e}")]
    QuadratureNotConverged { disagreement: f64 },

    #[error("register of {qubits} qubits exceeds the configured bound of {bound}")]
    RegisterTooLarge { qubits: usize, bound: usize },

    #[error("site {site} does not reduce to a two-state subspace: leakage {leakage:.3e}")]
    NotATwoStateSubspace { site: usize, leakage: f64 },

    #[error("search over {vars} binary variables exceeds the exhaustive budget of {budget}")]
    VariableBudgetExceeded { vars: usize, budget: usize },

    #[error("at least {min} trials required, got {got}")]
    TooFewTrials { min: u64, got: u64 },

    #[error("scenario parse error at line {line}: {message}")]
    ScenarioParse { line: usize, message: String },

    #[error("setting {setting} is not supported by this system")]
    UnsupportedSetting { setting: String },

    #[error("photon number {n} exceeds the configured bound of {bound}")]
    PhotonBoundExceeded { n: usize, bound: usize },

    #[error("{0}")]
    InvalidInput(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serialization(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
