use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("network has no edges or node declarations")]
    EmptyNetwork,
    #[error("unknown actor `{0}`")]
    UnknownActor(String),
    #[error("unknown layer `{0}`")]
    UnknownLayer(String),
    #[error("unknown seed selection method `{0}`")]
    UnknownMethod(String),
    #[error("seed set is empty")]
    EmptySeedSet,
    #[error("seed set covers all {actors} actors, gain is undefined")]
    DegenerateSeedSet { actors: usize },
    #[error("budget of {seeds} seeds leaves no activatable actor among {actors}")]
    DegenerateBudget { seeds: usize, actors: usize },
    #[error("invalid budget {0}%, expected a value in (0, 100)")]
    InvalidBudget(f64),
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("ranking inconsistent with network: {0}")]
    Consistency(String),
    #[error("{solver} did not converge within {iterations} iterations")]
    NonConvergence { solver: &'static str, iterations: usize },
    #[error("katz alpha {alpha} diverges for spectral radius {spectral_radius}")]
    KatzDivergence { alpha: f64, spectral_radius: f64 },
    #[error("grid configuration: {0}")]
    GridConfig(String),
    #[error("format: {0}")]
    Format(String),
    #[error("aggregation: {0}")]
    Aggregation(String),
    #[error("need at least {required} samples, got {got}")]
    InsufficientSample { required: usize, got: usize },
    #[error("shape: {0}")]
    Shape(String),
    #[error("no region boundary: {0}")]
    NoBoundary(String),
    #[error("curve fit: {0}")]
    Fit(String),
    #[error("coverage: {0}")]
    Coverage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
