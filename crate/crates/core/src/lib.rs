//! Influence maximisation under the multilayer linear threshold model.
//!
//! The crate is organised bottom-up:
//!
//! * [`network`]: multilayer network model and the layer-edge-list format.
//! * [`diffusion`]: deterministic threshold diffusion with `OR`/`AND`
//!   protocols and the gain / diffusion-length metrics.
//! * [`seeding`]: sixteen rank-refining seed selection methods.
//! * [`experiment`]: parameter grids and batch execution with CSV output.
//! * [`analysis`]: heatmaps, Wilcoxon similarity, method rankings, seed set
//!   similarity and efficiency-curve fitting.
//!
//! Numeric code is generic over [`scalar::Threshold`] (diffusion, which also
//! accepts exact rationals) or [`scalar::Scalar`] (solvers and statistics).
//! The aliases below pin the `f64` instantiations used by the pipeline.

pub mod analysis;
pub mod diffusion;
pub mod error;
pub mod experiment;
pub mod network;
pub mod scalar;
pub mod seeding;

pub use diffusion::{simulate, DiffusionRecord, DiffusionResult, Protocol};
pub use error::{Error, Result};
pub use network::{load_network, ActorId, LayerId, MultilayerNetwork, NetworkFormat, NetworkStats};
pub use seeding::{rank, ActorRanking, Budget, Method, RankingParams};

pub type SimulationConfig = diffusion::SimulationConfig<f64>;
pub type Heatmap = analysis::Heatmap<f64>;
pub type WilcoxonResult = analysis::WilcoxonResult<f64>;
pub type EfficiencyCurve = analysis::EfficiencyCurve<f64>;

/// Base seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_240_601;
