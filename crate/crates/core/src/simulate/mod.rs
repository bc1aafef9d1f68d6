//! Synthetic experiments.
//!
//! Designs are Gaussian with AR(1)-style covariance `ρ^|i−j|`; responses are
//! sums of square-free products of the raw predictors with fixed integer
//! coefficients plus Gaussian noise. Four presets cover complexes with one,
//! two and three components, and a non-hierarchical model. The harness runs
//! every method on every replication and reports mean and standard deviation
//! of model error and selected-support size per (σ, ρ) cell.

mod config;
mod data;
mod experiment;
mod presets;
mod table;

pub use config::{ExperimentConfig, Method, SimConfig};
pub use data::{gen_design, gen_response, replication_rng, simulate_dataset};
pub use experiment::{
    run_experiment, run_replication, CellReport, ExperimentReport, MethodRun, MethodSummary, Moments,
};
pub use presets::{model_presets, preset_by_name, ModelPreset, COEFFICIENT_SEED};
pub use table::render_tables;
