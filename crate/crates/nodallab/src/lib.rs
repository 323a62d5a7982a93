//! Experiment registry and runner.
//!
//! Each experiment computes metrics with `nodallab-core`, checks them
//! against the expectations in its [`ExperimentSpec`], and can write
//! `summary.json`, CSV tables and an SVG plot.

pub mod config;
mod experiments;
pub mod registry;
pub mod report;
mod svg;
mod symbolic;

use thiserror::Error;

pub use config::{Config, Params};
pub use experiments::dirichlet_modes;
pub use registry::{find, list_experiments, registry, Check, Expectation, ExperimentSpec};
pub use report::{write_outputs, Outcome, Run, Summary, OUTPUT_FILES};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown experiment {0:?} (try `nodallab list`)")]
    UnknownExperiment(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("experiment failed to run: {0}")]
    Core(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    /// Process exit status: 2 for usage and configuration problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::UnknownExperiment(_) | HarnessError::Config(_) => 2,
            HarnessError::Core(_) | HarnessError::Io(_) => 1,
        }
    }
}

/// Resolves parameters for `id` and runs it. `seed` overrides the config.
pub fn run_experiment(id: &str, config: &Config, seed: Option<u64>) -> Result<Run, HarnessError> {
    let spec = find(id).ok_or_else(|| HarnessError::UnknownExperiment(id.to_string()))?;
    let mut config = config.clone();
    if seed.is_some() {
        config.seed = seed;
    }
    let params = config.resolve(&spec.defaults, spec.min_levels)?;
    let outcome = match spec.id {
        "E1" => experiments::e1_cauchy_riemann(&params),
        "E2" => experiments::e2_mixed_torus2(&params),
        "E3" => experiments::e3_mixed_torus3(&params),
        "E4" => experiments::e4_linear_form(&params),
        "E5" => experiments::e5_torus_eigenform(&params),
        "E6" => experiments::e6_identities(&params),
        "E7" => experiments::e7_singular(&params),
        "E8" => experiments::e8_courant(&params),
        "E9" => symbolic::e9_symbolic(&params),
        other => unreachable!("registered experiment {other} has no runner"),
    }?;
    let summary = Summary::evaluate(&spec, &params, &outcome.metrics);
    Ok(Run { summary, outcome })
}
