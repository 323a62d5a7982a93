//! Run parameters: registry defaults, overridden by a TOML file, overridden
//! by command-line flags.

use std::path::Path;

use nodallab_core::fields::MIN_RESOLUTION;
use nodallab_core::nodal::ZeroParams;
use serde::{Deserialize, Serialize};

use crate::HarnessError;

/// Contents of a `--config` file. Every key is optional.
///
/// ```toml
/// seed = 7
///
/// [grid]
/// resolution = 256   # finest grid, nodes per axis (power of two)
/// levels = 4         # halvings used for box counting
///
/// [zero]
/// threshold = 4.0
/// max_jump = 2.0
/// residual = 0.1
///
/// [suite]
/// instances = 20
/// trials = 64
/// ```
#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: Option<u64>,
    pub grid: GridSection,
    pub zero: ZeroSection,
    pub suite: SuiteSection,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub resolution: Option<usize>,
    pub levels: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ZeroSection {
    pub threshold: Option<f64>,
    pub max_jump: Option<f64>,
    pub residual: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteSection {
    pub instances: Option<usize>,
    pub trials: Option<usize>,
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Fills unset keys from `defaults` and validates the result.
    pub fn resolve(&self, defaults: &Params, min_levels: usize) -> Result<Params, HarnessError> {
        let d = defaults;
        let params = Params {
            seed: self.seed.unwrap_or(d.seed),
            resolution: self.grid.resolution.unwrap_or(d.resolution),
            levels: self.grid.levels.unwrap_or(d.levels),
            instances: self.suite.instances.unwrap_or(d.instances),
            trials: self.suite.trials.unwrap_or(d.trials),
            zero: ZeroSettings {
                threshold: self.zero.threshold.unwrap_or(d.zero.threshold),
                max_jump: self.zero.max_jump.unwrap_or(d.zero.max_jump),
                residual: self.zero.residual.unwrap_or(d.zero.residual),
            },
        };
        params.validate(min_levels)?;
        Ok(params)
    }
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct ZeroSettings {
    pub threshold: f64,
    pub max_jump: f64,
    pub residual: f64,
}

impl Default for ZeroSettings {
    fn default() -> Self {
        let z = ZeroParams::default();
        Self { threshold: z.threshold, max_jump: z.max_jump, residual: z.residual }
    }
}

/// Fully resolved parameters of one run; recorded in `summary.json`.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Params {
    pub seed: u64,
    pub resolution: usize,
    pub levels: usize,
    pub instances: usize,
    pub trials: usize,
    pub zero: ZeroSettings,
}

impl Params {
    pub fn new(resolution: usize, levels: usize) -> Self {
        Self { seed: 1, resolution, levels, instances: 20, trials: 64, zero: ZeroSettings::default() }
    }

    pub fn with_suite(mut self, instances: usize, trials: usize) -> Self {
        self.instances = instances;
        self.trials = trials;
        self
    }

    /// Coarsest to finest, halving from `resolution`.
    pub fn resolutions(&self) -> Vec<usize> {
        (0..self.levels).rev().map(|i| self.resolution >> i).collect()
    }

    pub fn zero_params(&self) -> ZeroParams {
        ZeroParams { threshold: self.zero.threshold, max_jump: self.zero.max_jump, residual: self.zero.residual }
    }

    fn validate(&self, min_levels: usize) -> Result<(), HarnessError> {
        let fail = |msg: String| Err(HarnessError::Config(msg));
        if !self.resolution.is_power_of_two() {
            return fail(format!("resolution {} is not a power of two", self.resolution));
        }
        if self.levels < min_levels.max(1) {
            return fail(format!("need at least {} levels, got {}", min_levels.max(1), self.levels));
        }
        if self.levels > 16 || (self.resolution >> (self.levels - 1)) < MIN_RESOLUTION {
            return fail(format!(
                "{} levels below resolution {} go under the minimum of {MIN_RESOLUTION}",
                self.levels, self.resolution
            ));
        }
        if self.instances == 0 || self.trials == 0 {
            return fail("instances and trials must be positive".into());
        }
        let z = self.zero;
        if [z.threshold, z.max_jump, z.residual].iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return fail("zero tolerances must be positive and finite".into());
        }
        Ok(())
    }
}
