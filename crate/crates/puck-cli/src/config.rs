//! Run configuration: built-in defaults, overridden by a TOML config
//! file, overridden by command-line flags. The effective configuration is
//! echoed into every report header.

use std::path::Path;

use anyhow::{Context, Result};
use puck_core::{Criterion, FitNoise, GridSpec, ScanOptions};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub grid: GridSpec,
    pub window: usize,
    pub step: usize,
    pub criterion: Criterion,
    pub noise: FitNoise,
    pub epsilon: f64,
    pub delta_threshold: f64,
    pub bins: usize,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            grid: GridSpec::default(),
            window: 2000,
            step: 500,
            criterion: Criterion::Aic,
            noise: FitNoise::Gaussian,
            epsilon: 0.05,
            delta_threshold: 2.0,
            bins: 31,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("cannot parse config file {}", path.display()))
    }

    pub fn scan_options(&self) -> ScanOptions {
        ScanOptions {
            window: self.window,
            step: self.step,
            criterion: self.criterion,
            noise: self.noise,
            epsilon: self.epsilon,
            delta_threshold: self.delta_threshold,
        }
    }
}
