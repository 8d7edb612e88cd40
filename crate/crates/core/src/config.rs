//! The run configuration file (TOML).
//!
//! ```toml
//! out_dir = "runs/l30"
//! workers = 8
//!
//! [dataset]
//! length = 30
//! n_samples = 3000
//! test_size = 300
//! seed = 7
//!
//! [sweep]
//! per_class_sizes = [1, 2, 3, 5, 10]
//! repetitions = 10
//!
//! [prior]
//! alpha = 1.0
//! m_log2 = "auto"
//!
//! [gp]
//! restarts = 2
//! ```
//!
//! Every table and key is optional; unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::apprior::PriorConfig;
use crate::error::{Error, Result};
use crate::experiment::{DatasetConfig, SweepConfig};
use crate::gpcore::FitConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GpSettings {
    /// Bounds on ℓ as multiples of the starting ℓ₀.
    pub length_scale_factors: [f64; 2],
    pub noise_bounds: [f64; 2],
    pub initial_noise: f64,
    pub restarts: usize,
    pub max_evaluations: usize,
    pub grid_points: usize,
}

impl Default for GpSettings {
    fn default() -> Self {
        let d = FitConfig::default();
        Self {
            length_scale_factors: [d.length_scale_factors.0, d.length_scale_factors.1],
            noise_bounds: [d.noise_bounds.0, d.noise_bounds.1],
            initial_noise: d.initial_noise,
            restarts: d.restarts,
            max_evaluations: d.max_evaluations,
            grid_points: d.grid_points,
        }
    }
}

impl GpSettings {
    pub fn fit_config(&self) -> FitConfig {
        FitConfig {
            length_scale_factors: (self.length_scale_factors[0], self.length_scale_factors[1]),
            noise_bounds: (self.noise_bounds[0], self.noise_bounds[1]),
            initial_noise: self.initial_noise,
            restarts: self.restarts,
            seed: 0,
            max_evaluations: self.max_evaluations,
            grid_points: self.grid_points,
        }
    }

    fn validate(&self) -> Result<()> {
        let [lo, hi] = self.length_scale_factors;
        if !(lo > 0.0 && lo <= 1.0 && hi >= 1.0) {
            return Err(Error::InvalidConfig(
                "gp.length_scale_factors must bracket 1 and be positive".into(),
            ));
        }
        let [nlo, nhi] = self.noise_bounds;
        if !(nlo > 0.0 && nlo <= self.initial_noise && self.initial_noise <= nhi) {
            return Err(Error::InvalidConfig(
                "gp.noise_bounds must be positive and contain initial_noise".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub dataset: DatasetConfig,
    pub sweep: SweepConfig,
    pub prior: PriorConfig,
    pub gp: GpSettings,
    pub out_dir: PathBuf,
    /// Worker threads for sweeps; 0 means one per available processor.
    pub workers: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dataset: DatasetConfig::default(),
            sweep: SweepConfig::default(),
            prior: PriorConfig::default(),
            gp: GpSettings::default(),
            out_dir: PathBuf::from("out"),
            workers: 0,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::InvalidConfig(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable")
    }

    pub fn validate(&self) -> Result<()> {
        self.dataset.validate()?;
        self.sweep.validate()?;
        self.prior.validate()?;
        self.gp.validate()
    }

    pub fn effective_workers(&self) -> usize {
        if self.workers > 0 {
            self.workers
        } else {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        }
    }
}
