use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::growth::MAX_HORIZON;
use crate::observables::{DEFAULT_CLIQUE_BUDGET, DEFAULT_CLIQUE_POOL};

/// Optional, costlier measurements; the degree and cherry columns are always filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measurement {
    /// Triangle count and the clustering coefficient.
    Triangles,
    /// Clique lower bound from the candidate pool.
    Clique,
    /// Exact clique number (budgeted).
    CliqueExact,
}

fn default_measurements() -> Vec<Measurement> {
    vec![Measurement::Triangles, Measurement::Clique]
}

fn default_pool() -> usize {
    DEFAULT_CLIQUE_POOL
}

fn default_budget() -> u64 {
    DEFAULT_CLIQUE_BUDGET
}

/// A `(p, t, replica)` sweep. Read from flat TOML; unknown keys are rejected.
///
/// ```toml
/// p_values = [0.5]
/// t_grid = [4096, 8192, 16384]
/// replicas = 30
/// master_seed = 2024
/// observables = ["triangles", "clique"]
/// clique_pool_k = 200
/// snapshot_times = [1024]
/// output_csv = "records.csv"
/// report_dir = "report"
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub p_values: Vec<f64>,
    pub t_grid: Vec<u64>,
    pub replicas: u64,
    pub master_seed: u64,
    #[serde(default = "default_measurements")]
    pub observables: Vec<Measurement>,
    #[serde(default = "default_pool")]
    pub clique_pool_k: usize,
    #[serde(default = "default_budget")]
    pub clique_budget: u64,
    /// Extra measurement times inside each trajectory.
    #[serde(default)]
    pub snapshot_times: Vec<u64>,
    pub output_csv: PathBuf,
    /// Where `fits.json`, `diagnostics.json` and the series CSVs go.
    #[serde(default)]
    pub report_dir: Option<PathBuf>,
    /// Worker pool width; the global pool when absent.
    #[serde(default)]
    pub workers: Option<usize>,
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: SweepConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
        let mut config = Self::from_toml(&text)?;
        // Relative output paths are taken relative to the config file.
        if let Some(dir) = path.parent() {
            if config.output_csv.is_relative() {
                config.output_csv = dir.join(&config.output_csv);
            }
            if let Some(report) = config.report_dir.as_mut() {
                if report.is_relative() {
                    *report = dir.join(&*report);
                }
            }
        }
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.p_values.is_empty() {
            return fail("p_values must not be empty".into());
        }
        if let Some(p) = self.p_values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return fail(format!("p = {p} is outside [0, 1]"));
        }
        let distinct: HashSet<u64> = self.p_values.iter().map(|p| p.to_bits()).collect();
        if distinct.len() != self.p_values.len() {
            return fail("p_values contains duplicates".into());
        }
        if self.t_grid.is_empty() {
            return fail("t_grid must not be empty".into());
        }
        if self.t_grid[0] == 0 || self.t_grid.windows(2).any(|w| w[0] >= w[1]) {
            return fail("t_grid must be positive and strictly increasing".into());
        }
        if *self.t_grid.last().unwrap() > MAX_HORIZON {
            return fail(format!("t_grid exceeds the supported horizon {MAX_HORIZON}"));
        }
        if self.replicas == 0 {
            return fail("replicas must be at least 1".into());
        }
        if self.snapshot_times.contains(&0) {
            return fail("snapshot_times must be positive".into());
        }
        if self.clique_pool_k == 0 {
            return fail("clique_pool_k must be at least 1".into());
        }
        if self.workers == Some(0) {
            return fail("workers must be at least 1".into());
        }
        Ok(())
    }

    pub fn measures(&self, m: Measurement) -> bool {
        self.observables.contains(&m)
    }
}
