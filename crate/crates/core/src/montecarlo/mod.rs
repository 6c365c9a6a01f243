//! Seeded Monte Carlo oracle for the analytic laws.
//!
//! Trials are cut into fixed-size blocks. Block `b` draws from a ChaCha8
//! stream keyed by `(seed, b)`, and results are reduced in block order, so
//! output depends only on the seed and trial count.

mod exec;
mod ks;
mod sim;

pub use ks::{chi_square_critical_1pct, ks_critical, ks_test, two_sample_chi_square};
pub use sim::{
    sample_bpp_distances, simulate_conditional_slice, simulate_conditioned_ppp, simulate_connectivity,
    simulate_connectivity_sweep, simulate_interference, simulate_interference_samples, simulate_outage,
    simulate_outage_sweep, DistanceMatrix, SliceSummary,
};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Trials per RNG block.
pub const BLOCK_TRIALS: u64 = 4096;

/// Default cap on stored distance cells (8 bytes each).
pub const DEFAULT_CELL_CAP: u64 = 1 << 27;

/// Seed, trial count and worker count for one simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub seed: u64,
    pub trials: u64,
    pub workers: usize,
    /// Largest `trials × N` matrix a simulation may allocate.
    pub cell_cap: u64,
}

impl SimConfig {
    pub fn new(seed: u64, trials: u64, workers: usize) -> Result<Self> {
        let sim = Self { seed, trials, workers, cell_cap: DEFAULT_CELL_CAP };
        sim.validate()?;
        Ok(sim)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return domain("trials must be at least 1");
        }
        if self.workers < 1 {
            return domain("workers must be at least 1");
        }
        Ok(())
    }

    pub fn with_trials(self, trials: u64) -> Self {
        Self { trials, ..self }
    }

    pub fn with_cell_cap(self, cell_cap: u64) -> Self {
        Self { cell_cap, ..self }
    }

    /// Same settings with a seed derived from `(seed, tag)`, for a
    /// sub-simulation that must not share random numbers with its siblings.
    pub fn fork(self, tag: u64) -> Self {
        Self { seed: exec::fork_seed(self.seed, tag), ..self }
    }
}

/// Moments of a sample plus an optional goodness-of-fit statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalSummary {
    pub count: u64,
    pub mean: f64,
    pub variance: f64,
    pub ks_statistic: Option<f64>,
    /// Mean after dropping the top and bottom 0.5% of the sample.
    pub trimmed_mean: Option<f64>,
    pub seed: u64,
    pub elapsed_seconds: f64,
}

impl EmpiricalSummary {
    /// Summarizes `samples` (any order). Variance uses the `n-1` divisor.
    pub fn from_samples(samples: &[f64], seed: u64, elapsed_seconds: f64) -> Result<Self> {
        if samples.is_empty() {
            return domain("cannot summarize an empty sample");
        }
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let variance = if samples.len() > 1 {
            samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Ok(Self {
            count: samples.len() as u64,
            mean,
            variance,
            ks_statistic: None,
            trimmed_mean: None,
            seed,
            elapsed_seconds,
        })
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        (self.variance / self.count as f64).sqrt()
    }
}

/// Mean of `sorted` after removing `fraction` of the sample from each end.
pub fn trimmed_mean(sorted: &[f64], fraction: f64) -> Option<f64> {
    let cut = (sorted.len() as f64 * fraction).floor() as usize;
    let kept = sorted.get(cut..sorted.len().saturating_sub(cut))?;
    if kept.is_empty() {
        return None;
    }
    Some(kept.iter().sum::<f64>() / kept.len() as f64)
}

/// Standard error of the sample variance, `sqrt((m4 - s^4)/n)`.
pub fn variance_std_error(samples: &[f64]) -> f64 {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let m2 = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m4 = samples.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
    ((m4 - m2 * m2).max(0.0) / n).sqrt()
}
