//! Error-probability results and Monte Carlo summaries.

use serde::{Deserialize, Serialize};

/// An error probability, exact or estimated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub error: f64,
    /// Zero for exact results.
    pub std_error: f64,
    /// 95% Wilson score interval (Monte Carlo only).
    pub wilson95: Option<[f64; 2]>,
    pub exact: bool,
    pub n: usize,
    /// `l log2(q) / n` where a message length applies.
    pub rate: Option<f64>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    /// Wall-clock seconds, filled in by callers that time the run.
    pub wall_time_s: Option<f64>,
}

impl SimResult {
    pub fn exact(error: f64, n: usize, rate: Option<f64>) -> Self {
        SimResult {
            error: error.clamp(0.0, 1.0),
            std_error: 0.0,
            wilson95: None,
            exact: true,
            n,
            rate,
            trials: None,
            seed: None,
            wall_time_s: None,
        }
    }

    /// Summary of per-trial error values in `[0, 1]`. The standard error is
    /// the Bernoulli bound `sqrt(p̂(1 − p̂)/N)`, which dominates the true
    /// standard error of any `[0, 1]`-valued mean with the same expectation.
    pub fn monte_carlo(values: &[f64], n: usize, rate: Option<f64>, seed: u64) -> Self {
        let trials = values.len();
        let mean = if trials == 0 {
            0.0
        } else {
            (values.iter().sum::<f64>() / trials as f64).clamp(0.0, 1.0)
        };
        let std_error = if trials == 0 {
            0.0
        } else {
            (mean * (1.0 - mean) / trials as f64).sqrt()
        };
        SimResult {
            error: mean,
            std_error,
            wilson95: Some(wilson_interval(mean, trials, 1.959_963_984_540_054)),
            exact: false,
            n,
            rate,
            trials: Some(trials),
            seed: Some(seed),
            wall_time_s: None,
        }
    }
}

/// Wilson score interval for a proportion `p̂` over `trials` draws.
pub fn wilson_interval(p_hat: f64, trials: usize, z: f64) -> [f64; 2] {
    if trials == 0 {
        return [0.0, 1.0];
    }
    let n = trials as f64;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p_hat + z2 / (2.0 * n)) / denom;
    let half = z * (p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    [(centre - half).max(0.0), (centre + half).min(1.0)]
}
