use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{simulate_observed, SdeConfig};
use crate::error::Result;
use crate::rng::replica_seed;
use crate::scalar::Real;
use crate::stats::{gamma_cdf, ks_critical, ks_statistic, mean_se, norm_dimension, norm_sq_law};

/// States of many independent trajectories at common observation times.
#[derive(Clone, Debug, PartialEq)]
pub struct BatchOutcome<F> {
    pub config: SdeConfig<F>,
    pub times: Vec<F>,
    /// `values[r][k]` is replica `r` at `times[k]`.
    pub values: Vec<Vec<Vec<F>>>,
    pub halvings: u64,
    pub violations: u64,
}

/// Runs `count` replicas; replica `r` uses seed `replica_seed(config.seed, r)`.
/// The result does not depend on the rayon pool size.
pub fn simulate_batch<F: Real>(config: &SdeConfig<F>, count: usize, times: &[F]) -> Result<BatchOutcome<F>> {
    config.validate()?;
    let runs: Vec<_> = (0..count as u64)
        .into_par_iter()
        .map(|r| simulate_observed(&config.with_seed(replica_seed(config.seed, r)), times))
        .collect::<Result<_>>()?;
    let halvings = runs.iter().map(|o| o.halvings).sum();
    let violations = runs.iter().map(|o| o.violations).sum();
    Ok(BatchOutcome {
        config: config.clone(),
        times: times.to_vec(),
        values: runs.into_iter().map(|o| o.values).collect(),
        halvings,
        violations,
    })
}

impl<F: Real> BatchOutcome<F> {
    pub fn count(&self) -> usize {
        self.values.len()
    }

    /// Coordinate `branch` (0-based) of every replica at `times[k]`.
    pub fn branch_at(&self, k: usize, branch: usize) -> Vec<f64> {
        self.values.iter().map(|v| v[k][branch].as_f64()).collect()
    }

    /// `|X|^2` of every replica at `times[k]`.
    pub fn norm_sq_at(&self, k: usize) -> Vec<f64> {
        self.values
            .iter()
            .map(|v| v[k].iter().map(|x| x.as_f64() * x.as_f64()).sum())
            .collect()
    }

    pub fn summary(&self) -> Result<BatchSummary> {
        let p = self.config.p;
        let wall = self.config.wall;
        let mut times = Vec::with_capacity(self.times.len());
        for (k, t) in self.times.iter().enumerate() {
            let t = t.as_f64();
            let norms = self.norm_sq_at(k);
            let (mean, se) = mean_se(norms.iter().copied())?;
            let (shape, scale) = norm_sq_law(p, wall, t);
            let ks = ks_statistic(&norms, |x| gamma_cdf(shape, scale, x.max(0.0)).unwrap_or(0.0))?;
            let branch_means = (0..p)
                .map(|i| mean_se(self.branch_at(k, i)))
                .collect::<Result<Vec<_>>>()?;
            times.push(TimeSummary {
                t,
                norm_sq_mean: mean,
                norm_sq_se: se,
                norm_sq_expected: norm_dimension(p, wall) as f64 * t * (1.0 - t),
                norm_sq_ks: ks,
                branch_means: branch_means.iter().map(|m| m.0).collect(),
                branch_ses: branch_means.iter().map(|m| m.1).collect(),
            });
        }
        Ok(BatchSummary {
            p,
            wall,
            count: self.count(),
            t0: self.config.t0.as_f64(),
            dt: self.config.dt.as_f64(),
            gap_floor: self.config.gap_floor.as_f64(),
            seed: self.config.seed,
            ks_critical: ks_critical(self.count()),
            halvings: self.halvings,
            violations: self.violations,
            endpoint: "pinned to 0 at t = 1".to_string(),
            times,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeSummary {
    pub t: f64,
    pub norm_sq_mean: f64,
    pub norm_sq_se: f64,
    /// `d t (1-t)`.
    pub norm_sq_expected: f64,
    /// KS distance of `|X|^2` to `Gamma(d/2, 2t(1-t))`.
    pub norm_sq_ks: f64,
    pub branch_means: Vec<f64>,
    pub branch_ses: Vec<f64>,
}

/// Batch summary emitted next to trajectory CSV output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub p: usize,
    pub wall: bool,
    pub count: usize,
    pub t0: f64,
    pub dt: f64,
    pub gap_floor: f64,
    pub seed: u64,
    pub ks_critical: f64,
    pub halvings: u64,
    pub violations: u64,
    pub endpoint: String,
    pub times: Vec<TimeSummary>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn batch_is_pool_independent() {
        let config = SdeConfig { dt: 2e-3, ..SdeConfig::<f64>::new(2, true, 17) };
        let times = [0.25, 0.5];
        let a = simulate_batch(&config, 12, &times).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let b = pool.install(|| simulate_batch(&config, 12, &times).unwrap());
        assert_eq!(a, b);
        let summary = a.summary().unwrap();
        assert_eq!(summary.times.len(), 2);
        assert_eq!(summary.violations, 0);
        assert_eq!(summary.times[1].norm_sq_expected, 2.5);
    }
}
