//! The verification suite: a plan of named checks, run deterministically
//! into a [`TestReport`].
//!
//! A plan is a JSON list of `{"check": name, "params": {...}, "tolerance": x}`
//! objects; `params` and `tolerance` are optional. Every record of the report
//! passes iff `statistic <= threshold`. The tolerance, when given, replaces
//! the default threshold parameter of the check:
//!
//! | check | records | tolerance (default) |
//! |---|---|---|
//! | `exact_count_sweep` | mismatching endpoints per `(p, wall)` | allowed mismatches (0) |
//! | `transition_normalization` | move distributions not summing to 1 | allowed failures (0) |
//! | `sampler_uniformity` | chi-square statistic per `(p, n)` | level (0.01) |
//! | `spectral_marginal_ks` | KS of matrix-model draws per branch | level (0.05) |
//! | `marginal_ks` | KS of discrete or SDE draws per branch | level (0.05) |
//! | `gamma_oracle` | max gap between Gamma CDF and quadrature | absolute error (1e-6) |
//! | `norm_law` | KS of `\|X(t)\|^2` against Gamma, and mean z-score | level (0.05) |
//! | `moment_table` | relative error of each reference entry | relative error (1e-12) |
//! | `moment_mc` | z-score of each empirical moment | z bound (3) |
//! | `symmetric_mc` | z-score of each elementary symmetric mean | z bound (3) |
//! | `sde_invariants` | ordering/positivity violations | allowed violations (0) |
//! | `step_halving` | z-score of the `dt` vs `dt/2` change of `E\|X(1/2)\|^2` | z bound (3) |
//! | `time_symmetry` | two-sample KS of `X(1/2 - u)` vs `X(1/2 + u)` | level (0.05) |
//! | `stirling_ratio` | `sqrt(n)` times the max relative error, and monotonicity | constant `C` (5) |
//! | `ks_self_test` | distance of the KS rejection rate from its level | allowed distance (0.02) |
//!
//! Discrete and SDE samples are generated once per configuration and shared
//! between checks. Discrete values are centered (see
//! [`centered_marginal`](crate::discrete_walk::centered_marginal)); KS checks
//! additionally spread them uniformly over their lattice cell.
//!
//! Seeds: each data set and each check derives its seed from the base seed
//! and its name with [`named_seed`](crate::rng::named_seed); replicas use
//! [`replica_seed`](crate::rng::replica_seed). The report is therefore
//! byte-identical for any number of workers.

mod checks;
mod data;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub use data::{DiscreteData, SdeData, STANDARD_TIMES};

/// Version of the report layout.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckSpec {
    pub check: String,
    #[serde(default = "empty_params")]
    pub params: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

fn empty_params() -> serde_json::Value {
    serde_json::Value::Object(serde_json::Map::new())
}

impl CheckSpec {
    pub fn new(check: &str, params: serde_json::Value, tolerance: Option<f64>) -> Self {
        Self { check: check.to_string(), params, tolerance }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SuitePlan {
    pub checks: Vec<CheckSpec>,
}

impl SuitePlan {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Every check at its default parameters.
    pub fn default_plan() -> Self {
        use serde_json::json;
        let checks = vec![
            CheckSpec::new("exact_count_sweep", json!({}), None),
            CheckSpec::new("transition_normalization", json!({}), None),
            CheckSpec::new("sampler_uniformity", json!({}), None),
            CheckSpec::new("spectral_marginal_ks", json!({}), None),
            CheckSpec::new("marginal_ks", json!({"source": "discrete"}), None),
            CheckSpec::new("marginal_ks", json!({"source": "sde"}), None),
            CheckSpec::new("gamma_oracle", json!({}), None),
            CheckSpec::new("norm_law", json!({"source": "discrete"}), None),
            CheckSpec::new("norm_law", json!({"source": "sde"}), None),
            CheckSpec::new("moment_table", json!({}), None),
            CheckSpec::new("moment_mc", json!({"source": "discrete"}), None),
            CheckSpec::new("moment_mc", json!({"source": "sde"}), None),
            CheckSpec::new("symmetric_mc", json!({}), None),
            CheckSpec::new("sde_invariants", json!({}), None),
            CheckSpec::new("step_halving", json!({}), None),
            CheckSpec::new("time_symmetry", json!({}), None),
            CheckSpec::new("stirling_ratio", json!({}), None),
            CheckSpec::new("ks_self_test", json!({}), None),
        ];
        Self { checks }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub statistic: f64,
    pub threshold: f64,
    pub pass: bool,
    pub sample_size: u64,
    pub seed: u64,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, statistic: f64, threshold: f64, sample_size: u64, seed: u64) -> Self {
        Self {
            name: name.into(),
            statistic,
            threshold,
            pass: statistic <= threshold,
            sample_size,
            seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub schema_version: u32,
    pub base_seed: u64,
    pub verdict: bool,
    pub checks: Vec<CheckRecord>,
}

impl TestReport {
    pub fn new(base_seed: u64, checks: Vec<CheckRecord>) -> Self {
        let verdict = checks.iter().all(|c| c.pass);
        Self { schema_version: REPORT_SCHEMA_VERSION, base_seed, verdict, checks }
    }

    /// Records whose name starts with `prefix`.
    pub fn records<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a CheckRecord> + 'a {
        self.checks.iter().filter(move |c| c.name.starts_with(prefix))
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Runs every check of `plan` on a pool of `workers` threads (0 = rayon's
/// default). Check failures are recorded; malformed plans and numerical
/// infrastructure failures are returned as errors.
pub fn run_suite(plan: &SuitePlan, base_seed: u64, workers: usize) -> Result<TestReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| crate::Error::Invalid(format!("cannot build worker pool: {e}")))?;
    pool.install(|| {
        let mut cache = data::DataCache::new(base_seed);
        let mut records = Vec::new();
        for spec in &plan.checks {
            records.extend(checks::run_check(spec, &mut cache)?);
        }
        Ok(TestReport::new(base_seed, records))
    })
}

/// Runs the suite on externally produced discrete samples: `paths` must all
/// share `(p, n, wall)`. Produces KS records for every branch (p <= 2) and
/// the norm law at the standard times.
pub fn verify_paths(paths: &[crate::discrete_walk::WatermelonPath], seed: u64) -> Result<TestReport> {
    let Some(first) = paths.first() else {
        return invalid("no paths to verify");
    };
    let (p, n, wall) = (first.p(), first.n(), first.wall());
    if paths.iter().any(|q| q.p() != p || q.n() != n || q.wall() != wall) {
        return invalid("paths must share p, n and the wall setting");
    }
    let data = DiscreteData::from_paths(paths, seed)?;
    let records = checks::external_discrete_records(&data, seed)?;
    Ok(TestReport::new(seed, records))
}
