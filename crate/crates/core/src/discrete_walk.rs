//! Exact uniform sampling of discrete `(p, 2n)`-watermelons.
//!
//! A path is grown one time step at a time: at time `k` the move `eps` is
//! drawn with probability `N(2n-k-1, x+eps) / N(2n-k, x)`. These ratios
//! telescope, so every watermelon is produced with probability
//! `1 / count_watermelons(p, n, wall)`.
//!
//! The draw uses one 53-bit uniform integer `U` per step and selects the
//! smallest move index `j` (see [`eps_from_mask`]) with
//! `U * total < 2^53 * (w_0 + ... + w_j)`, evaluated exactly on the integer
//! move weights. Moves of probability zero are never selected. When the
//! remaining length exceeds [`DEFAULT_EXACT_THRESHOLD`] the weights come from
//! log-gamma evaluations of the counts instead and are renormalized in `f64`.

use std::fmt::Write as _;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exact_count::{
    count_watermelons, eps_from_mask, move_probabilities_lgamma, move_weights_big,
    small_move_weights_into, start_heights, step_probability, visit_families, ExactProbability,
};
use crate::rng::{replica_seed, rng_from_seed, uniform53, WatermelonRng};

/// Largest remaining length handled by the exact integer path.
pub const DEFAULT_EXACT_THRESHOLD: u64 = 4096;

/// Integer positions of the `p` branches at times `0..=2n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WatermelonPath {
    p: usize,
    n: u64,
    wall: bool,
    /// Row-major `(2n+1) x p`.
    positions: Vec<i64>,
}

impl WatermelonPath {
    pub fn new(p: usize, n: u64, wall: bool, positions: Vec<i64>) -> Result<Self> {
        let path = Self {
            p,
            n,
            wall,
            positions,
        };
        path.validate()?;
        Ok(path)
    }

    /// Checks pinned endpoints, strict ordering, unit steps and the wall.
    pub fn validate(&self) -> Result<()> {
        let p = self.p;
        if p == 0 {
            return invalid("branch count p must be positive");
        }
        let steps = 2 * self.n as usize;
        if self.positions.len() != (steps + 1) * p {
            return invalid(format!(
                "expected {} positions, got {}",
                (steps + 1) * p,
                self.positions.len()
            ));
        }
        let start = start_heights(p);
        if self.at(0) != start.as_slice() || self.at(steps) != start.as_slice() {
            return invalid("path must start and end at 0, 2, ..., 2p-2");
        }
        for k in 0..=steps {
            let row = self.at(k);
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return invalid(format!("branches touch or cross at time {k}: {row:?}"));
            }
            if self.wall && row[0] < 0 {
                return invalid(format!("branch 1 crosses the wall at time {k}"));
            }
            if k > 0 {
                let prev = self.at(k - 1);
                if prev.iter().zip(row).any(|(a, b)| (a - b).abs() != 1) {
                    return invalid(format!("non-unit step between times {} and {k}", k - 1));
                }
            }
        }
        Ok(())
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn wall(&self) -> bool {
        self.wall
    }

    /// Number of steps, `2n`.
    pub fn steps(&self) -> usize {
        2 * self.n as usize
    }

    /// Positions of all branches at time `k`.
    pub fn at(&self, k: usize) -> &[i64] {
        &self.positions[k * self.p..(k + 1) * self.p]
    }

    pub fn positions(&self) -> &[i64] {
        &self.positions
    }

    /// Heights of branch `i` (0-based) over time.
    pub fn branch(&self, i: usize) -> impl Iterator<Item = i64> + '_ {
        self.positions.iter().skip(i).step_by(self.p).copied()
    }

    /// CSV with header `k,branch_1,...,branch_p` and one row per time.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k");
        for i in 1..=self.p {
            let _ = write!(out, ",branch_{i}");
        }
        out.push('\n');
        for k in 0..=self.steps() {
            let _ = write!(out, "{k}");
            for v in self.at(k) {
                let _ = write!(out, ",{v}");
            }
            out.push('\n');
        }
        out
    }

    /// Parses the format written by [`to_csv`](Self::to_csv) and validates it.
    pub fn from_csv(text: &str, wall: bool) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty path CSV".into()))?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        if cols.first() != Some(&"k") || cols.len() < 2 {
            return Err(Error::Parse(format!("unexpected header {header:?}")));
        }
        for (i, c) in cols.iter().enumerate().skip(1) {
            if *c != format!("branch_{i}") {
                return Err(Error::Parse(format!("unexpected column {c:?}")));
            }
        }
        let p = cols.len() - 1;
        let mut positions = Vec::new();
        let mut rows = 0usize;
        for (row, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != p + 1 {
                return Err(Error::Parse(format!("row {row} has {} fields", fields.len())));
            }
            let k: usize = fields[0]
                .parse()
                .map_err(|_| Error::Parse(format!("bad time index {:?}", fields[0])))?;
            if k != row {
                return Err(Error::Parse(format!("row {row} carries time index {k}")));
            }
            for f in &fields[1..] {
                positions.push(
                    f.parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad position {f:?}")))?,
                );
            }
            rows += 1;
        }
        if rows % 2 == 0 {
            return Err(Error::Parse(format!("a watermelon has an odd number of rows, got {rows}")));
        }
        Self::new(p, (rows as u64 - 1) / 2, wall, positions)
    }
}

/// Path rescaled by `1/sqrt(2n)` in space and `1/(2n)` in time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RescaledPath {
    p: usize,
    n: u64,
    times: Vec<f64>,
    /// Row-major `(2n+1) x p`.
    values: Vec<f64>,
}

impl RescaledPath {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn at(&self, k: usize) -> &[f64] {
        &self.values[k * self.p..(k + 1) * self.p]
    }
}

pub fn rescale(path: &WatermelonPath) -> RescaledPath {
    let steps = path.steps() as f64;
    let scale = steps.sqrt();
    RescaledPath {
        p: path.p,
        n: path.n,
        times: (0..=path.steps()).map(|k| k as f64 / steps).collect(),
        values: path.positions.iter().map(|&v| v as f64 / scale).collect(),
    }
}

fn time_index(n: u64, t: f64) -> usize {
    assert!((0.0..=1.0).contains(&t), "t = {t} must lie in [0, 1]");
    ((2 * n) as f64 * t).floor().min((2 * n) as f64) as usize
}

/// Rescaled positions at time index `floor(2n t)`.
pub fn marginal_at(path: &RescaledPath, t: f64) -> Vec<f64> {
    path.at(time_index(path.n, t)).to_vec()
}

/// Shift that centers the lattice on the limit law: `+1` with the wall
/// (the count is symmetric in `e_i + 1`), `-(p-1)` without it (the ensemble is
/// symmetric about height `p-1`).
pub fn lattice_offset(p: usize, wall: bool) -> i64 {
    if wall {
        1
    } else {
        -(p as i64 - 1)
    }
}

/// `(W(floor(2nt)) + offset) / sqrt(2n)` with [`lattice_offset`]. Differs
/// from [`marginal_at`] by `O(1/sqrt(n))` but carries no `O(1/sqrt(n))` bias
/// against the limit density.
pub fn centered_marginal(path: &WatermelonPath, t: f64) -> Vec<f64> {
    let k = time_index(path.n, t);
    let offset = lattice_offset(path.p, path.wall);
    let scale = (path.steps() as f64).sqrt();
    path.at(k).iter().map(|&v| (v + offset) as f64 / scale).collect()
}

/// Spacing `2/sqrt(2n)` between neighbouring values of a rescaled branch.
pub fn lattice_spacing(n: u64) -> f64 {
    2.0 / ((2 * n) as f64).sqrt()
}

/// `floor(u * total / 2^53)` for `u < 2^53`.
fn mul_shift53(u: u64, total: u128) -> u128 {
    let hi = total >> 64;
    let lo = total & u128::from(u64::MAX);
    let u = u128::from(u);
    ((u * hi) << 11) + ((u * lo) >> 53)
}

fn pick_small(weights: &[u128], u: u64) -> usize {
    let total: u128 = weights.iter().sum();
    let q = mul_shift53(u, total);
    let mut cum = 0u128;
    for (j, &w) in weights.iter().enumerate() {
        cum += w;
        if q < cum {
            return j;
        }
    }
    unreachable!("cumulative weight never exceeds the threshold")
}

fn pick_big(weights: &[BigUint], u: u64) -> usize {
    let total: BigUint = weights.iter().sum();
    let q: BigUint = (total * u) >> 53u32;
    let mut cum = BigUint::default();
    for (j, w) in weights.iter().enumerate() {
        cum += w;
        if q < cum {
            return j;
        }
    }
    unreachable!("cumulative weight never exceeds the threshold")
}

fn pick_float(probs: &[f64], u: u64) -> usize {
    let u = u as f64 / (1u64 << 53) as f64;
    let mut cum = 0.0;
    let mut last = 0;
    for (j, &pr) in probs.iter().enumerate() {
        if pr > 0.0 {
            cum += pr;
            last = j;
            if u < cum {
                return j;
            }
        }
    }
    last
}

/// Sampler for a fixed `(p, n, wall)`.
#[derive(Clone, Debug)]
pub struct WatermelonSampler {
    p: usize,
    n: u64,
    wall: bool,
    exact_threshold: u64,
}

impl WatermelonSampler {
    pub fn new(p: usize, n: u64, wall: bool) -> Result<Self> {
        if p == 0 || n == 0 {
            return invalid(format!("need p >= 1 and n >= 1, got p = {p}, n = {n}"));
        }
        if count_watermelons(p, n, wall)?.is_zero() {
            return Err(Error::ZeroCount { p, n, wall });
        }
        Ok(Self {
            p,
            n,
            wall,
            exact_threshold: DEFAULT_EXACT_THRESHOLD,
        })
    }

    /// Remaining lengths above `threshold` use the log-gamma path.
    pub fn with_exact_threshold(mut self, threshold: u64) -> Self {
        self.exact_threshold = threshold;
        self
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn wall(&self) -> bool {
        self.wall
    }

    pub fn sample(&self, seed: u64) -> WatermelonPath {
        self.sample_with(&mut rng_from_seed(seed))
    }

    pub fn sample_with(&self, rng: &mut WatermelonRng) -> WatermelonPath {
        let p = self.p;
        let steps = 2 * self.n;
        let mut x = start_heights(p);
        let mut positions = Vec::with_capacity((steps as usize + 1) * p);
        positions.extend_from_slice(&x);
        let mut factors = Vec::with_capacity(2 * p * p);
        let mut weights = Vec::with_capacity(1 << p);
        for k in 0..steps {
            let m = steps - k;
            let u = uniform53(rng);
            let mask = if m > self.exact_threshold {
                pick_float(&move_probabilities_lgamma(p, m, &x, self.wall), u)
            } else if small_move_weights_into(p, m, &x, self.wall, &mut factors, &mut weights) {
                pick_small(&weights, u)
            } else {
                pick_big(&move_weights_big(p, m, &x, self.wall), u)
            };
            for (i, xi) in x.iter_mut().enumerate() {
                *xi += if mask >> i & 1 == 1 { 1 } else { -1 };
            }
            positions.extend_from_slice(&x);
        }
        let path = WatermelonPath {
            p,
            n: self.n,
            wall: self.wall,
            positions,
        };
        debug_assert!(path.validate().is_ok(), "sampled path violates invariants");
        path
    }

    /// Samples replicas `0..count` with seeds [`replica_seed`]`(base_seed, i)`
    /// in parallel and maps each through `f`; output is in replica order.
    pub fn sample_map<T, F>(&self, base_seed: u64, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(WatermelonPath) -> T + Sync + Send,
    {
        (0..count)
            .into_par_iter()
            .map(|i| f(self.sample(replica_seed(base_seed, i as u64))))
            .collect()
    }
}

/// One uniformly random `(p, 2n)`-watermelon.
pub fn sample_watermelon(p: usize, n: u64, wall: bool, seed: u64) -> Result<WatermelonPath> {
    Ok(WatermelonSampler::new(p, n, wall)?.sample(seed))
}

pub fn sample_batch(
    p: usize,
    n: u64,
    wall: bool,
    base_seed: u64,
    count: usize,
) -> Result<Vec<WatermelonPath>> {
    Ok(WatermelonSampler::new(p, n, wall)?.sample_map(base_seed, count, |path| path))
}

/// Every `(p, 2n)`-watermelon, in lexicographic order of step choices.
/// Limited to `p * 2n <= 24`.
pub fn enumerate_watermelons(p: usize, n: u64, wall: bool) -> Result<Vec<WatermelonPath>> {
    let work = p as u64 * 2 * n;
    if work > crate::exact_count::DEFAULT_BRUTE_FORCE_BUDGET {
        return Err(Error::BudgetExceeded {
            work,
            budget: crate::exact_count::DEFAULT_BRUTE_FORCE_BUDGET,
        });
    }
    let start = start_heights(p);
    let mut out = Vec::new();
    visit_families(p, 2 * n, wall, Some(&start), &mut |pos| {
        out.push(WatermelonPath {
            p,
            n,
            wall,
            positions: pos.to_vec(),
        });
    });
    Ok(out)
}

/// Exact probability that the sequential sampler produces `path`: the
/// product of its step probabilities.
pub fn path_probability(path: &WatermelonPath) -> Result<ExactProbability> {
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for k in 0..path.steps() {
        let eps: Vec<i8> = path
            .at(k + 1)
            .iter()
            .zip(path.at(k))
            .map(|(b, a)| (b - a) as i8)
            .collect();
        let step = step_probability(path.p, path.n, k as u64, path.at(k), &eps, path.wall)?;
        num *= step.numerator();
        den *= step.denominator();
    }
    ExactProbability::new(num, den)
}

/// Step vector of move `mask`, re-exported for callers decoding sampler
/// choices.
pub fn move_of_mask(mask: usize, p: usize) -> Vec<i8> {
    eps_from_mask(mask, p)
}
