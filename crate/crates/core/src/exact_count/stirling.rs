//! Asymptotics of the factorial ratio `(2k+a)! / ((k+s+c)! (k-s+d)!)`
//! with `k = round(n t)` and `s = b sqrt(2n)` an integer shift:
//!
//! ```text
//! ratio ~ 2^{2k+a} / sqrt(pi) * (n t)^{a-c-d-1/2} * exp(-2 b^2 / t)
//! ```
//!
//! with relative error `O(1/sqrt(n))` uniformly on compact parameter sets.

use serde::{Deserialize, Serialize};

use super::counts::ln_factorial;
use crate::error::{domain, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorialRatioParams {
    pub n: u64,
    pub t: f64,
    pub a: u64,
    /// Integer shift `b * sqrt(2n)`.
    pub shift: i64,
    pub c: u64,
    pub d: u64,
}

impl FactorialRatioParams {
    pub fn new(n: u64, t: f64, a: u64, shift: i64, c: u64, d: u64) -> Result<Self> {
        if n == 0 {
            return domain("n must be at least 1");
        }
        if !(t > 0.0 && t <= 1.0) {
            return domain(format!("t = {t} must lie in (0, 1]"));
        }
        let params = Self { n, t, a, shift, c, d };
        let k = params.k() as i64;
        if k + shift + c as i64 <= -1 || k - shift + d as i64 <= -1 {
            return domain(format!("negative factorial argument for k = {k}, shift = {shift}"));
        }
        Ok(params)
    }

    /// Builds the shift from a real `b`, rounded onto the `1/sqrt(2n)` grid.
    pub fn from_real_b(n: u64, t: f64, a: u64, b: f64, c: u64, d: u64) -> Result<Self> {
        let shift = (b * (2.0 * n as f64).sqrt()).round() as i64;
        Self::new(n, t, a, shift, c, d)
    }

    pub fn k(&self) -> u64 {
        (self.n as f64 * self.t).round() as u64
    }

    /// `b = shift / sqrt(2n)`.
    pub fn b(&self) -> f64 {
        self.shift as f64 / (2.0 * self.n as f64).sqrt()
    }
}

/// Log of the asymptotic right-hand side.
pub fn ln_stirling_ratio_asymptotic(params: &FactorialRatioParams) -> f64 {
    let k = params.k() as f64;
    let nt = params.n as f64 * params.t;
    let b = params.b();
    (2.0 * k + params.a as f64) * std::f64::consts::LN_2 - 0.5 * std::f64::consts::PI.ln()
        + (params.a as f64 - params.c as f64 - params.d as f64 - 0.5) * nt.ln()
        - 2.0 * b * b / params.t
}

/// Asymptotic right-hand side; overflows to `inf` once `2k` passes ~1000.
pub fn stirling_ratio_asymptotic(params: &FactorialRatioParams) -> f64 {
    ln_stirling_ratio_asymptotic(params).exp()
}

/// Log of the exact factorial ratio, through log-gamma at integer arguments.
pub fn ln_factorial_ratio(params: &FactorialRatioParams) -> f64 {
    let k = params.k() as i64;
    ln_factorial(2 * k as u64 + params.a)
        - ln_factorial((k + params.shift + params.c as i64) as u64)
        - ln_factorial((k - params.shift + params.d as i64) as u64)
}

/// `|exact / asymptotic - 1|`.
pub fn stirling_relative_error(params: &FactorialRatioParams) -> f64 {
    (ln_factorial_ratio(params) - ln_stirling_ratio_asymptotic(params)).exp_m1().abs()
}

/// Parameter grid for the uniform-error check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RatioGrid {
    pub ts: Vec<f64>,
    pub a: Vec<u64>,
    pub b: Vec<f64>,
    pub c: Vec<u64>,
    pub d: Vec<u64>,
}

impl Default for RatioGrid {
    fn default() -> Self {
        Self {
            ts: vec![0.25, 0.5, 1.0],
            a: vec![0, 1, 2],
            b: vec![0.0, 0.25, 0.5],
            c: vec![0, 1],
            d: vec![0, 1],
        }
    }
}

/// Largest relative error over the grid at a given `n`.
pub fn max_relative_error(n: u64, grid: &RatioGrid) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &t in &grid.ts {
        for &a in &grid.a {
            for &b in &grid.b {
                for &c in &grid.c {
                    for &d in &grid.d {
                        let params = FactorialRatioParams::from_real_b(n, t, a, b, c, d)?;
                        worst = worst.max(stirling_relative_error(&params));
                    }
                }
            }
        }
    }
    Ok(worst)
}
