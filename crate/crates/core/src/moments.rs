//! Closed-form moments of the limit marginals.
//!
//! For `p = 2` each branch has explicit moments of every order, with and
//! without the wall; the first six orders are also kept as a reference table
//! in normalized form (`2 pi E / s^{k/2}` without the wall, `3 pi E / s^{k/2}`
//! with it, `s = t(1-t)`). Branch 1 is the lower path, branch 2 the upper.
//!
//! With the wall, even moments give the larger value to the upper branch:
//! `3 pi E[X_2^2] / s = 15 pi + 32`. Monte Carlo on both the discrete
//! sampler and the SDE confirms this assignment.
//!
//! For general `p` the expectations of elementary symmetric polynomials are
//! known: `E[e_k(X_1^2, ..., X_p^2)]` with the wall, `E[e_k(X_1, ..., X_p)]`
//! without.

use serde::Serialize;

use crate::error::{domain, invalid, Result};
use crate::scalar::Real;

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * f64::from(i))
}

fn central_binomial(j: u32) -> f64 {
    (1..=j).fold(1.0, |acc, i| acc * f64::from(j + i) / f64::from(i))
}

fn check_t<F: Real>(t: F) -> Result<F> {
    if !(t > F::zero() && t < F::one()) {
        return domain(format!("t = {t} must lie in (0, 1)"));
    }
    Ok(t * (F::one() - t))
}

fn check_branch_order(branch: usize, order: u32) -> Result<()> {
    if branch != 1 && branch != 2 {
        return invalid(format!("branch must be 1 or 2, got {branch}"));
    }
    if order == 0 {
        return invalid("moment order must be at least 1");
    }
    Ok(())
}

/// `E[X_b^order] / s^{order/2}` for the `p = 2` marginal without the wall.
pub fn nowall_p2_coefficient(branch: usize, order: u32) -> Result<f64> {
    check_branch_order(branch, order)?;
    let k = order / 2;
    if order % 2 == 0 {
        return Ok(factorial(2 * k) * f64::from(k + 1) / (2f64.powi(k as i32) * factorial(k)));
    }
    let sum: f64 = (0..=k).map(|j| central_binomial(j) / 8f64.powi(j as i32)).sum();
    let bracket = factorial(2 * k + 2) / (2f64.powi(2 * k as i32 + 1) * factorial(k + 1))
        + f64::from(2 * k + 3) * 2f64.powi(k as i32) * factorial(k) * sum;
    let sign = if branch == 2 { 1.0 } else { -1.0 };
    Ok(sign * bracket / (2.0 * std::f64::consts::PI.sqrt()))
}

/// `E[X_b^order] / s^{order/2}` for the `p = 2` marginal with the wall.
pub fn wall_p2_coefficient(branch: usize, order: u32) -> Result<f64> {
    check_branch_order(branch, order)?;
    let pi = std::f64::consts::PI;
    if order % 2 == 1 {
        // order = 2k - 1
        let k = (order + 1) / 2;
        let kf = f64::from(k);
        let first = factorial(2 * k + 2) * (14.0 - 4.0 * kf) / (2f64.powi(2 * k as i32 + 3) * factorial(k + 1));
        let sum: f64 = (0..=k).map(|j| central_binomial(j) / 8f64.powi(j as i32)).sum();
        let weight = (4.0 * kf * kf + 11.0) * 2f64.powi(k as i32 - 1) * factorial(k);
        let scaled = if branch == 1 {
            first + weight * (std::f64::consts::SQRT_2 - sum)
        } else {
            -first + weight * sum
        };
        return Ok(scaled / (3.0 * pi.sqrt()));
    }
    let k = order / 2;
    let kf = f64::from(k);
    let a = (kf * kf + kf + 3.0) * factorial(2 * k + 2) / (factorial(k + 1) * 2f64.powi(k as i32 + 1));
    let s: f64 = (1..=k + 1)
        .map(|j| 2f64.powi(j as i32) / (f64::from(j) * central_binomial(j)))
        .sum();
    let edge = 2.0 * (3.0 - kf) * factorial(k + 1);
    let scaled = if branch == 2 {
        -edge + a * (pi + 2.0 * s)
    } else {
        edge + a * (pi - 2.0 * s)
    };
    Ok(scaled / (3.0 * pi))
}

/// `E[X_b(t)^order]` for the continuous 2-watermelon without the wall.
pub fn moment_nowall_p2<F: Real>(branch: usize, order: u32, t: F) -> Result<F> {
    let s = check_t(t)?;
    Ok(F::lit(nowall_p2_coefficient(branch, order)?) * s.powf(F::lit(f64::from(order) / 2.0)))
}

/// `E[X_b(t)^order]` for the continuous 2-watermelon with the wall.
pub fn moment_wall_p2<F: Real>(branch: usize, order: u32, t: F) -> Result<F> {
    let s = check_t(t)?;
    Ok(F::lit(wall_p2_coefficient(branch, order)?) * s.powf(F::lit(f64::from(order) / 2.0)))
}

fn check_k(p: usize, k: usize) -> Result<()> {
    if k == 0 || k > p {
        return invalid(format!("need 1 <= k <= p, got k = {k}, p = {p}"));
    }
    Ok(())
}

/// `E[e_k(X_1^2, ..., X_p^2)]` with the wall: `(2p+1)! / ((2p+1-2k)! 2^k k!) s^k`.
///
/// Evaluated through `c_k = (p-k+1)(2(p-k)+3)/k c_{k-1}`, `c_0 = 1`.
pub fn sym_wall_expectation<F: Real>(p: usize, k: usize, t: F) -> Result<F> {
    check_k(p, k)?;
    let s = check_t(t)?;
    let mut c = 1.0;
    for j in 1..=k {
        c *= ((p - j + 1) * (2 * (p - j) + 3)) as f64 / j as f64;
    }
    Ok(F::lit(c) * s.powi(k as i32))
}

/// `E[e_k(X_1, ..., X_p)]` without the wall: 0 for odd `k`,
/// `(-1)^m p! / ((p-2m)! 2^m m!) s^m` for `k = 2m`.
pub fn sym_nowall_expectation<F: Real>(p: usize, k: usize, t: F) -> Result<F> {
    check_k(p, k)?;
    let s = check_t(t)?;
    if k % 2 == 1 {
        return Ok(F::zero());
    }
    let m = k / 2;
    let mut c = 1.0;
    for j in 0..2 * m {
        c *= (p - j) as f64;
    }
    c /= 2f64.powi(m as i32) * factorial(m as u32);
    if m % 2 == 1 {
        c = -c;
    }
    Ok(F::lit(c) * s.powi(m as i32))
}

/// Normalizer of the reference table: `2 pi` without the wall, `3 pi` with it.
pub fn table_normalizer(wall: bool) -> f64 {
    if wall {
        3.0 * std::f64::consts::PI
    } else {
        2.0 * std::f64::consts::PI
    }
}

/// One normalized reference entry, `norm * E[X_b^k] / s^{k/2}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableEntry {
    pub wall: bool,
    pub branch: usize,
    pub order: u32,
    pub expression: &'static str,
    pub value: f64,
}

/// The 24 reference entries: orders 1 to 6, both branches, both laws.
pub fn reference_table() -> Vec<TableEntry> {
    let pi = std::f64::consts::PI;
    let rp = pi.sqrt();
    let r2 = std::f64::consts::SQRT_2;
    let rows: [(bool, usize, u32, &'static str, f64); 24] = [
        (false, 1, 1, "-4√π", -4.0 * rp),
        (false, 2, 1, "4√π", 4.0 * rp),
        (false, 1, 2, "4π", 4.0 * pi),
        (false, 2, 2, "4π", 4.0 * pi),
        (false, 1, 3, "-14√π", -14.0 * rp),
        (false, 2, 3, "14√π", 14.0 * rp),
        (false, 1, 4, "18π", 18.0 * pi),
        (false, 2, 4, "18π", 18.0 * pi),
        (false, 1, 5, "-79√π", -79.0 * rp),
        (false, 2, 5, "79√π", 79.0 * rp),
        (false, 1, 6, "120π", 120.0 * pi),
        (false, 2, 6, "120π", 120.0 * pi),
        (true, 1, 1, "(15√2-15)√π", (15.0 * r2 - 15.0) * rp),
        (true, 2, 1, "15√π", 15.0 * rp),
        (true, 1, 2, "15π-32", 15.0 * pi - 32.0),
        (true, 2, 2, "15π+32", 15.0 * pi + 32.0),
        (true, 1, 3, "(108√2-279/2)√π", (108.0 * r2 - 139.5) * rp),
        (true, 2, 3, "(279/2)√π", 139.5 * rp),
        (true, 1, 4, "135π-384", 135.0 * pi - 384.0),
        (true, 2, 4, "135π+384", 135.0 * pi + 384.0),
        (true, 1, 5, "(1128√2-6213/4)√π", (1128.0 * r2 - 1553.25) * rp),
        (true, 2, 5, "(6213/4)√π", 1553.25 * rp),
        (true, 1, 6, "1575π-4800", 1575.0 * pi - 4800.0),
        (true, 2, 6, "1575π+4800", 1575.0 * pi + 4800.0),
    ];
    rows.iter()
        .map(|&(wall, branch, order, expression, value)| TableEntry { wall, branch, order, expression, value })
        .collect()
}

/// Closed-form value in the table's normalization.
pub fn normalized_moment(wall: bool, branch: usize, order: u32) -> Result<f64> {
    let c = if wall { wall_p2_coefficient(branch, order)? } else { nowall_p2_coefficient(branch, order)? };
    Ok(table_normalizer(wall) * c)
}
