//! Closed-form star and watermelon counts.
//!
//! With the wall, branch `i` (1-based) starting at `2i-2`:
//!
//! ```text
//! N(m,e) = 2^{-p^2+p} prod_i (e_i+1) prod_{i<j} (e_j-e_i)(e_j+e_i+2)
//!          prod_i (m+2i-2)! / ( ((m+e_i)/2+p)! ((m-e_i)/2+p-1)! )
//! ```
//!
//! and without it
//!
//! ```text
//! N^(m,e) = 2^{-p(p-1)/2} prod_{i<j} (e_j-e_i)
//!           prod_i (m-i+p)! / ( ((m+e_i)/2)! ((m-e_i)/2+p-1)! )
//! ```
//!
//! A negative factorial argument means the endpoint is out of reach and the
//! count is 0.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use statrs::function::gamma::ln_gamma;

use super::factorial::FactorialTable;
use super::query::{BigCount, StarQuery};
use crate::error::{invalid, Result};

/// `N(m, e)`: stars with the wall condition.
pub fn count_stars_wall(q: &StarQuery) -> Result<BigCount> {
    if !q.wall() {
        return invalid("count_stars_wall needs a query with the wall condition");
    }
    Ok(count_stars(q))
}

/// `N^(m, e)`: stars without the wall condition.
pub fn count_stars_nowall(q: &StarQuery) -> Result<BigCount> {
    if q.wall() {
        return invalid("count_stars_nowall needs a query without the wall condition");
    }
    Ok(count_stars(q))
}

/// Closed-form count for a validated query, either wall setting.
pub fn count_stars(q: &StarQuery) -> BigCount {
    BigCount::new(star_count_or_zero(q.p(), q.m(), q.endpoints(), q.wall()))
}

/// Number of `(p, 2n)`-watermelons.
pub fn count_watermelons(p: usize, n: u64, wall: bool) -> Result<BigCount> {
    let q = StarQuery::watermelon(p, n, wall)?;
    Ok(count_stars(&q))
}

/// Whether `e` is a legal endpoint vector for length `m`: right size,
/// strictly increasing, parity-consistent and nonnegative under the wall.
pub(crate) fn endpoint_shape_ok(p: usize, m: u64, e: &[i64], wall: bool) -> bool {
    e.len() == p
        && e.windows(2).all(|w| w[0] < w[1])
        && e.iter().all(|&x| (x - m as i64).rem_euclid(2) == 0)
        && (!wall || e.iter().all(|&x| x >= 0))
}

/// Factorial arguments of the closed form: `(numerator_args, denominator_args)`
/// or `None` when some argument is negative.
fn factorial_args(p: usize, m: u64, e: &[i64], wall: bool) -> Option<(Vec<u64>, Vec<u64>)> {
    let m = m as i64;
    let p_i = p as i64;
    let mut num = Vec::with_capacity(p);
    let mut den = Vec::with_capacity(2 * p);
    for (idx, &ei) in e.iter().enumerate() {
        let i = idx as i64 + 1;
        let (top, lo, hi) = if wall {
            (m + 2 * i - 2, (m + ei) / 2 + p_i, (m - ei) / 2 + p_i - 1)
        } else {
            (m - i + p_i, (m + ei) / 2, (m - ei) / 2 + p_i - 1)
        };
        if top < 0 || lo < 0 || hi < 0 {
            return None;
        }
        num.push(top as u64);
        den.push(lo as u64);
        den.push(hi as u64);
    }
    Some((num, den))
}

/// Closed-form count; returns 0 for any endpoint vector that is not legal.
pub fn star_count_or_zero(p: usize, m: u64, e: &[i64], wall: bool) -> BigUint {
    if !endpoint_shape_ok(p, m, e, wall) {
        return BigUint::zero();
    }
    let Some((num_args, den_args)) = factorial_args(p, m, e, wall) else {
        return BigUint::zero();
    };

    let mut poly = BigUint::one();
    for i in 0..p {
        if wall {
            poly *= BigUint::from((e[i] + 1) as u64);
        }
        for j in i + 1..p {
            poly *= BigUint::from((e[j] - e[i]) as u64);
            if wall {
                poly *= BigUint::from((e[j] + e[i] + 2) as u64);
            }
        }
    }

    let max_arg = num_args.iter().chain(&den_args).copied().max().unwrap_or(0);
    let (num, den) = FactorialTable::global().with(max_arg, |fact| {
        let mut num = poly;
        for &a in &num_args {
            num *= &fact[a as usize];
        }
        let mut den = BigUint::one();
        for &a in &den_args {
            den *= &fact[a as usize];
        }
        (num, den)
    });
    let pow2 = if wall { p * p - p } else { p * (p - 1) / 2 };
    let den = den << pow2;
    let (q, r) = num.div_rem(&den);
    assert!(r.is_zero(), "closed-form count is not an integer for p={p}, m={m}, e={e:?}");
    q
}

pub(crate) fn ln_factorial(n: u64) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// Natural log of the closed-form count evaluated through log-gamma;
/// `-inf` when the count is 0. Used by the floating-point sampler path.
pub fn ln_star_count(p: usize, m: u64, e: &[i64], wall: bool) -> f64 {
    if !endpoint_shape_ok(p, m, e, wall) {
        return f64::NEG_INFINITY;
    }
    let Some((num_args, den_args)) = factorial_args(p, m, e, wall) else {
        return f64::NEG_INFINITY;
    };
    let mut acc = 0.0;
    for i in 0..p {
        if wall {
            acc += ((e[i] + 1) as f64).ln();
        }
        for j in i + 1..p {
            acc += ((e[j] - e[i]) as f64).ln();
            if wall {
                acc += ((e[j] + e[i] + 2) as f64).ln();
            }
        }
    }
    acc += num_args.iter().map(|&a| ln_factorial(a)).sum::<f64>();
    acc -= den_args.iter().map(|&a| ln_factorial(a)).sum::<f64>();
    let pow2 = if wall { p * p - p } else { p * (p - 1) / 2 };
    acc - pow2 as f64 * std::f64::consts::LN_2
}
