//! One-step transition laws of a uniformly random watermelon.
//!
//! Given the cross-section `x` at time `k` of a `(p, 2n)`-watermelon, the
//! probability that branch `i` moves by `eps_i` is
//! `N(2n-k-1, x+eps) / N(2n-k, x)`. Dividing the closed form at `x+eps` by the
//! one at `x` leaves a product of small integers, so the whole distribution is
//! proportional to [`move_weights`]: with the wall
//!
//! ```text
//! w(eps) = prod_i (x_i+eps_i+1) a_i(eps_i)
//!          prod_{i<j} (x_j-x_i+eps_j-eps_i)(x_j+x_i+eps_j+eps_i+2)
//! ```
//!
//! with `a_i(+1) = (m-x_i)/2+p-1`, `a_i(-1) = (m+x_i)/2+p`, and without it
//!
//! ```text
//! w(eps) = prod_i a_i(eps_i) prod_{i<j} (x_j-x_i+eps_j-eps_i)
//! ```
//!
//! with `a_i(+1) = (m-x_i)/2+p-1`, `a_i(-1) = (m+x_i)/2`, where `m = 2n-k`.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::counts::{ln_star_count, star_count_or_zero};
use super::query::{start_heights, ExactProbability};
use crate::error::{invalid, Result};

/// Move `mask` sets branch `i` to `+1` when bit `i` is set, `-1` otherwise.
pub fn eps_from_mask(mask: usize, p: usize) -> Vec<i8> {
    (0..p).map(|i| if mask >> i & 1 == 1 { 1 } else { -1 }).collect()
}

pub fn mask_from_eps(eps: &[i8]) -> Result<usize> {
    let mut mask = 0;
    for (i, &e) in eps.iter().enumerate() {
        match e {
            1 => mask |= 1 << i,
            -1 => {}
            other => return invalid(format!("step {other} is not +1 or -1")),
        }
    }
    Ok(mask)
}

/// Checks that `x` can be the time-`k` cross-section of some
/// `(p, 2n)`-watermelon and returns `N(2n-k, x)`.
fn cross_section_count(p: usize, n: u64, k: u64, x: &[i64], wall: bool) -> Result<BigUint> {
    if p == 0 {
        return invalid("branch count p must be positive");
    }
    if k >= 2 * n {
        return invalid(format!("step index {k} must be below 2n = {}", 2 * n));
    }
    if x.len() != p {
        return invalid(format!("expected {p} positions, got {}", x.len()));
    }
    if x.windows(2).any(|w| w[0] >= w[1]) {
        return invalid(format!("positions {x:?} are not strictly increasing"));
    }
    if x.iter().any(|&v| (v - k as i64).rem_euclid(2) != 0) {
        return invalid(format!("positions {x:?} have the wrong parity for time {k}"));
    }
    if wall && x.iter().any(|&v| v < 0) {
        return invalid(format!("positions {x:?} cross the wall"));
    }
    let reachable = start_heights(p)
        .iter()
        .zip(x)
        .all(|(s, v)| (v - s).abs() <= k as i64);
    if !reachable || star_count_or_zero(p, k, x, wall).is_zero() {
        return invalid(format!("positions {x:?} are not reachable at time {k}"));
    }
    let remaining = star_count_or_zero(p, 2 * n - k, x, wall);
    if remaining.is_zero() {
        return invalid(format!(
            "positions {x:?} at time {k} cannot return to the start by time {}",
            2 * n
        ));
    }
    Ok(remaining)
}

/// Exact probability of the move `eps` from cross-section `x` at time `k`.
pub fn step_probability(
    p: usize,
    n: u64,
    k: u64,
    x: &[i64],
    eps: &[i8],
    wall: bool,
) -> Result<ExactProbability> {
    let denominator = cross_section_count(p, n, k, x, wall)?;
    if eps.len() != p {
        return invalid(format!("expected {p} steps, got {}", eps.len()));
    }
    mask_from_eps(eps)?;
    let next: Vec<i64> = x.iter().zip(eps).map(|(&v, &e)| v + i64::from(e)).collect();
    let numerator = star_count_or_zero(p, 2 * n - k - 1, &next, wall);
    ExactProbability::new(numerator, denominator)
}

/// Exact probabilities of all `2^p` moves, indexed by mask.
pub fn step_distribution(
    p: usize,
    n: u64,
    k: u64,
    x: &[i64],
    wall: bool,
) -> Result<Vec<ExactProbability>> {
    let denominator = cross_section_count(p, n, k, x, wall)?;
    (0..1usize << p)
        .map(|mask| {
            let next: Vec<i64> = x
                .iter()
                .zip(eps_from_mask(mask, p))
                .map(|(&v, e)| v + i64::from(e))
                .collect();
            let numerator = star_count_or_zero(p, 2 * n - k - 1, &next, wall);
            ExactProbability::new(numerator, denominator.clone())
        })
        .collect()
}

/// Unnormalized integer move weights, indexed by mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MoveWeights {
    Small(Vec<u128>),
    Large(Vec<BigUint>),
}

impl MoveWeights {
    pub fn len(&self) -> usize {
        match self {
            MoveWeights::Small(w) => w.len(),
            MoveWeights::Large(w) => w.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_big(&self) -> Vec<BigUint> {
        match self {
            MoveWeights::Small(w) => w.iter().map(|&v| BigUint::from(v)).collect(),
            MoveWeights::Large(w) => w.clone(),
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            MoveWeights::Small(w) => w.iter().map(|&v| v as f64).collect(),
            MoveWeights::Large(w) => w.iter().map(|v| v.to_f64().unwrap_or(f64::INFINITY)).collect(),
        }
    }
}

/// Integer factors of `w(eps)`; `None` when some factor is not positive.
fn weight_factors(p: usize, m: u64, x: &[i64], mask: usize, wall: bool, out: &mut Vec<u64>) -> bool {
    out.clear();
    let m = m as i64;
    let p_i = p as i64;
    let step = |i: usize| -> i64 { if mask >> i & 1 == 1 { 1 } else { -1 } };
    for i in 0..p {
        let e = step(i);
        let a = if e == 1 {
            (m - x[i]) / 2 + p_i - 1
        } else if wall {
            (m + x[i]) / 2 + p_i
        } else {
            (m + x[i]) / 2
        };
        out.push(a.max(0) as u64);
        if wall {
            out.push((x[i] + e + 1).max(0) as u64);
        }
        for j in i + 1..p {
            let ej = step(j);
            out.push((x[j] - x[i] + ej - e).max(0) as u64);
            if wall {
                out.push((x[j] + x[i] + ej + e + 2).max(0) as u64);
            }
        }
    }
    out.iter().all(|&f| f > 0)
}

/// Move weights proportional to `N(m-1, x+eps)` for remaining length `m`.
/// The caller guarantees `x` is a valid cross-section with `m >= 1`.
pub fn move_weights(p: usize, m: u64, x: &[i64], wall: bool) -> MoveWeights {
    let mut factors = Vec::with_capacity(2 * p * p);
    let mut small = Vec::with_capacity(1 << p);
    if small_move_weights_into(p, m, x, wall, &mut factors, &mut small) {
        MoveWeights::Small(small)
    } else {
        MoveWeights::Large(move_weights_big(p, m, x, wall))
    }
}

/// Fills `out` with the `u128` weights; `false` if any weight or their sum
/// overflows.
pub(crate) fn small_move_weights_into(
    p: usize,
    m: u64,
    x: &[i64],
    wall: bool,
    factors: &mut Vec<u64>,
    out: &mut Vec<u128>,
) -> bool {
    out.clear();
    let mut total: u128 = 0;
    for mask in 0..1usize << p {
        if !weight_factors(p, m, x, mask, wall, factors) {
            out.push(0);
            continue;
        }
        let mut w: u128 = 1;
        for &f in factors.iter() {
            match w.checked_mul(u128::from(f)) {
                Some(v) => w = v,
                None => return false,
            }
        }
        match total.checked_add(w) {
            Some(t) => total = t,
            None => return false,
        }
        out.push(w);
    }
    true
}

pub(crate) fn move_weights_big(p: usize, m: u64, x: &[i64], wall: bool) -> Vec<BigUint> {
    let mut factors = Vec::new();
    (0..1usize << p)
        .map(|mask| {
            if weight_factors(p, m, x, mask, wall, &mut factors) {
                factors.iter().fold(BigUint::from(1u32), |acc, &f| acc * f)
            } else {
                BigUint::zero()
            }
        })
        .collect()
}

/// Move probabilities from log-gamma evaluations of the closed form,
/// renormalized to sum to 1.
pub fn move_probabilities_lgamma(p: usize, m: u64, x: &[i64], wall: bool) -> Vec<f64> {
    let logs: Vec<f64> = (0..1usize << p)
        .map(|mask| {
            let next: Vec<i64> = x
                .iter()
                .zip(eps_from_mask(mask, p))
                .map(|(&v, e)| v + i64::from(e))
                .collect();
            ln_star_count(p, m - 1, &next, wall)
        })
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = logs.iter().map(|&l| (l - top).exp()).collect();
    let total: f64 = weights.iter().sum();
    weights.iter().map(|w| w / total).collect()
}

#[cfg(test)]
mod tests {
    use num_traits::One;

    use super::*;

    #[test]
    fn examples() {
        let one = ExactProbability::from_u64(1, 1).unwrap();
        let half = ExactProbability::from_u64(1, 2).unwrap();
        assert_eq!(step_probability(1, 2, 0, &[0], &[1], true).unwrap(), one);
        assert_eq!(step_probability(1, 2, 1, &[1], &[1], true).unwrap(), half);
        assert_eq!(step_probability(1, 1, 1, &[1], &[-1], true).unwrap(), one);
        assert!(step_probability(1, 2, 0, &[0], &[-1], true).unwrap().is_zero());
    }

    #[test]
    fn invalid_cross_sections_rejected() {
        // wrong parity
        assert!(step_probability(1, 2, 1, &[0], &[1], true).is_err());
        // out of reach from the start
        assert!(step_probability(1, 3, 1, &[3], &[1], false).is_err());
        // cannot return in time
        assert!(step_probability(1, 2, 3, &[3], &[-1], true).is_err());
        // wall
        assert!(step_probability(1, 2, 1, &[-1], &[1], true).is_err());
        // ordering
        assert!(step_probability(2, 2, 1, &[1, 1], &[1, 1], false).is_err());
        // k out of range
        assert!(step_probability(1, 1, 2, &[0], &[1], true).is_err());
        // bad step value
        assert!(step_probability(1, 2, 1, &[1], &[0], true).is_err());
    }

    #[test]
    fn distribution_sums_to_one() {
        for wall in [true, false] {
            let dist = step_distribution(2, 4, 3, &[1, 3], wall).unwrap();
            let denom = dist[0].denominator().clone();
            let total: BigUint = dist.iter().map(|d| d.numerator().clone()).sum();
            assert_eq!(total, denom);
            assert!(ExactProbability::new(total, denom).unwrap() == ExactProbability::new(BigUint::one(), BigUint::one()).unwrap());
        }
    }

    #[test]
    fn weights_proportional_to_counts() {
        for (p, n, k, x, wall) in [
            (1usize, 5u64, 3u64, vec![1i64], true),
            (2, 5, 4, vec![0, 4], true),
            (2, 5, 4, vec![-2, 2], false),
            (3, 6, 5, vec![1, 3, 7], true),
            (3, 6, 5, vec![-3, 1, 3], false),
        ] {
            let dist = step_distribution(p, n, k, &x, wall).unwrap();
            let weights = move_weights(p, 2 * n - k, &x, wall).to_big();
            let total: BigUint = weights.iter().sum();
            for (d, w) in dist.iter().zip(&weights) {
                assert_eq!(ExactProbability::new(w.clone(), total.clone()).unwrap(), *d);
            }
        }
    }

    #[test]
    fn large_weights_fall_back_to_bigint() {
        let x = [1_000_000, 3_000_000, 9_000_000];
        let w = move_weights(3, 20_000_001, &x, true);
        assert!(matches!(w, MoveWeights::Large(_)));
        assert_eq!(w.len(), 8);
    }

    #[test]
    fn lgamma_probabilities_match_exact() {
        let x = [2i64, 6];
        let exact = step_distribution(2, 40, 10, &x, true).unwrap();
        let approx = move_probabilities_lgamma(2, 70, &x, true);
        for (e, a) in exact.iter().zip(&approx) {
            assert!((e.to_f64() - a).abs() < 1e-12);
        }
    }
}
