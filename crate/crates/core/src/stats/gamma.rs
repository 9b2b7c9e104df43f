use statrs::function::gamma::gamma_lr;

use crate::error::{domain, Result};

/// CDF of the Gamma law with the given shape and scale at `x`
/// (regularized lower incomplete gamma `P(shape, x/scale)`).
pub fn gamma_cdf(shape: f64, scale: f64, x: f64) -> Result<f64> {
    if !(shape > 0.0 && shape.is_finite()) || !(scale > 0.0 && scale.is_finite()) {
        return domain(format!("gamma_cdf needs positive shape and scale, got ({shape}, {scale})"));
    }
    if !(x >= 0.0) {
        return domain(format!("gamma_cdf needs x >= 0, got {x}"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    Ok(gamma_lr(shape, x / scale))
}

/// Dimension `d` of the squared-norm Bessel bridge: `p(2p+1)` with the wall,
/// `p^2` without.
pub fn norm_dimension(p: usize, wall: bool) -> usize {
    if wall {
        p * (2 * p + 1)
    } else {
        p * p
    }
}

/// `(shape, scale) = (d/2, 2 t(1-t))`, the law of `|X(t)|^2`.
pub fn norm_sq_law(p: usize, wall: bool, t: f64) -> (f64, f64) {
    (norm_dimension(p, wall) as f64 / 2.0, 2.0 * t * (1.0 - t))
}

pub fn normal_cdf(x: f64, mean: f64, sd: f64) -> f64 {
    0.5 * libm::erfc(-(x - mean) / (sd * std::f64::consts::SQRT_2))
}
