use crate::error::{invalid, Result};

/// Mean and standard error (`sd / sqrt(N)` with the `N-1` sample variance).
pub fn mean_se(values: impl IntoIterator<Item = f64>) -> Result<(f64, f64)> {
    let mut n = 0usize;
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for v in values {
        n += 1;
        let delta = v - mean;
        mean += delta / n as f64;
        m2 += delta * (v - mean);
    }
    if n == 0 {
        return invalid("empty sample");
    }
    if n == 1 {
        return Ok((mean, 0.0));
    }
    let var = (m2 / (n - 1) as f64).max(0.0);
    Ok((mean, (var / n as f64).sqrt()))
}

/// Sample mean of `x^order` and its standard error.
pub fn empirical_moment(sample: &[f64], order: u32) -> Result<(f64, f64)> {
    if order == 0 {
        return invalid("moment order must be at least 1");
    }
    mean_se(sample.iter().map(|&x| x.powi(order as i32)))
}
