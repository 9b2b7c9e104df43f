use crate::error::{invalid, Result};

/// Asymptotic Kolmogorov critical constant at the 5% level.
pub const KS_C_05: f64 = 1.358;

/// Asymptotic critical constant `c(alpha) = sqrt(-ln(alpha/2)/2)`; `KS_C_05`
/// at `alpha = 0.05`.
pub fn ks_c_alpha(alpha: f64) -> f64 {
    if alpha == 0.05 {
        KS_C_05
    } else {
        (-0.5 * (alpha / 2.0).ln()).sqrt()
    }
}

/// One-sample 5% critical value `1.358 / sqrt(n)`.
pub fn ks_critical(n: usize) -> f64 {
    KS_C_05 / (n as f64).sqrt()
}

pub fn ks_two_sample_critical(n: usize, m: usize, alpha: f64) -> f64 {
    let (n, m) = (n as f64, m as f64);
    ks_c_alpha(alpha) * ((n + m) / (n * m)).sqrt()
}

fn sorted(sample: &[f64]) -> Result<Vec<f64>> {
    if sample.is_empty() {
        return invalid("KS statistic needs a non-empty sample");
    }
    if sample.iter().any(|v| v.is_nan()) {
        return invalid("sample contains NaN");
    }
    let mut v = sample.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// `sup_x |F_N(x) - cdf(x)|`.
pub fn ks_statistic(sample: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    let v = sorted(sample)?;
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in v.iter().enumerate() {
        let c = cdf(x);
        d = d.max((i + 1) as f64 / n - c).max(c - i as f64 / n);
    }
    Ok(d)
}

/// Two-sample statistic `sup_x |F_a(x) - F_b(x)|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    let a = sorted(a)?;
    let b = sorted(b)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}
