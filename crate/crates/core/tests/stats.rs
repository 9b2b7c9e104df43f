use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use watermelon::stats::{gamma_cdf, integrate, ks_statistic, mean_se, normal_cdf, KS_C_05};

/// Kolmogorov tail `P(K > x) = 2 sum (-1)^{k-1} exp(-2 k^2 x^2)`.
fn kolmogorov_tail(x: f64) -> f64 {
    2.0 * (1..100).map(|k| {
        let k = k as f64;
        (if k as u64 % 2 == 1 { 1.0 } else { -1.0 }) * (-2.0 * k * k * x * x).exp()
    }).sum::<f64>()
}

#[test]
fn ks_constant_has_five_percent_tail() {
    assert!((kolmogorov_tail(KS_C_05) - 0.05).abs() < 1e-3);
}

#[test]
fn gamma_median_by_bisection() {
    let (mut lo, mut hi) = (0.0, 20.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if gamma_cdf(5.0, 1.0, mid).unwrap() < 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    assert!((lo - 4.670_909_1).abs() < 1e-6, "{lo}");
}

#[test]
fn gamma_cdf_matches_quadrature_of_density() {
    for (shape, scale) in [(0.5, 2.0), (2.5, 0.5), (5.0, 1.0), (12.0, 0.125)] {
        let ln_norm = statrs::function::gamma::ln_gamma(shape) + shape * f64::ln(scale);
        for x in [0.1f64, 0.7, 2.0, 5.0] {
            // substitute u = sqrt(y) to remove the y^{-1/2} singularity at 0
            let q = integrate(
                |u: f64| 2.0 * u * ((shape - 1.0) * (u * u).ln() - u * u / scale - ln_norm).exp(),
                0.0,
                x.sqrt(),
                1e-13,
                1e-12,
            )
            .unwrap();
            let c = gamma_cdf(shape, scale, x).unwrap();
            assert!((q.value - c).abs() < 1e-9, "Gamma({shape},{scale}) at {x}: {} vs {c}", q.value);
        }
    }
}

#[test]
fn gamma_special_cases() {
    for x in [0.3, 1.0, 4.0] {
        assert!((gamma_cdf(1.0, 2.0, x).unwrap() - (1.0 - (-x / 2.0).exp())).abs() < 1e-14);
        let chi1 = 2.0 * normal_cdf(x.sqrt(), 0.0, 1.0) - 1.0;
        assert!((gamma_cdf(0.5, 2.0, x).unwrap() - chi1).abs() < 1e-13);
    }
    assert!(gamma_cdf(0.0, 1.0, 1.0).is_err());
    assert!(gamma_cdf(1.0, -1.0, 1.0).is_err());
}

#[test]
fn ks_rejects_at_nominal_rate_under_null() {
    let seeds = 300;
    let mut rejections = 0;
    for seed in 0..seeds {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let xs: Vec<f64> = (0..1000).map(|_| rng.random::<f64>()).collect();
        if ks_statistic(&xs, |x| x.clamp(0.0, 1.0)).unwrap() > KS_C_05 / (1000f64).sqrt() {
            rejections += 1;
        }
    }
    let rate = rejections as f64 / seeds as f64;
    assert!((rate - 0.05).abs() <= 0.03, "{rate}");
}

#[test]
fn mean_and_standard_error_of_normal_square() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let xs = (0..20_000).map(|_| {
        let z: f64 = rng.sample(rand_distr::StandardNormal);
        z * z
    });
    let (mean, se) = mean_se(xs).unwrap();
    assert!((mean - 1.0).abs() < 3.0 * se, "{mean} {se}");
}
