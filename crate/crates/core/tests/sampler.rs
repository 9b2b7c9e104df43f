use std::collections::HashMap;

use watermelon::discrete_walk::{centered_marginal, enumerate_watermelons, WatermelonPath, WatermelonSampler};
use watermelon::exact_count::count_watermelons;
use watermelon::stats::{chi_square_critical, chi_square_statistic};

fn chi_square_against_enumeration(p: usize, n: u64, wall: bool, samples: usize, seed: u64) -> (f64, f64) {
    let all = enumerate_watermelons(p, n, wall).unwrap();
    let index: HashMap<Vec<i64>, usize> =
        all.iter().enumerate().map(|(i, w)| (w.positions().to_vec(), i)).collect();
    let sampler = WatermelonSampler::new(p, n, wall).unwrap();
    let mut observed = vec![0u64; all.len()];
    for w in sampler.sample_map(seed, samples, |w| w) {
        observed[index[w.positions()]] += 1;
    }
    let expected = vec![samples as f64 / all.len() as f64; all.len()];
    (
        chi_square_statistic(&observed, &expected).unwrap(),
        chi_square_critical(all.len() - 1, 0.01).unwrap(),
    )
}

#[test]
fn sampler_is_uniform_over_small_ensembles() {
    for (p, n, wall) in [(1, 2, true), (1, 3, true), (2, 2, true), (2, 3, false), (3, 2, true)] {
        let (stat, crit) = chi_square_against_enumeration(p, n, wall, 40_000, 17);
        assert!(stat <= crit, "p={p} n={n} wall={wall}: {stat} > {crit}");
    }
}

#[test]
fn log_gamma_path_keeps_uniformity() {
    // force the floating-point move law everywhere
    let all = enumerate_watermelons(2, 3, true).unwrap();
    assert_eq!(all.len() as f64, count_watermelons(2, 3, true).unwrap().to_f64());
    let sampler = WatermelonSampler::new(2, 3, true).unwrap().with_exact_threshold(0);
    let mut seen: HashMap<Vec<i64>, u64> = HashMap::new();
    for w in sampler.sample_map(5, 20_000, |w| w) {
        *seen.entry(w.positions().to_vec()).or_default() += 1;
    }
    let observed: Vec<u64> = all.iter().map(|w| seen.get(w.positions()).copied().unwrap_or(0)).collect();
    let expected = vec![20_000.0 / all.len() as f64; all.len()];
    let stat = chi_square_statistic(&observed, &expected).unwrap();
    assert!(stat <= chi_square_critical(all.len() - 1, 0.01).unwrap(), "{stat}");
}

#[test]
fn samples_are_valid_and_reproducible() {
    let sampler = WatermelonSampler::new(4, 300, false).unwrap();
    let a = sampler.sample(123);
    let b = sampler.sample(123);
    assert_eq!(a, b);
    a.validate().unwrap();
    let back = WatermelonPath::from_csv(&a.to_csv(), false).unwrap();
    assert_eq!(back, a);
}

#[test]
fn centered_midpoint_variance_is_close_to_limit() {
    // p = 1 without wall: variance of the rescaled midpoint tends to t(1-t) = 1/4
    let sampler = WatermelonSampler::new(1, 2048, false).unwrap();
    let xs: Vec<f64> = sampler.sample_map(8, 4000, |w| centered_marginal(&w, 0.5)[0]);
    let var = xs.iter().map(|x| x * x).sum::<f64>() / xs.len() as f64;
    // standard error of the second moment is sqrt(2)/4/sqrt(N)
    assert!((var - 0.25).abs() < 4.0 * 0.3536 / (4000f64).sqrt(), "{var}");
}
