use std::collections::HashMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use watermelon::discrete_walk::{enumerate_watermelons, path_probability, sample_watermelon};
use watermelon::exact_count::{
    count_watermelons, max_relative_error, move_probabilities_lgamma, move_weights, star_count_or_zero,
    start_heights, step_distribution, RatioGrid,
};

/// Transfer-matrix count of non-touching families after `m` steps, keyed by
/// final positions. Independent of the closed forms.
fn transfer_counts(p: usize, m: u64, wall: bool) -> HashMap<Vec<i64>, BigUint> {
    let mut layer = HashMap::from([(start_heights(p), BigUint::one())]);
    for _ in 0..m {
        let mut next: HashMap<Vec<i64>, BigUint> = HashMap::new();
        for (x, c) in &layer {
            for mask in 0..1usize << p {
                let y: Vec<i64> = (0..p).map(|i| x[i] + if mask >> i & 1 == 1 { 1 } else { -1 }).collect();
                if wall && y[0] < 0 {
                    continue;
                }
                if y.windows(2).any(|w| w[0] >= w[1]) {
                    continue;
                }
                *next.entry(y).or_default() += c;
            }
        }
        layer = next;
    }
    layer
}

fn binomial(n: u64, k: u64) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn small_examples() {
    assert_eq!(count_watermelons(1, 3, true).unwrap(), 5);
    assert_eq!(count_watermelons(1, 3, false).unwrap(), 20);
    assert_eq!(count_watermelons(2, 1, false).unwrap(), 3);
    for n in 1..15u64 {
        // Catalan and central binomial numbers
        let catalan = binomial(2 * n, n) / (n + 1);
        assert_eq!(count_watermelons(1, n, true).unwrap().value(), &catalan);
        assert_eq!(count_watermelons(1, n, false).unwrap().value(), &binomial(2 * n, n));
    }
}

#[test]
fn closed_forms_match_transfer_matrix() {
    for p in 1..=3usize {
        for wall in [false, true] {
            for m in 0..=10u64 {
                let oracle = transfer_counts(p, m, wall);
                // every endpoint in a box that also contains unreachable ones
                let lo = if wall { -2 } else { -(m as i64) - 2 };
                let hi = 2 * p as i64 + m as i64 + 2;
                let mut e = vec![0i64; p];
                let mut checked = 0;
                fn rec(i: usize, lo: i64, hi: i64, e: &mut Vec<i64>, f: &mut dyn FnMut(&[i64])) {
                    if i == e.len() {
                        f(e);
                        return;
                    }
                    let start = if i == 0 { lo } else { e[i - 1] + 1 };
                    for v in start..=hi {
                        e[i] = v;
                        rec(i + 1, lo, hi, e, f);
                    }
                }
                rec(0, lo, hi, &mut e, &mut |e| {
                    let expected = oracle.get(e).cloned().unwrap_or_default();
                    assert_eq!(star_count_or_zero(p, m, e, wall), expected, "p={p} m={m} e={e:?} wall={wall}");
                    checked += 1;
                });
                assert!(checked >= oracle.len());
            }
        }
    }
}

#[test]
fn watermelon_counts_split_at_any_time() {
    // N(2n) = sum over cross sections x at time k of N(k, x) N(2n - k, x)
    for p in 1..=3usize {
        for wall in [false, true] {
            let n = 5u64;
            let total = count_watermelons(p, n, wall).unwrap().into_inner();
            for k in 0..=2 * n {
                let sum: BigUint = transfer_counts(p, k, wall)
                    .iter()
                    .map(|(x, c)| c * star_count_or_zero(p, 2 * n - k, x, wall))
                    .sum();
                assert_eq!(sum, total, "p={p} wall={wall} k={k}");
            }
        }
    }
}

#[test]
fn every_enumerated_path_has_probability_one_over_count() {
    for (p, n, wall) in [(1, 4, true), (2, 3, false), (2, 3, true), (3, 2, true)] {
        let paths = enumerate_watermelons(p, n, wall).unwrap();
        let count = count_watermelons(p, n, wall).unwrap().into_inner();
        assert_eq!(BigUint::from(paths.len()), count);
        for path in &paths {
            let prob = path_probability(path).unwrap().to_ratio();
            assert_eq!(prob, BigRational::new(1.into(), count.clone().into()));
        }
    }
}

#[test]
fn float_move_probabilities_agree_with_exact_weights() {
    for (p, wall) in [(1, true), (2, false), (3, true)] {
        let n = 512u64;
        let path = sample_watermelon(p, n, wall, 99).unwrap();
        for k in [0usize, 100, 511, 700, 1000] {
            let x = path.at(k);
            let m = 2 * n - k as u64;
            let exact = move_weights(p, m, x, wall).to_f64();
            let total: f64 = exact.iter().sum();
            let approx = move_probabilities_lgamma(p, m, x, wall);
            for (a, b) in exact.iter().zip(&approx) {
                assert!((a / total - b).abs() < 1e-9, "p={p} k={k}: {} vs {b}", a / total);
            }
        }
    }
}

#[test]
fn factorial_ratio_error_shrinks_like_inverse_sqrt() {
    let grid = RatioGrid::default();
    let errs: Vec<f64> = [100u64, 1000, 10_000].iter().map(|&n| max_relative_error(n, &grid).unwrap()).collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    for (n, e) in [100f64, 1000.0, 10_000.0].iter().zip(&errs) {
        assert!(e * n.sqrt() <= 5.0, "n={n}: {e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn step_distribution_is_exactly_normalized(p in 1usize..=3, n in 1u64..=20, wall: bool, seed: u64, frac in 0.0f64..1.0) {
        let path = sample_watermelon(p, n, wall, seed).unwrap();
        let k = ((2 * n) as f64 * frac) as u64;
        let k = k.min(2 * n - 1);
        let dist = step_distribution(p, n, k, path.at(k as usize), wall).unwrap();
        let sum = dist.iter().fold(BigRational::zero(), |acc, q| acc + q.to_ratio());
        prop_assert_eq!(sum, BigRational::one());
    }

    #[test]
    fn nowall_counts_dominate_wall_counts(p in 1usize..=3, n in 1u64..=12) {
        let with = count_watermelons(p, n, true).unwrap().into_inner();
        let without = count_watermelons(p, n, false).unwrap().into_inner();
        prop_assert!(with <= without);
    }
}
