use watermelon::moments::{
    moment_nowall_p2, moment_wall_p2, normalized_moment, reference_table, sym_nowall_expectation,
    sym_wall_expectation,
};
use watermelon::spectral_laws::{density, DensityParams};
use watermelon::stats::integrate;

fn quad(f: impl FnMut(f64) -> f64, a: f64, b: f64) -> f64 {
    integrate(f, a, b, 1e-13, 1e-12).unwrap().value
}

/// `E[g(X)]` under the limit law for p = 1 or 2, by nested quadrature.
fn expectation(p: usize, wall: bool, t: f64, g: impl Fn(&[f64]) -> f64 + Copy) -> f64 {
    let params = DensityParams::new(p, t, wall).unwrap();
    let r = 12.0 * (t * (1.0 - t)).sqrt();
    let lo = if wall { 0.0 } else { -r };
    let f = |x: &[f64]| density(&params, x).unwrap() * g(x);
    match p {
        1 => quad(|x| f(&[x]), lo, r),
        2 => quad(|x2| quad(|x1| f(&[x1, x2]), lo, x2), lo, r),
        _ => unreachable!(),
    }
}

#[test]
fn p2_moments_match_quadrature() {
    let t = 0.3;
    for wall in [false, true] {
        for branch in [1, 2] {
            for order in 1..=6u32 {
                let closed = if wall {
                    moment_wall_p2(branch, order, t).unwrap()
                } else {
                    moment_nowall_p2(branch, order, t).unwrap()
                };
                let q = expectation(2, wall, t, |x| x[branch - 1].powi(order as i32));
                let scale = (t * (1.0 - t)).powf(f64::from(order) / 2.0);
                assert!(
                    (closed - q).abs() <= 1e-8 * scale,
                    "wall={wall} b={branch} k={order}: {closed} vs {q}"
                );
            }
        }
    }
}

#[test]
fn table_agrees_with_closed_forms() {
    let table = reference_table();
    assert_eq!(table.len(), 24);
    for e in table {
        let c = normalized_moment(e.wall, e.branch, e.order).unwrap();
        assert!((c - e.value).abs() <= 1e-12 * e.value.abs(), "{e:?}: {c}");
    }
}

#[test]
fn symmetric_expectations_match_quadrature() {
    let t = 0.6;
    // p = 1: E[X^2] with the wall, E[X] = 0 without
    let q = expectation(1, true, t, |x| x[0] * x[0]);
    assert!((sym_wall_expectation(1, 1, t).unwrap() - q).abs() < 1e-9);
    assert_eq!(sym_nowall_expectation(1, 1, t).unwrap(), 0.0);
    // p = 2
    let e1w = expectation(2, true, t, |x| x[0] * x[0] + x[1] * x[1]);
    let e2w = expectation(2, true, t, |x| x[0] * x[0] * x[1] * x[1]);
    assert!((sym_wall_expectation(2, 1, t).unwrap() - e1w).abs() < 1e-9, "{e1w}");
    assert!((sym_wall_expectation(2, 2, t).unwrap() - e2w).abs() < 1e-9, "{e2w}");
    let e1 = expectation(2, false, t, |x| x[0] + x[1]);
    let e2 = expectation(2, false, t, |x| x[0] * x[1]);
    assert!(e1.abs() < 1e-9, "{e1}");
    assert!((sym_nowall_expectation(2, 2, t).unwrap() - e2).abs() < 1e-9, "{e2}");
}

#[test]
fn symmetric_closed_forms_small_cases() {
    // with the wall, e_1 is the squared norm: p(2p+1) s
    let s = 0.25;
    for p in 1..=5 {
        let v = sym_wall_expectation(p, 1, 0.5).unwrap();
        assert!((v - (p * (2 * p + 1)) as f64 * s).abs() < 1e-14);
    }
    // without the wall, e_2 = ((sum x)^2 - |x|^2)/2 has mean -p(p-1)/2 s
    for p in 2..=5 {
        let v = sym_nowall_expectation(p, 2, 0.5).unwrap();
        assert!((v + (p * (p - 1)) as f64 / 2.0 * s).abs() < 1e-14);
    }
    assert!(sym_wall_expectation(2, 3, 0.5).is_err());
    assert!(moment_wall_p2(3, 1, 0.5).is_err());
    assert!(moment_nowall_p2(1, 1, 1.0).is_err());
}
