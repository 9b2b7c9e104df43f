use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};

use super::density::{Chamber, ChamberPoint};
use super::matrix::{JacobiSolver, SymmetricMatrix};
use crate::error::{invalid, Result};
use crate::rng::rng_from_seed;
use crate::scalar::Real;

/// Standard deviation of the independent entries of the antisymmetric matrix.
pub const WALL_ENTRY_SD: f64 = 0.5;

fn check_p(p: usize) -> Result<()> {
    if p == 0 {
        return invalid("p must be at least 1");
    }
    if 2 * p + 1 > 64 {
        return invalid(format!("p = {p} exceeds the eigensolver size cap"));
    }
    Ok(())
}

/// One draw of the wall marginal at `t = 1/2`.
///
/// Takes a `(2p+1)`-square antisymmetric `A` with `N(0, 1/4)` entries above
/// the diagonal. The spectrum of `A^T A` is one zero plus `p` doubled values
/// `lambda_i^2`; each pair is averaged before taking the square root.
pub fn sample_wall_spectrum_with<F: Real, R: Rng + ?Sized>(p: usize, rng: &mut R) -> Result<ChamberPoint<F>> {
    check_p(p)?;
    let n = 2 * p + 1;
    let mut a = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let z: f64 = StandardNormal.sample(rng);
            a[i][j] = WALL_ENTRY_SD * z;
            a[j][i] = -a[i][j];
        }
    }
    let b = SymmetricMatrix::<F>::from_fn(n, |i, j| {
        let dot: f64 = (0..n).map(|k| a[k][i] * a[k][j]).sum();
        F::lit(dot)
    });
    let mu = JacobiSolver::relative(&b).eigenvalues(&b)?;
    let x = (0..p)
        .map(|i| {
            let pair = (mu[2 * i + 1] + mu[2 * i + 2]) / F::lit(2.0);
            pair.max(F::zero()).sqrt()
        })
        .collect();
    ChamberPoint::new(x, Chamber::Wall)
}

pub fn sample_wall_spectrum<F: Real>(p: usize, seed: u64) -> Result<ChamberPoint<F>> {
    sample_wall_spectrum_with(p, &mut rng_from_seed(seed))
}

/// One draw with density proportional to `prod_{i<j} (x_j-x_i)^2 exp(-|x|^2)`.
///
/// Uses the tridiagonal model: diagonal `N(0, 2)`, off-diagonal
/// `chi_{2(p-1)}, ..., chi_2`, eigenvalues halved.
pub fn sample_gue_spectrum_with<F: Real, R: Rng + ?Sized>(p: usize, rng: &mut R) -> Result<ChamberPoint<F>> {
    check_p(p)?;
    let diag: Vec<f64> = (0..p)
        .map(|_| std::f64::consts::SQRT_2 * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng))
        .collect();
    let off: Vec<f64> = (1..p)
        .map(|i| {
            let k = 2.0 * (p - i) as f64;
            ChiSquared::new(k).expect("positive degrees of freedom").sample(rng).sqrt()
        })
        .collect();
    let t = SymmetricMatrix::<F>::from_fn(p, |i, j| {
        if i == j {
            F::lit(diag[i])
        } else if i == j + 1 {
            F::lit(off[j])
        } else {
            F::zero()
        }
    });
    let ev = JacobiSolver::relative(&t).eigenvalues(&t)?;
    ChamberPoint::new(ev.into_iter().map(|v| v / F::lit(2.0)).collect(), Chamber::NoWall)
}

pub fn sample_gue_spectrum<F: Real>(p: usize, seed: u64) -> Result<ChamberPoint<F>> {
    sample_gue_spectrum_with(p, &mut rng_from_seed(seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        let a: ChamberPoint<f64> = sample_wall_spectrum(3, 11).unwrap();
        let b: ChamberPoint<f64> = sample_wall_spectrum(3, 11).unwrap();
        assert_eq!(a, b);
        let c: ChamberPoint<f64> = sample_gue_spectrum(3, 11).unwrap();
        assert_eq!(c, sample_gue_spectrum(3, 11).unwrap());
    }

    #[test]
    fn wall_second_moment() {
        // E|L|^2 = p(2p+1)/4 for the t = 1/2 wall marginal.
        let mut rng = rng_from_seed(5);
        let p = 2;
        let n = 20_000;
        let mean: f64 = (0..n)
            .map(|_| sample_wall_spectrum_with::<f64, _>(p, &mut rng).unwrap().norm_sq())
            .sum::<f64>()
            / n as f64;
        assert!((mean - 2.5).abs() < 0.05, "{mean}");
    }

    #[test]
    fn gue_second_moment() {
        let mut rng = rng_from_seed(6);
        let p = 3;
        let n = 20_000;
        let mean: f64 = (0..n)
            .map(|_| sample_gue_spectrum_with::<f64, _>(p, &mut rng).unwrap().norm_sq())
            .sum::<f64>()
            / n as f64;
        assert!((mean - 4.5).abs() < 0.1, "{mean}");
    }

    #[test]
    fn f32_sampling_works() {
        let pt: ChamberPoint<f32> = sample_wall_spectrum(4, 1).unwrap();
        assert_eq!(pt.x().len(), 4);
        assert!(pt.x()[0] > 0.0);
    }

    #[test]
    fn rejects_bad_p() {
        assert!(sample_wall_spectrum::<f64>(0, 1).is_err());
        assert!(sample_gue_spectrum::<f64>(40, 1).is_err());
    }
}
