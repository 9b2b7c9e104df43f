use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{domain, invalid, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chamber {
    Wall,
    NoWall,
}

impl Chamber {
    pub fn from_wall(wall: bool) -> Self {
        if wall {
            Chamber::Wall
        } else {
            Chamber::NoWall
        }
    }

    pub fn is_wall(self) -> bool {
        self == Chamber::Wall
    }

    /// Whether `x` lies in the open chamber (`x_1 > 0` under the wall).
    pub fn contains<F: Real>(self, x: &[F]) -> bool {
        x.windows(2).all(|w| w[0] < w[1]) && (self == Chamber::NoWall || x.first().map_or(true, |&v| v > F::zero()))
    }
}

/// A strictly ordered point of the Weyl chamber.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChamberPoint<F> {
    x: Vec<F>,
    chamber: Chamber,
}

impl<F: Real> ChamberPoint<F> {
    pub fn new(x: Vec<F>, chamber: Chamber) -> Result<Self> {
        if x.is_empty() {
            return invalid("chamber point needs at least one coordinate");
        }
        if x.iter().any(|v| !v.is_finite()) {
            return invalid("chamber point has non-finite coordinates");
        }
        if x.windows(2).any(|w| w[0] >= w[1]) {
            return invalid(format!("coordinates {x:?} are not strictly increasing"));
        }
        if chamber == Chamber::Wall && x[0] < F::zero() {
            return invalid(format!("coordinates {x:?} cross the wall"));
        }
        Ok(Self { x, chamber })
    }

    pub fn x(&self) -> &[F] {
        &self.x
    }

    pub fn chamber(&self) -> Chamber {
        self.chamber
    }

    pub fn into_inner(self) -> Vec<F> {
        self.x
    }

    /// Multiplies every coordinate by a positive factor.
    pub fn scaled(mut self, factor: F) -> Self {
        assert!(factor > F::zero(), "scale factor must be positive");
        for v in &mut self.x {
            *v *= factor;
        }
        self
    }

    pub fn norm_sq(&self) -> F {
        self.x.iter().fold(F::zero(), |acc, &v| acc + v * v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityParams<F> {
    pub p: usize,
    pub t: F,
    pub wall: bool,
}

impl<F: Real> DensityParams<F> {
    pub fn new(p: usize, t: F, wall: bool) -> Result<Self> {
        if p == 0 {
            return domain("p must be at least 1");
        }
        if !(t > F::zero() && t < F::one()) {
            return domain(format!("t = {t} must lie in (0, 1)"));
        }
        Ok(Self { p, t, wall })
    }

    fn check(&self) -> Result<()> {
        Self::new(self.p, self.t, self.wall).map(|_| ())
    }

    pub fn variance_scale(&self) -> F {
        self.t * (F::one() - self.t)
    }
}

/// `2 sqrt(t(1-t))`: wall marginal at `t` over the one at `1/2`.
pub fn wall_scale<F: Real>(t: F) -> F {
    F::lit(2.0) * (t * (F::one() - t)).sqrt()
}

/// `sqrt(2 t(1-t))`: no-wall marginal at `t` over the GUE spectrum.
pub fn nowall_scale<F: Real>(t: F) -> F {
    (F::lit(2.0) * t * (F::one() - t)).sqrt()
}

/// `ln c_p` with `c_p = 2^{3p/2} p! / ((2p)! pi^{p/2} prod_{i<j} (j-i)(j+i-1))`.
pub fn ln_wall_constant(p: usize) -> f64 {
    let pf = p as f64;
    let mut acc = 1.5 * pf * std::f64::consts::LN_2 + ln_gamma(pf + 1.0) - ln_gamma(2.0 * pf + 1.0)
        - 0.5 * pf * std::f64::consts::PI.ln();
    for i in 1..=p {
        for j in i + 1..=p {
            acc -= (((j - i) * (j + i - 1)) as f64).ln();
        }
    }
    acc
}

/// `ln` of `2^{-p/2} pi^{-p/2} / prod_{i<p} i!`.
pub fn ln_nowall_constant(p: usize) -> f64 {
    let pf = p as f64;
    let mut acc = -0.5 * pf * (std::f64::consts::LN_2 + std::f64::consts::PI.ln());
    for i in 1..p {
        acc -= ln_gamma(i as f64 + 1.0);
    }
    acc
}

fn check_len<F>(params: &DensityParams<F>, x: &[F]) -> Result<()> {
    if x.len() != params.p {
        return invalid(format!("expected {} coordinates, got {}", params.p, x.len()));
    }
    Ok(())
}

/// Limit marginal density with the wall:
/// `c_p s^{-(p^2+p/2)} prod_{i<j} (x_j^2-x_i^2)^2 prod x_i^2 exp(-|x|^2/(2s))`
/// on `0 <= x_1 < ... < x_p`, 0 elsewhere.
pub fn density_wall<F: Real>(params: &DensityParams<F>, x: &[F]) -> Result<F> {
    params.check()?;
    check_len(params, x)?;
    if !Chamber::Wall.contains(x) {
        return Ok(F::zero());
    }
    let p = params.p;
    let s = params.variance_scale();
    let mut poly = F::one();
    let mut norm = F::zero();
    for i in 0..p {
        poly *= x[i] * x[i];
        norm += x[i] * x[i];
        for j in i + 1..p {
            let d = x[j] * x[j] - x[i] * x[i];
            poly *= d * d;
        }
    }
    let pf = p as f64;
    let ln_pref = F::lit(ln_wall_constant(p)) - F::lit(pf * pf + pf / 2.0) * s.ln();
    Ok((ln_pref - norm / (F::lit(2.0) * s)).exp() * poly)
}

/// Limit marginal density without the wall:
/// `2^{-p/2} pi^{-p/2} s^{-p^2/2} / prod_{i<p} i! * prod_{i<j} (x_j-x_i)^2 exp(-|x|^2/(2s))`
/// on `x_1 < ... < x_p`, 0 elsewhere.
pub fn density_nowall<F: Real>(params: &DensityParams<F>, x: &[F]) -> Result<F> {
    params.check()?;
    check_len(params, x)?;
    if !Chamber::NoWall.contains(x) {
        return Ok(F::zero());
    }
    let p = params.p;
    let s = params.variance_scale();
    let mut poly = F::one();
    let mut norm = F::zero();
    for i in 0..p {
        norm += x[i] * x[i];
        for j in i + 1..p {
            let d = x[j] - x[i];
            poly *= d * d;
        }
    }
    let pf = p as f64;
    let ln_pref = F::lit(ln_nowall_constant(p)) - F::lit(pf * pf / 2.0) * s.ln();
    Ok((ln_pref - norm / (F::lit(2.0) * s)).exp() * poly)
}

/// Dispatches on `params.wall`.
pub fn density<F: Real>(params: &DensityParams<F>, x: &[F]) -> Result<F> {
    if params.wall {
        density_wall(params, x)
    } else {
        density_nowall(params, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: usize, t: f64, wall: bool) -> DensityParams<f64> {
        DensityParams::new(p, t, wall).unwrap()
    }

    #[test]
    fn p1_wall_closed_form() {
        for &t in &[0.1, 0.5, 0.8] {
            let s: f64 = t * (1.0 - t);
            for &x in &[0.05, 0.3, 1.2] {
                let expected = (2.0 / std::f64::consts::PI).sqrt() * s.powf(-1.5) * x * x * (-x * x / (2.0 * s)).exp();
                let got = density_wall(&params(1, t, true), &[x]).unwrap();
                assert!((got - expected).abs() < 1e-13 * expected.max(1.0));
            }
        }
    }

    #[test]
    fn p1_nowall_is_normal() {
        let t = 0.3;
        let s: f64 = t * (1.0 - t);
        for &x in &[-1.0, 0.0, 0.4] {
            let expected = (-x * x / (2.0 * s)).exp() / (2.0 * std::f64::consts::PI * s).sqrt();
            let got = density_nowall(&params(1, t, false), &[x]).unwrap();
            assert!((got - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn p2_wall_constant_is_one_over_three_pi() {
        assert!((ln_wall_constant(2).exp() - 1.0 / (3.0 * std::f64::consts::PI)).abs() < 1e-15);
    }

    #[test]
    fn ties_and_outside_give_zero() {
        assert_eq!(density_wall(&params(2, 0.5, true), &[0.7, 0.7]).unwrap(), 0.0);
        assert_eq!(density_nowall(&params(2, 0.5, false), &[0.7, 0.7]).unwrap(), 0.0);
        assert_eq!(density_wall(&params(2, 0.5, true), &[-0.1, 0.7]).unwrap(), 0.0);
        assert_eq!(density_nowall(&params(3, 0.5, false), &[0.0, 2.0, 1.0]).unwrap(), 0.0);
        assert_eq!(density_wall(&params(1, 0.5, true), &[0.0]).unwrap(), 0.0);
    }

    #[test]
    fn domain_errors() {
        assert!(DensityParams::new(1, 0.0, true).is_err());
        assert!(DensityParams::new(1, 1.0, true).is_err());
        assert!(DensityParams::new(0, 0.5, true).is_err());
        assert!(density_wall(&DensityParams { p: 1, t: 1.5, wall: true }, &[1.0]).is_err());
        assert!(density_wall(&params(2, 0.5, true), &[1.0]).is_err());
    }

    #[test]
    fn scaling_identity() {
        for wall in [true, false] {
            for &t in &[0.1f64, 0.25, 0.6, 0.9] {
                let x = if wall { vec![0.2, 0.5, 0.9] } else { vec![-0.4, 0.1, 0.7] };
                let (scale, base) = if wall { (wall_scale(t), 0.5) } else { (nowall_scale(t) / nowall_scale(0.5), 0.5) };
                let y: Vec<f64> = x.iter().map(|v| v / scale).collect();
                let lhs = density(&params(3, t, wall), &x).unwrap();
                let rhs = density(&params(3, base, wall), &y).unwrap() / scale.powi(3);
                assert!((lhs - rhs).abs() < 1e-12 * lhs.abs().max(1e-300), "{wall} {t}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn f32_matches_f64() {
        let d64 = density_wall(&params(2, 0.4, true), &[0.3, 0.8]).unwrap();
        let d32 = density_wall(&DensityParams::<f32>::new(2, 0.4, true).unwrap(), &[0.3f32, 0.8]).unwrap();
        assert!((d64 - f64::from(d32)).abs() < 1e-5 * d64);
    }

    #[test]
    fn chamber_point_validation() {
        assert!(ChamberPoint::new(vec![0.1, 0.2], Chamber::Wall).is_ok());
        assert!(ChamberPoint::new(vec![-0.1, 0.2], Chamber::Wall).is_err());
        assert!(ChamberPoint::new(vec![-0.1, 0.2], Chamber::NoWall).is_ok());
        assert!(ChamberPoint::new(vec![0.2, 0.2], Chamber::NoWall).is_err());
        assert!(ChamberPoint::<f64>::new(vec![], Chamber::NoWall).is_err());
        let pt = ChamberPoint::new(vec![1.0, 2.0], Chamber::Wall).unwrap().scaled(2.0);
        assert_eq!(pt.x(), &[2.0, 4.0]);
        assert_eq!(pt.norm_sq(), 20.0);
    }
}
