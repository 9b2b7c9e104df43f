//! Euler–Maruyama integration of the limit SDEs on `[t0, 1 - t0]`.
//!
//! The state starts from an exact draw of the marginal at `t0` and moves by
//! `x <- x + b(t, x) h + sqrt(h) G` with `G` a vector of independent standard
//! normals (ziggurat sampling from `rand_distr::StandardNormal`). A proposal
//! that leaves the open chamber, or brings a gap (or, with the wall, the
//! lowest branch) below `gap_floor`, is discarded; the step is halved and a
//! fresh increment drawn. After an accepted step the step size doubles back
//! towards `dt`. The process is pinned to 0 at `t = 1`; the last `t0` is not
//! simulated.

mod batch;

pub use batch::{simulate_batch, BatchOutcome, BatchSummary, TimeSummary};

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::rng::rng_from_seed;
use crate::scalar::Real;
use crate::spectral_laws::{
    nowall_scale, sample_gue_spectrum_with, sample_wall_spectrum_with, wall_scale, Chamber,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdeConfig<F> {
    pub p: usize,
    pub wall: bool,
    pub t0: F,
    pub dt: F,
    pub gap_floor: F,
    pub max_halvings: u32,
    pub seed: u64,
}

impl<F: Real> SdeConfig<F> {
    pub fn new(p: usize, wall: bool, seed: u64) -> Self {
        Self {
            p,
            wall,
            t0: F::lit(0.02),
            dt: F::lit(1e-4),
            gap_floor: F::lit(1e-3),
            max_halvings: 40,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p == 0 {
            return invalid("p must be at least 1");
        }
        if !(self.t0 > F::zero() && self.t0 < F::lit(0.5)) {
            return invalid(format!("t0 = {} must lie in (0, 1/2)", self.t0));
        }
        if !(self.dt > F::zero()) || !self.dt.is_finite() {
            return invalid("dt must be positive");
        }
        if !(self.gap_floor > F::zero()) {
            return invalid("gap_floor must be positive");
        }
        Ok(())
    }

    pub fn chamber(&self) -> Chamber {
        Chamber::from_wall(self.wall)
    }

    pub fn t_end(&self) -> F {
        F::one() - self.t0
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory<F> {
    pub times: Vec<F>,
    pub values: Vec<Vec<F>>,
    /// Number of rejected proposals (each one halves the step).
    pub halvings: u64,
}

impl<F: Real> Trajectory<F> {
    pub fn p(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Recorded states that break strict ordering (or positivity with the wall).
    pub fn violations(&self, chamber: Chamber) -> usize {
        self.values.iter().filter(|x| !chamber.contains(x)).count()
    }

    /// `t,x_1,...,x_p` with a header row.
    pub fn to_csv(&self) -> String {
        let p = self.p();
        let mut out = String::from("t");
        for i in 1..=p {
            out.push_str(&format!(",x_{i}"));
        }
        out.push('\n');
        for (t, x) in self.times.iter().zip(&self.values) {
            out.push_str(&t.as_f64().to_string());
            for v in x {
                out.push(',');
                out.push_str(&v.as_f64().to_string());
            }
            out.push('\n');
        }
        out
    }
}

fn singular<F: Real>(x: &[F]) -> Error {
    Error::SingularDrift { x: x.iter().map(|v| v.as_f64()).collect() }
}

fn check_time<F: Real>(t: F) -> Result<()> {
    if !(t > F::zero() && t < F::one()) {
        return Err(Error::Domain(format!("t = {t} must lie in (0, 1)")));
    }
    Ok(())
}

/// `-x_i/(1-t) + 1/x_i + sum_{j != i} 2 x_i / (x_i^2 - x_j^2)`, written into `out`.
pub fn drift_wall_into<F: Real>(t: F, x: &[F], out: &mut [F]) -> Result<()> {
    if !Chamber::Wall.contains(x) {
        return Err(singular(x));
    }
    let pin = F::one() / (F::one() - t);
    for i in 0..x.len() {
        let xi = x[i];
        let mut b = -xi * pin + F::one() / xi;
        for (j, &xj) in x.iter().enumerate() {
            if j != i {
                b += F::lit(2.0) * xi / (xi * xi - xj * xj);
            }
        }
        out[i] = b;
    }
    Ok(())
}

/// `-x_i/(1-t) + sum_{j != i} 1/(x_i - x_j)`, written into `out`.
pub fn drift_nowall_into<F: Real>(t: F, x: &[F], out: &mut [F]) -> Result<()> {
    if !Chamber::NoWall.contains(x) {
        return Err(singular(x));
    }
    let pin = F::one() / (F::one() - t);
    for i in 0..x.len() {
        let xi = x[i];
        let mut b = -xi * pin;
        for (j, &xj) in x.iter().enumerate() {
            if j != i {
                b += F::one() / (xi - xj);
            }
        }
        out[i] = b;
    }
    Ok(())
}

fn check_drift_args<F: Real>(p: usize, t: F, x: &[F]) -> Result<()> {
    if x.len() != p {
        return invalid(format!("expected {p} coordinates, got {}", x.len()));
    }
    check_time(t)
}

pub fn drift_wall<F: Real>(p: usize, t: F, x: &[F]) -> Result<Vec<F>> {
    check_drift_args(p, t, x)?;
    let mut out = vec![F::zero(); p];
    drift_wall_into(t, x, &mut out)?;
    Ok(out)
}

pub fn drift_nowall<F: Real>(p: usize, t: F, x: &[F]) -> Result<Vec<F>> {
    check_drift_args(p, t, x)?;
    let mut out = vec![F::zero(); p];
    drift_nowall_into(t, x, &mut out)?;
    Ok(out)
}

/// Smallest gap between neighbours, including the distance to the wall.
pub fn min_gap<F: Real>(x: &[F], wall: bool) -> F {
    let mut gap = F::infinity();
    if wall {
        if let Some(&first) = x.first() {
            gap = first;
        }
    }
    for w in x.windows(2) {
        gap = gap.min(w[1] - w[0]);
    }
    gap
}

/// Exact draw of the marginal at time `t`.
pub fn sample_initial<F: Real, R: Rng + ?Sized>(p: usize, wall: bool, t: F, rng: &mut R) -> Result<Vec<F>> {
    let point = if wall {
        sample_wall_spectrum_with::<F, _>(p, rng)?.scaled(wall_scale(t))
    } else {
        sample_gue_spectrum_with::<F, _>(p, rng)?.scaled(nowall_scale(t))
    };
    Ok(point.into_inner())
}

/// Integrates one trajectory, calling `record(t, x)` at `t0`, after every
/// accepted step, and nowhere else. Every time in `stops` (sorted, inside the
/// window) is hit exactly by a step. Returns the number of halvings.
pub fn integrate<F: Real>(
    config: &SdeConfig<F>,
    stops: &[F],
    mut record: impl FnMut(F, &[F]),
) -> Result<u64> {
    config.validate()?;
    let p = config.p;
    let mut rng = rng_from_seed(config.seed);
    let t_end = config.t_end();
    let mut t = config.t0;
    let mut x = sample_initial(p, config.wall, t, &mut rng)?;
    record(t, &x);

    let mut drift = vec![F::zero(); p];
    let mut proposal = vec![F::zero(); p];
    let mut h = config.dt;
    let mut halvings = 0u64;
    let start = t;
    let mut next_stop = stops.iter().copied().filter(move |&s| s > start).peekable();

    while t < t_end {
        let target = match next_stop.peek() {
            Some(&s) if s < t_end => s,
            _ => t_end,
        };
        let remaining = target - t;
        let mut step = h.min(remaining);
        if config.wall {
            drift_wall_into(t, &x, &mut drift)?;
        } else {
            drift_nowall_into(t, &x, &mut drift)?;
        }
        // Starting below the floor (possible only from the initial draw)
        // relaxes the floor for this step.
        let current = min_gap(&x, config.wall);
        let floor = if current < config.gap_floor { current / F::lit(2.0) } else { config.gap_floor };
        let mut tries = 0u32;
        loop {
            let root = step.sqrt();
            for i in 0..p {
                let g: f64 = StandardNormal.sample(&mut rng);
                proposal[i] = x[i] + drift[i] * step + root * F::lit(g);
            }
            let gap = min_gap(&proposal, config.wall);
            if proposal.iter().all(|v| v.is_finite()) && gap >= floor && gap > F::zero() {
                break;
            }
            tries += 1;
            halvings += 1;
            if tries > config.max_halvings {
                return Err(Error::HalvingExhausted {
                    time: t.as_f64(),
                    position: x.iter().map(|v| v.as_f64()).collect(),
                    gap: min_gap(&x, config.wall).as_f64(),
                });
            }
            step /= F::lit(2.0);
        }
        std::mem::swap(&mut x, &mut proposal);
        if step >= remaining {
            t = target;
            if next_stop.peek() == Some(&target) {
                next_stop.next();
            }
        } else {
            t += step;
        }
        record(t, &x);
        h = if tries == 0 { (h * F::lit(2.0)).min(config.dt) } else { step };
    }
    Ok(halvings)
}

/// Full trajectory on `[t0, 1 - t0]`.
pub fn simulate<F: Real>(config: &SdeConfig<F>) -> Result<Trajectory<F>> {
    let mut times = Vec::new();
    let mut values = Vec::new();
    let halvings = integrate(config, &[], |t, x| {
        times.push(t);
        values.push(x.to_vec());
    })?;
    Ok(Trajectory { times, values, halvings })
}

/// States at the requested times (sorted into `[t0, 1 - t0]`), plus the
/// halving count and the number of accepted states outside the chamber.
#[derive(Clone, Debug, PartialEq)]
pub struct Observation<F> {
    pub times: Vec<F>,
    pub values: Vec<Vec<F>>,
    pub halvings: u64,
    pub violations: u64,
}

pub fn simulate_observed<F: Real>(config: &SdeConfig<F>, times: &[F]) -> Result<Observation<F>> {
    config.validate()?;
    let t_end = config.t_end();
    if times.windows(2).any(|w| w[0] >= w[1]) {
        return invalid("observation times must be strictly increasing");
    }
    if times.iter().any(|&s| s < config.t0 || s > t_end) {
        return invalid(format!("observation times must lie in [{}, {}]", config.t0, t_end));
    }
    let chamber = config.chamber();
    let mut values: Vec<Vec<F>> = Vec::with_capacity(times.len());
    let mut violations = 0u64;
    let mut idx = 0;
    let halvings = integrate(config, times, |t, x| {
        if !chamber.contains(x) {
            violations += 1;
        }
        if idx < times.len() && t == times[idx] {
            values.push(x.to_vec());
            idx += 1;
        }
    })?;
    debug_assert_eq!(values.len(), times.len());
    Ok(Observation { times: times.to_vec(), values, halvings, violations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wall_drift_examples() {
        let b = drift_wall(1, 0.5f64, &[1.0]).unwrap();
        assert!((b[0] + 1.0).abs() < 1e-15);
        // t -> 0 limit of the examples, evaluated at a tiny t.
        let b = drift_wall(2, 1e-300f64, &[1.0, 2.0]).unwrap();
        assert!((b[0] + 2.0 / 3.0).abs() < 1e-12);
        assert!((b[1] + 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn nowall_drift_examples() {
        let b = drift_nowall(2, 0.5f64, &[-1.0, 1.0]).unwrap();
        assert!((b[0] - 1.5).abs() < 1e-15 && (b[1] + 1.5).abs() < 1e-15);
        let b = drift_nowall(1, 0.3f64, &[0.7]).unwrap();
        assert!((b[0] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn singular_drift_rejected() {
        assert!(matches!(drift_wall(2, 0.5, &[1.0, 1.0]), Err(Error::SingularDrift { .. })));
        assert!(matches!(drift_wall(1, 0.5, &[0.0]), Err(Error::SingularDrift { .. })));
        assert!(matches!(drift_wall(2, 0.5, &[-1.0, 1.0]), Err(Error::SingularDrift { .. })));
        assert!(matches!(drift_nowall(2, 0.5, &[1.0, 0.5]), Err(Error::SingularDrift { .. })));
        assert!(drift_nowall(1, 1.0, &[0.0]).is_err());
        assert!(drift_nowall(2, 0.5, &[0.0]).is_err());
    }

    #[test]
    fn config_validation() {
        let good = SdeConfig::<f64>::new(2, true, 1);
        assert!(good.validate().is_ok());
        assert!(SdeConfig { t0: 0.5, ..good.clone() }.validate().is_err());
        assert!(SdeConfig { dt: 0.0, ..good.clone() }.validate().is_err());
        assert!(SdeConfig { gap_floor: 0.0, ..good.clone() }.validate().is_err());
        assert!(SdeConfig { p: 0, ..good }.validate().is_err());
    }

    #[test]
    fn trajectory_shape_and_invariants() {
        let config = SdeConfig { dt: 1e-3, ..SdeConfig::<f64>::new(3, true, 9) };
        let traj = simulate(&config).unwrap();
        assert_eq!(traj.times[0], 0.02);
        assert_eq!(*traj.times.last().unwrap(), 0.98);
        assert!(traj.times.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(traj.violations(Chamber::Wall), 0);
        let csv = traj.to_csv();
        assert!(csv.starts_with("t,x_1,x_2,x_3\n"));
        assert_eq!(csv.lines().count(), traj.len() + 1);
    }

    #[test]
    fn deterministic() {
        let config = SdeConfig { dt: 1e-3, ..SdeConfig::<f64>::new(2, false, 4) };
        assert_eq!(simulate(&config).unwrap(), simulate(&config).unwrap());
    }

    #[test]
    fn observed_times_are_hit() {
        let config = SdeConfig { dt: 1e-3, ..SdeConfig::<f64>::new(2, true, 2) };
        let times = [0.02, 0.25, 0.5, 0.75, 0.98];
        let obs = simulate_observed(&config, &times).unwrap();
        assert_eq!(obs.values.len(), 5);
        assert_eq!(obs.violations, 0);
        let full = simulate(&config).unwrap();
        assert_eq!(full.values[0], obs.values[0]);
        assert!(simulate_observed(&config, &[0.5, 0.25]).is_err());
        assert!(simulate_observed(&config, &[0.99]).is_err());
    }

    #[test]
    fn halving_exhaustion_reports() {
        let exhausted = (0..20)
            .filter_map(|seed| {
                let config = SdeConfig { dt: 0.45, max_halvings: 0, ..SdeConfig::<f64>::new(3, false, seed) };
                match simulate(&config) {
                    Err(Error::HalvingExhausted { position, gap, .. }) => Some((position, gap)),
                    _ => None,
                }
            })
            .collect::<Vec<_>>();
        assert!(!exhausted.is_empty());
        assert!(exhausted.iter().all(|(x, gap)| x.len() == 3 && *gap > 0.0));
    }

    #[test]
    fn f32_runs() {
        let config = SdeConfig { dt: 1e-3, ..SdeConfig::<f32>::new(2, true, 3) };
        let traj = simulate(&config).unwrap();
        assert_eq!(traj.violations(Chamber::Wall), 0);
    }
}
