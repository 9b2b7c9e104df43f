use super::quad::integrate;
use crate::error::{invalid, Result};
use crate::spectral_laws::{density, DensityParams};

/// Grid cells of a [`MarginalCdf`] table.
pub const MARGINAL_CELLS: usize = 600;

/// Tabulated CDF of one coordinate of the limit marginal at time `t`, for
/// `p <= 2`. The branch density (the other coordinate integrated out) is
/// integrated cell by cell on a uniform grid over `[lo, 12 sqrt(s)]`, and
/// the CDF is a cubic Hermite interpolant of the cumulative values.
#[derive(Clone, Debug)]
pub struct MarginalCdf {
    p: usize,
    wall: bool,
    t: f64,
    branch: usize,
    lo: f64,
    step: f64,
    cum: Vec<f64>,
    dens: Vec<f64>,
    mass: f64,
}

impl MarginalCdf {
    pub fn new(p: usize, wall: bool, t: f64, branch: usize) -> Result<Self> {
        Self::with_cells(p, wall, t, branch, MARGINAL_CELLS)
    }

    pub fn with_cells(p: usize, wall: bool, t: f64, branch: usize, cells: usize) -> Result<Self> {
        if !(1..=2).contains(&p) {
            return invalid(format!("tabulated branch marginals need p in {{1, 2}}, got {p}"));
        }
        if branch == 0 || branch > p {
            return invalid(format!("branch {branch} out of range 1..={p}"));
        }
        if cells < 2 {
            return invalid("need at least two cells");
        }
        let params = DensityParams::new(p, t, wall)?;
        let s = params.variance_scale();
        let hi = 12.0 * s.sqrt();
        let lo = if wall { 0.0 } else { -hi };
        let step = (hi - lo) / cells as f64;

        let branch_density = |x: f64| -> f64 {
            if p == 1 {
                return density(&params, &[x]).unwrap_or(0.0);
            }
            let inner = |y: f64| {
                let pt = if branch == 1 { [x, y] } else { [y, x] };
                density(&params, &pt).unwrap_or(0.0)
            };
            let (a, b) = if branch == 1 { (x, hi) } else { (lo, x) };
            if a >= b {
                return 0.0;
            }
            integrate(inner, a, b, 1e-15, 1e-11).map(|r| r.value).unwrap_or(0.0)
        };

        let mut cum = Vec::with_capacity(cells + 1);
        let mut dens = Vec::with_capacity(cells + 1);
        let mut acc = 0.0;
        cum.push(0.0);
        dens.push(branch_density(lo));
        for k in 0..cells {
            let a = lo + k as f64 * step;
            let b = lo + (k + 1) as f64 * step;
            acc += integrate(&branch_density, a, b, 1e-14, 1e-10)?.value;
            cum.push(acc);
            dens.push(branch_density(b));
        }
        Ok(Self { p, wall, t, branch, lo, step, cum, dens, mass: acc })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn wall(&self) -> bool {
        self.wall
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn branch(&self) -> usize {
        self.branch
    }

    /// Mass captured inside the truncation window (1 up to quadrature error).
    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.lo + self.step * (self.cum.len() - 1) as f64)
    }

    /// Branch density at `x` (linear interpolation of the tabulated values).
    pub fn density(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if !(x > lo && x < hi) {
            return 0.0;
        }
        let u = (x - lo) / self.step;
        let k = (u.floor() as usize).min(self.cum.len() - 2);
        let w = u - k as f64;
        ((1.0 - w) * self.dens[k] + w * self.dens[k + 1]) / self.mass
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x.is_nan() {
            return f64::NAN;
        }
        if x <= lo {
            return 0.0;
        }
        if x >= hi {
            return 1.0;
        }
        let u = (x - lo) / self.step;
        let k = (u.floor() as usize).min(self.cum.len() - 2);
        let w = u - k as f64;
        let h = self.step;
        let (w2, w3) = (w * w, w * w * w);
        let h00 = 2.0 * w3 - 3.0 * w2 + 1.0;
        let h10 = w3 - 2.0 * w2 + w;
        let h01 = -2.0 * w3 + 3.0 * w2;
        let h11 = w3 - w2;
        let c = h00 * self.cum[k] + h10 * h * self.dens[k] + h01 * self.cum[k + 1] + h11 * h * self.dens[k + 1];
        (c / self.mass).clamp(0.0, 1.0)
    }
}
