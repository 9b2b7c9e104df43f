//! Limit marginal densities of continuous watermelons and exact samplers for
//! them built on random-matrix spectra.
//!
//! Conventions: `s = t(1-t)`. The wall marginal at time `t` has density
//! [`density_wall`] and equals `2 sqrt(s) * L` where `L` is the law returned
//! by [`sample_wall_spectrum`] (the marginal at `t = 1/2`). The no-wall
//! marginal has density [`density_nowall`] and equals `sqrt(2 s) * G` where
//! `G` is returned by [`sample_gue_spectrum`] (density proportional to
//! `prod (x_j-x_i)^2 exp(-|x|^2)`).

mod density;
mod matrix;
mod sampler;

pub use density::{
    density, density_nowall, density_wall, ln_nowall_constant, ln_wall_constant, nowall_scale,
    wall_scale, Chamber, ChamberPoint, DensityParams,
};
pub use matrix::{eigensolve_symmetric, EigenDecomposition, JacobiSolver, SymmetricMatrix};
pub use sampler::{
    sample_gue_spectrum, sample_gue_spectrum_with, sample_wall_spectrum, sample_wall_spectrum_with,
    WALL_ENTRY_SD,
};
