//! Simulation and verification laboratory for watermelon ensembles:
//! families of non-intersecting ±1-step lattice paths pinned at both ends,
//! with or without a wall, and their continuum limits.
//!
//! - [`exact_count`]: exact star/watermelon counts and transition laws.
//! - [`discrete_walk`]: exact uniform sampling of discrete watermelons.
//! - [`spectral_laws`]: limit marginal densities and random-matrix samplers.
//! - [`sde_sim`]: Euler–Maruyama integration of the limit SDEs.
//! - [`moments`]: closed-form moments of the limit processes.
//! - [`stats`]: KS, chi-square, Gamma CDF, quadrature and estimators.
//! - [`suite`]: the orchestrated verification suite and its report.
//!
//! Floating-point code is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`.

pub mod discrete_walk;
pub mod error;
pub mod exact_count;
pub mod moments;
pub mod rng;
pub mod scalar;
pub mod sde_sim;
pub mod spectral_laws;
pub mod stats;
pub mod suite;

pub use error::{Error, Result};
pub use scalar::Real;

pub type ChamberPoint64 = spectral_laws::ChamberPoint<f64>;
pub type ChamberPoint32 = spectral_laws::ChamberPoint<f32>;
pub type DensityParams64 = spectral_laws::DensityParams<f64>;
pub type SymmetricMatrix64 = spectral_laws::SymmetricMatrix<f64>;
pub type SymmetricMatrix32 = spectral_laws::SymmetricMatrix<f32>;
pub type SdeConfig64 = sde_sim::SdeConfig<f64>;
pub type Trajectory64 = sde_sim::Trajectory<f64>;
