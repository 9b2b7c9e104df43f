//! Statistical tools shared by the verification suite: goodness-of-fit
//! statistics, Gamma and normal CDFs, moment estimators, adaptive quadrature
//! and tabulated marginal CDFs of the limit densities. All in `f64`.

mod chi2;
mod gamma;
mod ks;
mod marginal;
mod moment;
mod quad;
mod sample;

pub use chi2::{chi_square_critical, chi_square_statistic, chi_square_uniform, ChiSquareOutcome};
pub use gamma::{gamma_cdf, norm_dimension, norm_sq_law, normal_cdf};
pub use ks::{ks_c_alpha, ks_critical, ks_statistic, ks_two_sample, ks_two_sample_critical, KS_C_05};
pub use marginal::{MarginalCdf, MARGINAL_CELLS};
pub use moment::{empirical_moment, mean_se};
pub use quad::{integrate, QuadResult};
pub use sample::{dequantize, EmpiricalSample, Provenance};
