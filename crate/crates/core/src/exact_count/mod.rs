//! Exact counting of stars and watermelons, exact one-step transition laws,
//! an exhaustive enumeration oracle and factorial-ratio asymptotics.

mod brute;
mod counts;
mod factorial;
mod query;
mod stirling;
mod transition;

pub use brute::{enumerate_brute_force, enumerate_brute_force_with_budget, DEFAULT_BRUTE_FORCE_BUDGET};
pub(crate) use brute::visit_families;
pub use counts::{
    count_stars, count_stars_nowall, count_stars_wall, count_watermelons, ln_star_count,
    star_count_or_zero,
};
pub use factorial::FactorialTable;
pub use query::{start_heights, BigCount, ExactProbability, StarQuery};
pub use stirling::{
    ln_factorial_ratio, ln_stirling_ratio_asymptotic, max_relative_error, stirling_ratio_asymptotic,
    stirling_relative_error, FactorialRatioParams, RatioGrid,
};
pub(crate) use transition::{move_weights_big, small_move_weights_into};
pub use transition::{
    eps_from_mask, mask_from_eps, move_probabilities_lgamma, move_weights, step_distribution,
    step_probability, MoveWeights,
};
