//! Exact truncated q-series and the characters built from them.

pub mod characters;
pub mod series;
pub mod theta;

pub use characters::{
    affine_character, affine_character_at, branching_check, pf_character, pf_characters,
    qdim_limit_estimate, qdim_limit_estimates, s_fixed_point_check, string_function,
    BranchingReport, CentralCharges, FixedPointReport, MIN_DEPTH,
};
pub use series::{Coefficient, Evaluation, LaurentPoly, PuiseuxSeries, Series, TwoVarSeries};
pub use theta::{eta_series, theta_series};
