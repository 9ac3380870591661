//! Planning toolkit for securing a noise-limited D2D link against a
//! Poisson field of eavesdroppers.
//!
//! Two secrecy enhancements are compared: a guard zone (the transmitter
//! stays silent while any eavesdropper is within `r_g`) and artificial
//! noise (a fraction `1 - γ` of the power jams the eavesdroppers). The
//! crate provides their closed-form coverage and secrecy probabilities,
//! the secrecy-constrained optimal designs, the rule that picks the better
//! technique, and a Monte-Carlo simulator that checks all of it.

pub mod error;
pub mod model;
pub mod montecarlo;
pub mod optimizer;
pub mod specfun;

pub use error::{Error, Result};
pub use model::{
    an_metrics, gz_metrics, p_active, p_cov_an, p_cov_gz, p_sec_an, p_sec_gz, rate_to_threshold,
    GuardZoneDesign, NoiseSplitDesign, SystemParams, TechniqueMetrics,
};
pub use montecarlo::{
    auto_window_radius, run_an_trials, run_gz_trials, sample_field, strongest_received_power,
    AnEstimates, EavesdropperField, GzEstimates, McEstimate, TrialConfig, TrialOutcome,
};
pub use optimizer::{
    critical_distance, lambda_threshold, optimal_guard_radius, optimal_power_split,
    selection_function, selection_value, CriticalDistance, OptimalDesign, SelectionVerdict,
    Technique,
};
pub use specfun::{
    complete_gamma, inverse_upper_incomplete_gamma, upper_incomplete_gamma, NumericTolerance,
};
