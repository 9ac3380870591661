//! Monte-Carlo validation of the closed forms.
//!
//! Each trial draws a Poisson field of eavesdroppers with Rayleigh fading
//! on a disk around the transmitter, plus the fading of the legitimate
//! link, and records whether the transmitter was active, covered its
//! receiver, and kept the strongest eavesdropper below `β_e`. Trials are
//! aggregated as integer counts, so the parallel reduction is exact and
//! order independent.
//!
//! The infinite eavesdropper process is truncated to a window of radius
//! `R`. [`auto_window_radius`] picks `R` so that the neglected far field
//! shifts any secrecy probability by less than a chosen tail probability.

mod estimate;
mod field;
mod rng;

use std::f64::consts::PI;
use std::ops::Add;

use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use estimate::{IntervalMethod, McEstimate, RARE_EVENT_COUNT};
pub use field::{sample_field, strongest_received_power, EavesdropperField, ORIGIN_EXCLUSION};

use crate::error::{Error, Result};
use crate::model::{GuardZoneDesign, NoiseSplitDesign, SystemParams};
use crate::specfun::{complete_gamma, inverse_upper_incomplete_gamma, NumericTolerance};
use field::FieldSampler;
use rng::Stream;

/// Window used when the field is empty anyway (`λ_e = 0`) or no
/// truncation is needed.
pub const MIN_WINDOW_RADIUS: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub n_trials: u64,
    pub seed: u64,
    /// Simulation disk radius; `None` selects [`auto_window_radius`].
    pub window_radius: Option<f64>,
    /// Truncation budget for the automatic window.
    pub tail_prob: f64,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            n_trials: 1_000_000,
            seed: 0,
            window_radius: None,
            tail_prob: 1e-4,
        }
    }
}

impl TrialConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_trials == 0 {
            return Err(Error::domain("n_trials", 0.0, "need at least one trial"));
        }
        if !(self.tail_prob > 0.0 && self.tail_prob < 1.0) {
            return Err(Error::domain(
                "tail_prob",
                self.tail_prob,
                "must lie in (0, 1)",
            ));
        }
        if let Some(r) = self.window_radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::domain("window_radius", r, "must be positive"));
            }
        }
        Ok(())
    }

    /// Window radius for a run with guard radius `r_g` (0 when none).
    pub fn resolve_window(&self, params: &SystemParams, r_g: f64) -> Result<f64> {
        self.validate()?;
        match self.window_radius {
            Some(r) if r_g > 0.0 && r <= r_g => Err(Error::domain(
                "window_radius",
                r,
                "must exceed the guard-zone radius",
            )),
            Some(r) => Ok(r),
            None => {
                let r = auto_window_radius(params, self.tail_prob)?.max(r_g);
                Ok(if r > 0.0 { r } else { MIN_WINDOW_RADIUS })
            }
        }
    }
}

/// Smallest window radius `R` whose neglected far field contributes less
/// than `tail_prob` to the secrecy exponent:
/// `(2πλ_e/α) (P_t/(σ_S²β_e))^{2/α} Γ(2/α, R^α β_e σ_S²/P_t) ≤ tail_prob`.
///
/// Returns `0` when even the whole plane stays within budget, and
/// [`MIN_WINDOW_RADIUS`] without eavesdroppers.
pub fn auto_window_radius(params: &SystemParams, tail_prob: f64) -> Result<f64> {
    params.validate()?;
    if !(tail_prob > 0.0 && tail_prob < 1.0) {
        return Err(Error::domain("tail_prob", tail_prob, "must lie in (0, 1)"));
    }
    if params.lambda_e == 0.0 {
        return Ok(MIN_WINDOW_RADIUS);
    }
    let tol = NumericTolerance::default();
    let a = params.gamma_shape();
    let scale = params.eve_snr_scale();
    let coefficient = 2.0 * PI * params.lambda_e / params.alpha * scale.powf(a);
    let budget = tail_prob / coefficient;
    if budget >= complete_gamma(a, tol)? {
        return Ok(0.0);
    }
    let x = inverse_upper_incomplete_gamma(a, budget, tol)?;
    Ok((x * scale).powf(1.0 / params.alpha))
}

/// Per-trial record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub active: bool,
    pub snr_p: f64,
    /// SNR of the strongest eavesdropper outside the guard zone.
    pub snr_s: f64,
    pub covered: bool,
    /// `None` for an inactive transmitter.
    pub secure: Option<bool>,
}

struct GzTrial {
    outcome: TrialOutcome,
    /// Secrecy against every eavesdropper, ignoring activity.
    secure_unconditioned: bool,
}

fn link_snr(params: &SystemParams, info_power: f64, key: &rng::StreamKey, trial: u64) -> f64 {
    let h: f64 = Exp1.sample(&mut key.rng(trial, Stream::LinkFading));
    info_power * h * params.d.powf(-params.alpha) / params.sigma2_p
}

fn gz_trial(params: &SystemParams, r_g: f64, sampler: &FieldSampler, trial: u64) -> GzTrial {
    let mut inside = false;
    let mut best_outside = 0.0f64;
    let mut best_all = 0.0f64;
    for point in sampler.draws(trial) {
        let power = point.gain * point.distance.powf(-params.alpha);
        best_all = best_all.max(power);
        if point.distance < r_g {
            inside = true;
        } else {
            best_outside = best_outside.max(power);
        }
    }
    let active = !inside;
    let snr_p = link_snr(params, params.p_t, sampler.key(), trial);
    let snr_s = params.p_t * best_outside / params.sigma2_s;
    GzTrial {
        outcome: TrialOutcome {
            active,
            snr_p,
            snr_s,
            covered: active && snr_p >= params.beta_t,
            secure: active.then_some(snr_s <= params.beta_e),
        },
        secure_unconditioned: params.p_t * best_all / params.sigma2_s <= params.beta_e,
    }
}

fn an_trial(params: &SystemParams, gamma: f64, sampler: &FieldSampler, trial: u64) -> TrialOutcome {
    // The jammed SINR is increasing in g‖y‖^{-α}, so the strongest point
    // under the plain SNR is also the strongest under artificial noise.
    let best = sampler
        .draws(trial)
        .map(|p| p.gain * p.distance.powf(-params.alpha))
        .fold(0.0f64, f64::max);
    let received = params.p_t * best;
    let snr_s = gamma * received / ((1.0 - gamma) * received + params.sigma2_s);
    let snr_p = link_snr(params, gamma * params.p_t, sampler.key(), trial);
    TrialOutcome {
        active: true,
        snr_p,
        snr_s,
        covered: snr_p >= params.beta_t,
        secure: Some(snr_s <= params.beta_e),
    }
}

/// Simulates one guard-zone trial on a window of the given radius.
pub fn simulate_gz_trial(
    params: &SystemParams,
    design: &GuardZoneDesign,
    window_radius: f64,
    seed: u64,
    trial_index: u64,
) -> Result<TrialOutcome> {
    params.validate()?;
    design.validate()?;
    let sampler = FieldSampler::new(params.lambda_e, window_radius, seed)?;
    Ok(gz_trial(params, design.r_g, &sampler, trial_index).outcome)
}

/// Simulates one artificial-noise trial on a window of the given radius.
pub fn simulate_an_trial(
    params: &SystemParams,
    design: &NoiseSplitDesign,
    window_radius: f64,
    seed: u64,
    trial_index: u64,
) -> Result<TrialOutcome> {
    check_an_design(params, design)?;
    let sampler = FieldSampler::new(params.lambda_e, window_radius, seed)?;
    Ok(an_trial(params, design.gamma, &sampler, trial_index))
}

fn check_an_design(params: &SystemParams, design: &NoiseSplitDesign) -> Result<()> {
    params.validate()?;
    design.validate()?;
    if design.gamma == 0.0 {
        return Err(Error::DegenerateDesign(
            "power split gamma = 0 carries no information",
        ));
    }
    Ok(())
}

/// Raw indicator counts of a guard-zone run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GzCounts {
    pub trials: u64,
    pub active: u64,
    pub covered: u64,
    /// Secure trials among the active ones.
    pub secure: u64,
    pub secure_unconditioned: u64,
}

impl Add for GzCounts {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self {
            trials: self.trials + o.trials,
            active: self.active + o.active,
            covered: self.covered + o.covered,
            secure: self.secure + o.secure,
            secure_unconditioned: self.secure_unconditioned + o.secure_unconditioned,
        }
    }
}

impl GzCounts {
    pub fn p_active(&self) -> Result<McEstimate> {
        McEstimate::from_counts(self.active, self.trials)
    }

    pub fn p_cov(&self) -> Result<McEstimate> {
        McEstimate::from_counts(self.covered, self.trials)
    }

    /// Secrecy conditioned on an active transmitter.
    pub fn p_sec(&self) -> Result<McEstimate> {
        if self.active == 0 {
            return Err(Error::InsufficientData(
                "no active trials to condition the secrecy estimate on",
            ));
        }
        McEstimate::from_counts(self.secure, self.active)
    }

    /// Secrecy over all trials against all eavesdroppers. Does not match
    /// the conditioned closed form once `r_g > 0`.
    pub fn p_sec_unconditioned(&self) -> Result<McEstimate> {
        McEstimate::from_counts(self.secure_unconditioned, self.trials)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnCounts {
    pub trials: u64,
    pub covered: u64,
    pub secure: u64,
}

impl Add for AnCounts {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self {
            trials: self.trials + o.trials,
            covered: self.covered + o.covered,
            secure: self.secure + o.secure,
        }
    }
}

impl AnCounts {
    pub fn p_cov(&self) -> Result<McEstimate> {
        McEstimate::from_counts(self.covered, self.trials)
    }

    pub fn p_sec(&self) -> Result<McEstimate> {
        McEstimate::from_counts(self.secure, self.trials)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GzEstimates {
    pub p_active: McEstimate,
    pub p_cov: McEstimate,
    pub p_sec: McEstimate,
    pub p_sec_unconditioned: McEstimate,
    pub window_radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnEstimates {
    pub p_cov: McEstimate,
    pub p_sec: McEstimate,
    pub window_radius: f64,
}

/// Runs `cfg.n_trials` guard-zone trials and returns the raw counts with
/// the window radius used.
pub fn gz_trial_counts(
    params: &SystemParams,
    design: &GuardZoneDesign,
    cfg: &TrialConfig,
) -> Result<(GzCounts, f64)> {
    params.validate()?;
    design.validate()?;
    let window = cfg.resolve_window(params, design.r_g)?;
    let sampler = FieldSampler::new(params.lambda_e, window, cfg.seed)?;
    let counts = (0..cfg.n_trials)
        .into_par_iter()
        .map(|i| {
            let t = gz_trial(params, design.r_g, &sampler, i);
            GzCounts {
                trials: 1,
                active: t.outcome.active as u64,
                covered: t.outcome.covered as u64,
                secure: (t.outcome.secure == Some(true)) as u64,
                secure_unconditioned: t.secure_unconditioned as u64,
            }
        })
        .reduce(GzCounts::default, Add::add);
    Ok((counts, window))
}

/// Runs `cfg.n_trials` artificial-noise trials and returns the raw counts
/// with the window radius used.
pub fn an_trial_counts(
    params: &SystemParams,
    design: &NoiseSplitDesign,
    cfg: &TrialConfig,
) -> Result<(AnCounts, f64)> {
    check_an_design(params, design)?;
    let window = cfg.resolve_window(params, 0.0)?;
    let sampler = FieldSampler::new(params.lambda_e, window, cfg.seed)?;
    let counts = (0..cfg.n_trials)
        .into_par_iter()
        .map(|i| {
            let t = an_trial(params, design.gamma, &sampler, i);
            AnCounts {
                trials: 1,
                covered: t.covered as u64,
                secure: (t.secure == Some(true)) as u64,
            }
        })
        .reduce(AnCounts::default, Add::add);
    Ok((counts, window))
}

/// Estimates `P_active`, `P_cov^GZ` and `P_sec^GZ` by simulation.
///
/// Fails with [`Error::InsufficientData`] when no trial had an active
/// transmitter, since the secrecy estimate is conditioned on activity.
pub fn run_gz_trials(
    params: &SystemParams,
    design: &GuardZoneDesign,
    cfg: &TrialConfig,
) -> Result<GzEstimates> {
    let (counts, window_radius) = gz_trial_counts(params, design, cfg)?;
    Ok(GzEstimates {
        p_active: counts.p_active()?,
        p_cov: counts.p_cov()?,
        p_sec: counts.p_sec()?,
        p_sec_unconditioned: counts.p_sec_unconditioned()?,
        window_radius,
    })
}

/// Estimates `P_cov^AN` and `P_sec^AN` by simulation.
pub fn run_an_trials(
    params: &SystemParams,
    design: &NoiseSplitDesign,
    cfg: &TrialConfig,
) -> Result<AnEstimates> {
    let (counts, window_radius) = an_trial_counts(params, design, cfg)?;
    Ok(AnEstimates {
        p_cov: counts.p_cov()?,
        p_sec: counts.p_sec()?,
        window_radius,
    })
}
