//! System parameters and the closed-form coverage/secrecy probabilities
//! for the guard-zone and artificial-noise techniques.
//!
//! All probabilities are built as a sum of exponents and exponentiated
//! once at the end.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{complete_gamma, upper_incomplete_gamma, NumericTolerance};

/// Physical and link constants of a noise-limited D2D link with a
/// Poisson field of eavesdroppers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Path-loss exponent, `> 2`.
    pub alpha: f64,
    /// Transmit power (linear).
    pub p_t: f64,
    /// SNR threshold at the legitimate receiver (linear).
    pub beta_t: f64,
    /// SNR threshold at the eavesdroppers (linear).
    pub beta_e: f64,
    /// Target secure communication probability, in `(0, 1)`.
    pub epsilon: f64,
    /// Noise power at the legitimate receiver.
    pub sigma2_p: f64,
    /// Noise power at the eavesdroppers.
    pub sigma2_s: f64,
    /// Eavesdropper density (points per unit area).
    pub lambda_e: f64,
    /// Transmitter-to-receiver distance.
    pub d: f64,
}

impl Default for SystemParams {
    /// The reference operating point: `α = 4`, `P_t = 1`, `β_t = 2`,
    /// `β_e = 1`, `ε = 0.9`, unit noise powers, `λ_e = 0.1`, `d = 1`.
    fn default() -> Self {
        Self {
            alpha: 4.0,
            p_t: 1.0,
            beta_t: 2.0,
            beta_e: 1.0,
            epsilon: 0.9,
            sigma2_p: 1.0,
            sigma2_s: 1.0,
            lambda_e: 0.1,
            d: 1.0,
        }
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(name, value, "must be positive and finite"))
    }
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 2.0 && self.alpha.is_finite()) {
            return Err(Error::domain(
                "alpha",
                self.alpha,
                "path-loss exponent must exceed 2",
            ));
        }
        positive("p_t", self.p_t)?;
        positive("beta_t", self.beta_t)?;
        positive("beta_e", self.beta_e)?;
        positive("sigma2_p", self.sigma2_p)?;
        positive("sigma2_s", self.sigma2_s)?;
        positive("d", self.d)?;
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::domain("epsilon", self.epsilon, "must lie in (0, 1)"));
        }
        if !(self.lambda_e >= 0.0 && self.lambda_e.is_finite()) {
            return Err(Error::domain(
                "lambda_e",
                self.lambda_e,
                "must be non-negative",
            ));
        }
        Ok(())
    }

    pub fn with_lambda_e(self, lambda_e: f64) -> Self {
        Self { lambda_e, ..self }
    }

    pub fn with_d(self, d: f64) -> Self {
        Self { d, ..self }
    }

    /// Shape `2/α` of every incomplete gamma term.
    pub fn gamma_shape(&self) -> f64 {
        2.0 / self.alpha
    }

    /// `P_t / (σ_S² β_e)`, the eavesdropper-side SNR scale.
    pub(crate) fn eve_snr_scale(&self) -> f64 {
        self.p_t / (self.sigma2_s * self.beta_e)
    }

    /// `β_t σ_P² d^α / P_t`, the noise exponent of the legitimate link.
    pub(crate) fn link_noise_exponent(&self) -> f64 {
        self.beta_t * self.sigma2_p * self.d.powf(self.alpha) / self.p_t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GuardZoneDesign {
    pub r_g: f64,
}

impl GuardZoneDesign {
    pub fn new(r_g: f64) -> Result<Self> {
        let design = Self { r_g };
        design.validate()?;
        Ok(design)
    }

    pub fn validate(&self) -> Result<()> {
        if self.r_g >= 0.0 {
            Ok(())
        } else {
            Err(Error::domain(
                "r_g",
                self.r_g,
                "guard radius must be non-negative",
            ))
        }
    }
}

/// Fraction of the transmit power that carries information; the rest is
/// artificial noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSplitDesign {
    pub gamma: f64,
}

impl NoiseSplitDesign {
    pub fn new(gamma: f64) -> Result<Self> {
        let design = Self { gamma };
        design.validate()?;
        Ok(design)
    }

    pub fn validate(&self) -> Result<()> {
        if (0.0..=1.0).contains(&self.gamma) {
            Ok(())
        } else {
            Err(Error::domain(
                "gamma",
                self.gamma,
                "power split must lie in [0, 1]",
            ))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TechniqueMetrics {
    pub p_cov: f64,
    pub p_sec: f64,
}

/// Maps a code rate (bits per channel use) to its SNR threshold `2^C - 1`.
pub fn rate_to_threshold(code_rate: f64) -> Result<f64> {
    if code_rate.is_nan() || code_rate < 0.0 {
        return Err(Error::domain(
            "code_rate",
            code_rate,
            "must be non-negative",
        ));
    }
    Ok(code_rate.exp2() - 1.0)
}

/// Probability that no eavesdropper lies inside the guard zone.
pub fn p_active(params: &SystemParams, design: &GuardZoneDesign) -> Result<f64> {
    params.validate()?;
    design.validate()?;
    Ok(guard_zone_void_exponent(params, design).exp())
}

fn guard_zone_void_exponent(params: &SystemParams, design: &GuardZoneDesign) -> f64 {
    -params.lambda_e * PI * design.r_g * design.r_g
}

pub fn p_cov_gz(params: &SystemParams, design: &GuardZoneDesign) -> Result<f64> {
    params.validate()?;
    design.validate()?;
    Ok((guard_zone_void_exponent(params, design) - params.link_noise_exponent()).exp())
}

/// Secure communication probability with a guard zone, conditioned on
/// the transmitter being active.
pub fn p_sec_gz(params: &SystemParams, design: &GuardZoneDesign) -> Result<f64> {
    params.validate()?;
    design.validate()?;
    if params.lambda_e == 0.0 {
        return Ok(1.0);
    }
    let exponent = secrecy_exponent(params, params.beta_e, design.r_g)?;
    Ok((-exponent).exp())
}

/// `(2πλ_e/α) (P_t/(σ_S² β))^{2/α} Γ(2/α, r^α β σ_S² / P_t)` for an
/// eavesdropper threshold `β`.
pub(crate) fn secrecy_exponent(params: &SystemParams, beta: f64, r_g: f64) -> Result<f64> {
    let a = params.gamma_shape();
    let scale = params.p_t / (params.sigma2_s * beta);
    let x = r_g.powf(params.alpha) / scale;
    let tail = upper_incomplete_gamma(a, x, NumericTolerance::default())?;
    Ok(2.0 * PI * params.lambda_e / params.alpha * scale.powf(a) * tail)
}

pub fn p_cov_an(params: &SystemParams, design: &NoiseSplitDesign) -> Result<f64> {
    params.validate()?;
    design.validate()?;
    if design.gamma == 0.0 {
        return Err(Error::DegenerateDesign(
            "power split gamma = 0 carries no information",
        ));
    }
    Ok((-params.link_noise_exponent() / design.gamma).exp())
}

/// Secure communication probability with artificial noise.
///
/// Exactly `1` while `γ ≤ β_e / (1 + β_e)`: the eavesdropper's SINR is
/// then bounded by `γ / (1 - γ) ≤ β_e` whatever the channel.
pub fn p_sec_an(params: &SystemParams, design: &NoiseSplitDesign) -> Result<f64> {
    params.validate()?;
    design.validate()?;
    let gamma = design.gamma;
    let margin = gamma - (1.0 - gamma) * params.beta_e;
    if params.lambda_e == 0.0 || margin <= 0.0 {
        return Ok(1.0);
    }
    let a = params.gamma_shape();
    let scale = params.p_t * margin / (params.sigma2_s * params.beta_e);
    let full = complete_gamma(a, NumericTolerance::default())?;
    let exponent = 2.0 * PI * params.lambda_e / params.alpha * scale.powf(a) * full;
    Ok((-exponent).exp())
}

pub fn gz_metrics(params: &SystemParams, design: &GuardZoneDesign) -> Result<TechniqueMetrics> {
    Ok(TechniqueMetrics {
        p_cov: p_cov_gz(params, design)?,
        p_sec: p_sec_gz(params, design)?,
    })
}

pub fn an_metrics(params: &SystemParams, design: &NoiseSplitDesign) -> Result<TechniqueMetrics> {
    Ok(TechniqueMetrics {
        p_cov: p_cov_an(params, design)?,
        p_sec: p_sec_an(params, design)?,
    })
}
