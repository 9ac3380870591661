//! Secrecy-constrained optimal designs and the technique-selection rule.
//!
//! Both techniques trade coverage for secrecy monotonically, so each
//! optimum sits where the secrecy constraint `P_sec ≥ ε` just binds. Below
//! the density threshold `λ_e*` the constraint never binds and both
//! optimal designs are null (`r_g* = 0`, `γ* = 1`).
//!
//! Above the threshold, comparing the two optimal coverage probabilities
//! reduces to the sign of a selection function `F(d)`: the guard zone
//! wins for `F > 0` and artificial noise for `F ≤ 0`. `F` increases with
//! the link distance, so a single critical distance `d*` separates the
//! two regimes.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    an_metrics, gz_metrics, GuardZoneDesign, NoiseSplitDesign, SystemParams, TechniqueMetrics,
};
use crate::specfun::{
    complete_gamma, inverse_upper_incomplete_gamma, upper_incomplete_gamma, NumericTolerance,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Technique {
    GuardZone,
    ArtificialNoise,
}

impl Technique {
    pub fn label(&self) -> &'static str {
        match self {
            Technique::GuardZone => "guard-zone",
            Technique::ArtificialNoise => "artificial-noise",
        }
    }
}

impl std::fmt::Display for Technique {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// The secrecy-constrained optimum of one technique.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalDesign {
    pub technique: Technique,
    /// `r_g*` for the guard zone, `γ*` for artificial noise.
    pub parameter: f64,
    pub metrics: TechniqueMetrics,
    /// Whether the secrecy constraint binds (`λ_e > λ_e*`).
    pub constraint_active: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionVerdict {
    pub f_value: f64,
    pub h_value: f64,
    pub g_value: f64,
    pub better: Technique,
    pub gz_design: OptimalDesign,
    pub an_design: OptimalDesign,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalDistance {
    pub d_star: f64,
    /// Final bracket `(d_lo, d_hi)` the root was searched in.
    pub bracket: (f64, f64),
}

/// Default search interval for `d*`.
pub const DEFAULT_D_BRACKET: (f64, f64) = (1e-3, 10.0);
/// Absolute tolerance on `d*`.
pub const D_STAR_TOL: f64 = 1e-10;
const D_MIN: f64 = 1e-12;
const D_MAX: f64 = 1e6;

fn tol() -> NumericTolerance {
    NumericTolerance::default()
}

/// `α ln(1/ε) / (2π λ_e (P_t/(σ_S² β_e))^{2/α})`: the largest incomplete
/// gamma value compatible with `P_sec^GZ ≥ ε`.
fn guard_zone_budget(params: &SystemParams) -> f64 {
    let a = params.gamma_shape();
    params.alpha * (1.0 / params.epsilon).ln()
        / (2.0 * PI * params.lambda_e * params.eve_snr_scale().powf(a))
}

/// Unclamped optimal power split `G`.
fn power_split_unclamped(params: &SystemParams, full_gamma: f64) -> f64 {
    let ratio =
        params.alpha * (1.0 / params.epsilon).ln() / (2.0 * PI * params.lambda_e * full_gamma);
    params.beta_e / (1.0 + params.beta_e)
        * (1.0 + params.sigma2_s / params.p_t * ratio.powf(params.alpha / 2.0))
}

/// Eavesdropper density below which no secrecy enhancement is needed.
///
/// The same threshold results from either technique. `params.lambda_e`
/// is ignored.
pub fn lambda_threshold(params: &SystemParams) -> Result<f64> {
    params.with_lambda_e(0.0).validate()?;
    let a = params.gamma_shape();
    let full = complete_gamma(a, tol())?;
    Ok(params.alpha / (2.0 * PI * full)
        * (1.0 / params.epsilon).ln()
        * params.eve_snr_scale().powf(-a))
}

fn binds(params: &SystemParams) -> Result<bool> {
    Ok(params.lambda_e > lambda_threshold(params)?)
}

/// Smallest guard radius meeting the secrecy target.
pub fn optimal_guard_radius(params: &SystemParams) -> Result<OptimalDesign> {
    params.validate()?;
    let constraint_active = binds(params)?;
    let r_g = if constraint_active {
        let a = params.gamma_shape();
        let budget = guard_zone_budget(params).min(complete_gamma(a, tol())?);
        let x = inverse_upper_incomplete_gamma(a, budget, tol())?;
        (x * params.eve_snr_scale()).powf(1.0 / params.alpha)
    } else {
        0.0
    };
    let design = GuardZoneDesign { r_g };
    Ok(OptimalDesign {
        technique: Technique::GuardZone,
        parameter: r_g,
        metrics: gz_metrics(params, &design)?,
        constraint_active,
    })
}

/// Largest information power fraction meeting the secrecy target.
pub fn optimal_power_split(params: &SystemParams) -> Result<OptimalDesign> {
    params.validate()?;
    let constraint_active = binds(params)?;
    let gamma = if constraint_active {
        let full = complete_gamma(params.gamma_shape(), tol())?;
        power_split_unclamped(params, full).min(1.0)
    } else {
        1.0
    };
    let design = NoiseSplitDesign { gamma };
    Ok(OptimalDesign {
        technique: Technique::ArtificialNoise,
        parameter: gamma,
        metrics: an_metrics(params, &design)?,
        constraint_active: constraint_active && gamma < 1.0,
    })
}

/// Distance-independent pieces of the selection function, so that `F(d)`
/// can be evaluated repeatedly during root finding.
#[derive(Debug, Clone, Copy)]
struct SelectionCurve {
    params: SystemParams,
    budget: f64,
    g: f64,
}

impl SelectionCurve {
    fn new(params: &SystemParams) -> Result<Self> {
        params.validate()?;
        let threshold = lambda_threshold(params)?;
        if params.lambda_e < threshold {
            return Err(Error::BelowThreshold {
                lambda_e: params.lambda_e,
                threshold,
            });
        }
        let g = if params.lambda_e > threshold {
            let full = complete_gamma(params.gamma_shape(), tol())?;
            power_split_unclamped(params, full).min(1.0)
        } else {
            1.0
        };
        Ok(Self {
            params: *params,
            budget: guard_zone_budget(params),
            g,
        })
    }

    /// Null designs on both sides: `F` vanishes identically.
    fn is_degenerate(&self) -> bool {
        self.g >= 1.0
    }

    fn h_at(&self, d: f64) -> f64 {
        let p = &self.params;
        // σ_P² pairs with the β_t d^α link term here; it comes from P_cov.
        let inner = p.beta_t * d.powf(p.alpha) * p.sigma2_p / (p.p_t * p.lambda_e * PI)
            * (1.0 / self.g - 1.0);
        p.sigma2_s * p.beta_e / p.p_t * inner.powf(p.alpha / 2.0)
    }

    fn f_at(&self, d: f64) -> Result<(f64, f64)> {
        let h = self.h_at(d);
        let tail = upper_incomplete_gamma(self.params.gamma_shape(), h, tol())?;
        Ok((self.budget - tail, h))
    }
}

/// Evaluates `F`, `H`, `G` at `params.d` together with both optimal
/// designs. Requires `λ_e ≥ λ_e*`.
pub fn selection_function(params: &SystemParams) -> Result<SelectionVerdict> {
    let curve = SelectionCurve::new(params)?;
    let (f_value, h_value) = curve.f_at(params.d)?;
    let gz_design = optimal_guard_radius(params)?;
    let an_design = optimal_power_split(params)?;
    Ok(SelectionVerdict {
        f_value,
        h_value,
        g_value: curve.g,
        better: if f_value > 0.0 {
            Technique::GuardZone
        } else {
            Technique::ArtificialNoise
        },
        gz_design,
        an_design,
    })
}

/// Selection function value `F(d)` at the given distance.
pub fn selection_value(params: &SystemParams, d: f64) -> Result<f64> {
    let params = params.with_d(d);
    Ok(SelectionCurve::new(&params)?.f_at(d)?.0)
}

/// Link distance `d*` at which `F` changes sign.
///
/// The bracket (default `[1e-3, 10]`) widens geometrically until `F`
/// changes sign across it. When `λ_e` sits exactly on the threshold `F`
/// vanishes everywhere and the lower bracket edge is returned.
pub fn critical_distance(
    params: &SystemParams,
    bracket_hint: Option<(f64, f64)>,
) -> Result<CriticalDistance> {
    let curve = SelectionCurve::new(params)?;
    let (mut lo, mut hi) = bracket_hint.unwrap_or(DEFAULT_D_BRACKET);
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::domain("bracket", lo, "needs 0 < d_lo < d_hi"));
    }
    if curve.is_degenerate() {
        return Ok(CriticalDistance {
            d_star: lo,
            bracket: (lo, hi),
        });
    }

    let f = |d: f64| curve.f_at(d).map(|(f, _)| f);
    let mut f_lo = f(lo)?;
    while f_lo > 0.0 && lo > D_MIN {
        lo = (lo / 10.0).max(D_MIN);
        f_lo = f(lo)?;
    }
    let mut f_hi = f(hi)?;
    while f_hi <= 0.0 && hi < D_MAX {
        hi = (hi * 2.0).min(D_MAX);
        f_hi = f(hi)?;
    }
    if f_lo > 0.0 || f_hi <= 0.0 {
        return Err(Error::NoCrossing {
            d_lo: lo,
            f_lo,
            d_hi: hi,
            f_hi,
        });
    }
    let bracket = (lo, hi);

    // Invariant: F(lo) ≤ 0 < F(hi).
    while hi - lo > D_STAR_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(CriticalDistance {
        d_star: 0.5 * (lo + hi),
        bracket,
    })
}
