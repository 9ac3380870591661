//! Single-point subcommands: analytic, optimize, select, mc-validate.

use std::io::Write;

use serde::Serialize;

use secplan_core::montecarlo::{an_trial_counts, gz_trial_counts, IntervalMethod};
use secplan_core::{
    lambda_threshold, optimal_guard_radius, optimal_power_split, p_active, p_cov_an, p_cov_gz,
    p_sec_an, p_sec_gz, selection_function, Error as CoreError, McEstimate, OptimalDesign,
    SystemParams, Technique,
};

use crate::args::{DesignArgs, McArgs};
use crate::config::{Design, Settings};
use crate::error::{Result, EXIT_INSUFFICIENT_DATA};
use crate::output::{cell, emit, sig6, Report};

/// Verdict token when the density is below the threshold.
pub const NO_ENHANCEMENT: &str = "no-enhancement-needed";

/// Default trial count for `mc-validate`.
pub const DEFAULT_TRIALS: u64 = 1_000_000;

/// How many half-widths an estimate may sit from the closed form.
pub const AGREEMENT_HALF_WIDTHS: f64 = 3.0;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ParamsRecord {
    pub alpha: f64,
    pub p_t: f64,
    pub beta_t: f64,
    pub beta_e: f64,
    pub epsilon: f64,
    pub sigma2_p: f64,
    pub sigma2_s: f64,
    pub lambda_e: f64,
    pub d: Option<f64>,
}

impl ParamsRecord {
    pub fn new(p: &SystemParams, d: Option<f64>) -> Self {
        Self {
            alpha: p.alpha,
            p_t: p.p_t,
            beta_t: p.beta_t,
            beta_e: p.beta_e,
            epsilon: p.epsilon,
            sigma2_p: p.sigma2_p,
            sigma2_s: p.sigma2_s,
            lambda_e: p.lambda_e,
            d,
        }
    }
}

fn design_label(design: &Design) -> (Technique, f64) {
    match design {
        Design::GuardZone(g) => (Technique::GuardZone, g.r_g),
        Design::NoiseSplit(n) => (Technique::ArtificialNoise, n.gamma),
    }
}

#[derive(Debug, Serialize)]
pub struct AnalyticReport {
    pub command: &'static str,
    pub params: ParamsRecord,
    pub technique: Technique,
    pub parameter: f64,
    pub p_active: Option<f64>,
    pub p_cov: f64,
    pub p_sec: f64,
}

impl Report for AnalyticReport {
    fn header(&self) -> &'static [&'static str] {
        &["technique", "parameter", "p_active", "p_cov", "p_sec"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.technique.label().into(),
            sig6(self.parameter),
            cell(self.p_active),
            sig6(self.p_cov),
            sig6(self.p_sec),
        ]]
    }
}

pub fn analytic(settings: &Settings, design: &DesignArgs) -> Result<AnalyticReport> {
    let p = settings.params_with_d()?;
    let design = settings.design(design)?;
    let (technique, parameter) = design_label(&design);
    let (p_active, p_cov, p_sec) = match &design {
        Design::GuardZone(g) => (Some(p_active(&p, g)?), p_cov_gz(&p, g)?, p_sec_gz(&p, g)?),
        Design::NoiseSplit(n) => (None, p_cov_an(&p, n)?, p_sec_an(&p, n)?),
    };
    Ok(AnalyticReport {
        command: "analytic",
        params: ParamsRecord::new(&p, settings.d),
        technique,
        parameter,
        p_active,
        p_cov,
        p_sec,
    })
}

#[derive(Debug, Serialize)]
pub struct DesignRecord {
    pub technique: Technique,
    pub parameter: f64,
    /// Absent when no link distance was given.
    pub p_cov: Option<f64>,
    pub p_sec: f64,
    pub constraint_active: bool,
}

impl DesignRecord {
    fn new(design: &OptimalDesign, with_cov: bool) -> Self {
        Self {
            technique: design.technique,
            parameter: design.parameter,
            p_cov: with_cov.then_some(design.metrics.p_cov),
            p_sec: design.metrics.p_sec,
            constraint_active: design.constraint_active,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct OptimizeReport {
    pub command: &'static str,
    pub params: ParamsRecord,
    pub lambda_e_star: f64,
    pub constraint_binds: bool,
    pub designs: [DesignRecord; 2],
}

impl Report for OptimizeReport {
    fn header(&self) -> &'static [&'static str] {
        &[
            "technique",
            "parameter",
            "p_cov",
            "p_sec",
            "constraint_active",
            "lambda_e",
            "lambda_e_star",
        ]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.designs
            .iter()
            .map(|d| {
                vec![
                    d.technique.label().into(),
                    sig6(d.parameter),
                    cell(d.p_cov),
                    sig6(d.p_sec),
                    d.constraint_active.to_string(),
                    sig6(self.params.lambda_e),
                    sig6(self.lambda_e_star),
                ]
            })
            .collect()
    }
}

pub fn optimize(settings: &Settings) -> Result<OptimizeReport> {
    let p = settings.params;
    let lambda_e_star = lambda_threshold(&p)?;
    let gz = optimal_guard_radius(&p)?;
    let an = optimal_power_split(&p)?;
    let with_cov = settings.d.is_some();
    Ok(OptimizeReport {
        command: "optimize",
        params: ParamsRecord::new(&p, settings.d),
        lambda_e_star,
        constraint_binds: gz.constraint_active,
        designs: [
            DesignRecord::new(&gz, with_cov),
            DesignRecord::new(&an, with_cov),
        ],
    })
}

#[derive(Debug, Serialize)]
pub struct SelectReport {
    pub command: &'static str,
    pub params: ParamsRecord,
    pub lambda_e_star: f64,
    /// `guard-zone`, `artificial-noise` or `no-enhancement-needed`.
    pub verdict: String,
    pub f_value: Option<f64>,
    pub h_value: Option<f64>,
    pub g_value: Option<f64>,
    pub r_g_star: f64,
    pub gamma_star: f64,
    pub p_cov_gz: f64,
    pub p_sec_gz: f64,
    pub p_cov_an: f64,
    pub p_sec_an: f64,
}

impl Report for SelectReport {
    fn header(&self) -> &'static [&'static str] {
        &[
            "verdict",
            "f_value",
            "h_value",
            "g_value",
            "r_g_star",
            "gamma_star",
            "p_cov_gz",
            "p_sec_gz",
            "p_cov_an",
            "p_sec_an",
            "lambda_e_star",
        ]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.verdict.clone(),
            cell(self.f_value),
            cell(self.h_value),
            cell(self.g_value),
            sig6(self.r_g_star),
            sig6(self.gamma_star),
            sig6(self.p_cov_gz),
            sig6(self.p_sec_gz),
            sig6(self.p_cov_an),
            sig6(self.p_sec_an),
            sig6(self.lambda_e_star),
        ]]
    }
}

pub fn select(settings: &Settings) -> Result<SelectReport> {
    let p = settings.params_with_d()?;
    let lambda_e_star = lambda_threshold(&p)?;
    let record = ParamsRecord::new(&p, settings.d);
    let report = match selection_function(&p) {
        Ok(v) => SelectReport {
            command: "select",
            params: record,
            lambda_e_star,
            verdict: v.better.label().into(),
            f_value: Some(v.f_value),
            h_value: Some(v.h_value),
            g_value: Some(v.g_value),
            r_g_star: v.gz_design.parameter,
            gamma_star: v.an_design.parameter,
            p_cov_gz: v.gz_design.metrics.p_cov,
            p_sec_gz: v.gz_design.metrics.p_sec,
            p_cov_an: v.an_design.metrics.p_cov,
            p_sec_an: v.an_design.metrics.p_sec,
        },
        Err(CoreError::BelowThreshold { .. }) => {
            let gz = optimal_guard_radius(&p)?;
            let an = optimal_power_split(&p)?;
            SelectReport {
                command: "select",
                params: record,
                lambda_e_star,
                verdict: NO_ENHANCEMENT.into(),
                f_value: None,
                h_value: None,
                g_value: None,
                r_g_star: gz.parameter,
                gamma_star: an.parameter,
                p_cov_gz: gz.metrics.p_cov,
                p_sec_gz: gz.metrics.p_sec,
                p_cov_an: an.metrics.p_cov,
                p_sec_an: an.metrics.p_sec,
            }
        }
        Err(e) => return Err(e.into()),
    };
    Ok(report)
}

#[derive(Debug, Serialize)]
pub struct ValidationRow {
    pub quantity: &'static str,
    pub analytic: f64,
    pub mc_mean: Option<f64>,
    pub half_width: Option<f64>,
    pub interval: Option<IntervalMethod>,
    pub n_effective: u64,
    pub pass: Option<bool>,
    /// `ok`, or `insufficient-data` when the estimate could not be formed.
    pub status: &'static str,
}

impl ValidationRow {
    fn new(
        quantity: &'static str,
        analytic: f64,
        estimate: &secplan_core::Result<McEstimate>,
    ) -> Self {
        match estimate {
            Ok(e) => Self {
                quantity,
                analytic,
                mc_mean: Some(e.mean),
                half_width: Some(e.half_width),
                interval: Some(e.method),
                n_effective: e.n_effective,
                pass: Some(e.agrees_with(analytic, AGREEMENT_HALF_WIDTHS)),
                status: "ok",
            },
            Err(_) => Self {
                quantity,
                analytic,
                mc_mean: None,
                half_width: None,
                interval: None,
                n_effective: 0,
                pass: None,
                status: "insufficient-data",
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ValidationReport {
    pub command: &'static str,
    pub params: ParamsRecord,
    pub technique: Technique,
    pub parameter: f64,
    pub n_trials: u64,
    pub seed: u64,
    pub window_radius: f64,
    pub rows: Vec<ValidationRow>,
}

impl ValidationReport {
    pub fn has_gap(&self) -> bool {
        self.rows.iter().any(|r| r.mc_mean.is_none())
    }
}

impl Report for ValidationReport {
    fn header(&self) -> &'static [&'static str] {
        &[
            "quantity",
            "analytic",
            "mc_mean",
            "half_width",
            "interval",
            "n_effective",
            "pass",
            "status",
        ]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    r.quantity.into(),
                    sig6(r.analytic),
                    cell(r.mc_mean),
                    cell(r.half_width),
                    r.interval
                        .map(|m| match m {
                            IntervalMethod::Normal => "normal",
                            IntervalMethod::ClopperPearson => "clopper-pearson",
                        })
                        .unwrap_or_default()
                        .into(),
                    r.n_effective.to_string(),
                    r.pass.map(|b| b.to_string()).unwrap_or_default(),
                    r.status.into(),
                ]
            })
            .collect()
    }
}

pub fn mc_validate(
    settings: &Settings,
    design: &DesignArgs,
    mc: &McArgs,
) -> Result<ValidationReport> {
    let p = settings.params_with_d()?;
    let design = settings.design(design)?;
    let cfg = settings
        .trials(mc, Some(DEFAULT_TRIALS))?
        .expect("default trial count");
    let (technique, parameter) = design_label(&design);
    let (rows, window_radius) = match &design {
        Design::GuardZone(g) => {
            let (counts, window) = gz_trial_counts(&p, g, &cfg)?;
            let rows = vec![
                ValidationRow::new("p_active", p_active(&p, g)?, &counts.p_active()),
                ValidationRow::new("p_cov", p_cov_gz(&p, g)?, &counts.p_cov()),
                ValidationRow::new("p_sec", p_sec_gz(&p, g)?, &counts.p_sec()),
            ];
            (rows, window)
        }
        Design::NoiseSplit(n) => {
            let (counts, window) = an_trial_counts(&p, n, &cfg)?;
            let rows = vec![
                ValidationRow::new("p_cov", p_cov_an(&p, n)?, &counts.p_cov()),
                ValidationRow::new("p_sec", p_sec_an(&p, n)?, &counts.p_sec()),
            ];
            (rows, window)
        }
    };
    Ok(ValidationReport {
        command: "mc-validate",
        params: ParamsRecord::new(&p, settings.d),
        technique,
        parameter,
        n_trials: cfg.n_trials,
        seed: cfg.seed,
        window_radius,
        rows,
    })
}

/// Emits an mc-validate report; a gap in the estimates gives exit code 4
/// after the partial report is written.
pub fn emit_validation(
    report: &ValidationReport,
    settings: &Settings,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32> {
    emit(report, settings, stdout)?;
    if report.has_gap() {
        let _ = writeln!(
            stderr,
            "error: insufficient Monte-Carlo data: no active trials for the conditioned secrecy estimate"
        );
        return Ok(EXIT_INSUFFICIENT_DATA);
    }
    Ok(0)
}
