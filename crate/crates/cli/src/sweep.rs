//! Grid sweeps over the link distance and the eavesdropper density.

use serde::Serialize;

use secplan_core::{
    an_metrics, critical_distance, gz_metrics, lambda_threshold, optimal_guard_radius,
    optimal_power_split, run_an_trials, run_gz_trials, selection_value, Error as CoreError,
    GuardZoneDesign, NoiseSplitDesign, SystemParams, TrialConfig,
};

use crate::commands::{ParamsRecord, NO_ENHANCEMENT};
use crate::config::Grid;
use crate::error::{CliError, Result};
use crate::output::{cell, coord, sig6, Report};

#[derive(Debug, Clone, Serialize)]
pub struct DistanceRow {
    pub d: f64,
    /// `F(d)`; absent below the density threshold.
    pub f_value: Option<f64>,
    pub verdict: &'static str,
    pub r_g_star: f64,
    pub gamma_star: f64,
    pub p_cov_gz: f64,
    pub p_sec_gz: f64,
    pub p_cov_an: f64,
    pub p_sec_an: f64,
    pub mc_p_cov_gz: Option<f64>,
    pub mc_p_cov_gz_half_width: Option<f64>,
    pub mc_p_cov_an: Option<f64>,
    pub mc_p_cov_an_half_width: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct McSettings {
    pub n_trials: u64,
    pub seed: u64,
    pub tail_prob: f64,
    pub window_radius: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct DistanceSweep {
    pub command: &'static str,
    pub params: ParamsRecord,
    pub lambda_e_star: f64,
    /// Root of `F`; absent below the threshold or when no root was found.
    pub d_star: Option<f64>,
    pub d_star_status: &'static str,
    pub montecarlo: Option<McSettings>,
    pub rows: Vec<DistanceRow>,
}

impl Report for DistanceSweep {
    fn header(&self) -> &'static [&'static str] {
        &[
            "d",
            "f_value",
            "verdict",
            "r_g_star",
            "gamma_star",
            "p_cov_gz",
            "p_sec_gz",
            "p_cov_an",
            "p_sec_an",
            "mc_p_cov_gz",
            "mc_p_cov_gz_half_width",
            "mc_p_cov_an",
            "mc_p_cov_an_half_width",
        ]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    coord(r.d),
                    cell(r.f_value),
                    r.verdict.into(),
                    sig6(r.r_g_star),
                    sig6(r.gamma_star),
                    sig6(r.p_cov_gz),
                    sig6(r.p_sec_gz),
                    sig6(r.p_cov_an),
                    sig6(r.p_sec_an),
                    cell(r.mc_p_cov_gz),
                    cell(r.mc_p_cov_gz_half_width),
                    cell(r.mc_p_cov_an),
                    cell(r.mc_p_cov_an_half_width),
                ]
            })
            .collect()
    }
}

fn verdict(f: f64) -> &'static str {
    // ties go to artificial noise
    if f > 0.0 {
        "guard-zone"
    } else {
        "artificial-noise"
    }
}

/// One row per grid distance. With `trials`, both optimal designs are also
/// simulated from the same seed, so the coverage pair shares its fields.
pub fn sweep_distance(
    params: &SystemParams,
    grid: &Grid,
    trials: Option<&TrialConfig>,
) -> Result<DistanceSweep> {
    let points = grid.points();
    if points[0] <= 0.0 {
        return Err(CliError::Usage(format!(
            "distance grid must be positive, starts at {}",
            points[0]
        )));
    }
    let lambda_e_star = lambda_threshold(params)?;
    let below = params.lambda_e < lambda_e_star;
    let gz = optimal_guard_radius(params)?;
    let an = optimal_power_split(params)?;
    let gz_design = GuardZoneDesign { r_g: gz.parameter };
    let an_design = NoiseSplitDesign {
        gamma: an.parameter,
    };

    let mut rows = Vec::with_capacity(points.len());
    for &d in &points {
        let p = params.with_d(d);
        let gz_m = gz_metrics(&p, &gz_design)?;
        let an_m = an_metrics(&p, &an_design)?;
        let f_value = if below {
            None
        } else {
            Some(selection_value(&p, d)?)
        };
        let mut row = DistanceRow {
            d,
            f_value,
            verdict: f_value.map_or(NO_ENHANCEMENT, verdict),
            r_g_star: gz.parameter,
            gamma_star: an.parameter,
            p_cov_gz: gz_m.p_cov,
            p_sec_gz: gz_m.p_sec,
            p_cov_an: an_m.p_cov,
            p_sec_an: an_m.p_sec,
            mc_p_cov_gz: None,
            mc_p_cov_gz_half_width: None,
            mc_p_cov_an: None,
            mc_p_cov_an_half_width: None,
        };
        if let Some(cfg) = trials {
            let g = run_gz_trials(&p, &gz_design, cfg)?;
            let a = run_an_trials(&p, &an_design, cfg)?;
            row.mc_p_cov_gz = Some(g.p_cov.mean);
            row.mc_p_cov_gz_half_width = Some(g.p_cov.half_width);
            row.mc_p_cov_an = Some(a.p_cov.mean);
            row.mc_p_cov_an_half_width = Some(a.p_cov.half_width);
        }
        rows.push(row);
    }

    let (d_star, d_star_status) = if below {
        (None, NO_ENHANCEMENT)
    } else {
        match critical_distance(params, None) {
            Ok(c) => (Some(c.d_star), "ok"),
            Err(CoreError::NoCrossing { .. }) => (None, "no-crossing"),
            Err(e) => return Err(e.into()),
        }
    };

    Ok(DistanceSweep {
        command: "sweep-d",
        params: ParamsRecord::new(params, None),
        lambda_e_star,
        d_star,
        d_star_status,
        montecarlo: trials.map(|c| McSettings {
            n_trials: c.n_trials,
            seed: c.seed,
            tail_prob: c.tail_prob,
            window_radius: c.window_radius,
        }),
        rows,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityRow {
    pub lambda_e: f64,
    pub d_star: Option<f64>,
    pub r_g_star: Option<f64>,
    pub gamma_star: Option<f64>,
    /// `ok`, `no-enhancement-needed`, `no-crossing` or `numerical-error`.
    pub status: &'static str,
}

#[derive(Debug, Serialize)]
pub struct DensitySweep {
    pub command: &'static str,
    pub params: ParamsRecord,
    pub lambda_e_star: f64,
    /// Whether `d*` is nondecreasing across the rows that have one.
    pub monotone: bool,
    pub rows: Vec<DensityRow>,
}

impl Report for DensitySweep {
    fn header(&self) -> &'static [&'static str] {
        &["lambda_e", "d_star", "r_g_star", "gamma_star", "status"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    coord(r.lambda_e),
                    cell(r.d_star),
                    cell(r.r_g_star),
                    cell(r.gamma_star),
                    r.status.into(),
                ]
            })
            .collect()
    }
}

fn density_row(params: &SystemParams, lambda_e: f64, threshold: f64) -> DensityRow {
    let p = params.with_lambda_e(lambda_e);
    let designs = optimal_guard_radius(&p).and_then(|g| Ok((g, optimal_power_split(&p)?)));
    let (r_g_star, gamma_star) = match &designs {
        Ok((g, a)) => (Some(g.parameter), Some(a.parameter)),
        Err(_) => (None, None),
    };
    let mut row = DensityRow {
        lambda_e,
        d_star: None,
        r_g_star,
        gamma_star,
        status: "ok",
    };
    if designs.is_err() {
        row.status = "numerical-error";
    } else if lambda_e < threshold {
        row.status = NO_ENHANCEMENT;
    } else {
        match critical_distance(&p, None) {
            Ok(c) => row.d_star = Some(c.d_star),
            Err(CoreError::NoCrossing { .. }) => row.status = "no-crossing",
            Err(_) => row.status = "numerical-error",
        }
    }
    row
}

/// One row per grid density. Root-finding failures are recorded in the
/// row's status and the sweep continues.
pub fn sweep_density(params: &SystemParams, grid: &Grid) -> Result<DensitySweep> {
    let points = grid.points();
    if points[0] < 0.0 {
        return Err(CliError::Usage(format!(
            "density grid must be non-negative, starts at {}",
            points[0]
        )));
    }
    let lambda_e_star = lambda_threshold(params)?;
    let rows: Vec<DensityRow> = points
        .iter()
        .map(|&l| density_row(params, l, lambda_e_star))
        .collect();
    let roots: Vec<f64> = rows.iter().filter_map(|r| r.d_star).collect();
    Ok(DensitySweep {
        command: "sweep-lambda",
        params: ParamsRecord::new(params, None),
        lambda_e_star,
        monotone: roots.windows(2).all(|w| w[1] >= w[0]),
        rows,
    })
}
