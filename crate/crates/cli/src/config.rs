//! Config file loading and flag/file/default resolution.
//!
//! Precedence is flag, then config file, then the built-in reference
//! operating point.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use secplan_core::{GuardZoneDesign, NoiseSplitDesign, SystemParams, TrialConfig};

use crate::args::{CommonArgs, DesignArgs, Format, GridArgs, McArgs};
use crate::error::{CliError, Result};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default)]
    pub montecarlo: MonteCarloSection,
    #[serde(default)]
    pub cli: CliSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub alpha: Option<f64>,
    pub p_t: Option<f64>,
    pub beta_t: Option<f64>,
    pub beta_e: Option<f64>,
    pub epsilon: Option<f64>,
    pub sigma2_p: Option<f64>,
    pub sigma2_s: Option<f64>,
    pub lambda_e: Option<f64>,
    pub d: Option<f64>,
    pub r_g: Option<f64>,
    pub gamma: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonteCarloSection {
    pub n_trials: Option<u64>,
    pub seed: Option<u64>,
    pub window_radius: Option<f64>,
    pub tail_prob: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CliSection {
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub grid_start: Option<f64>,
    pub grid_stop: Option<f64>,
    pub grid_step: Option<f64>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config {
            path: path.to_owned(),
            reason: e.to_string(),
        })?;
        toml::from_str(&text).map_err(|e| CliError::Config {
            path: path.to_owned(),
            reason: e.to_string(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Design {
    GuardZone(GuardZoneDesign),
    NoiseSplit(NoiseSplitDesign),
}

/// Inclusive grid `start, start + step, …, stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(CliError::Usage(
                "grid bounds and step must be finite".into(),
            ));
        }
        if stop < start {
            return Err(CliError::Usage(format!(
                "grid stop {stop} is below grid start {start}"
            )));
        }
        if step <= 0.0 {
            return Err(CliError::Usage(format!(
                "grid step {step} must be positive"
            )));
        }
        Ok(Self { start, stop, step })
    }

    /// Grid points, rounded to 12 decimals so that `0.1 + 3 × 0.05` prints
    /// as `0.25`. The stop value is included when it lies on the lattice.
    pub fn points(&self) -> Vec<f64> {
        let span = (self.stop - self.start) / self.step;
        let n = (span + 1e-9).floor() as u64;
        (0..=n)
            .map(|i| {
                let x = self.start + i as f64 * self.step;
                (x * 1e12).round() / 1e12
            })
            .collect()
    }
}

pub const D_GRID: (f64, f64, f64) = (0.1, 1.5, 0.05);
pub const LAMBDA_GRID: (f64, f64, f64) = (0.05, 0.25, 0.025);

/// Values shared by every subcommand after merging flags and config.
#[derive(Debug)]
pub struct Settings {
    /// Model parameters; `d` is a placeholder unless [`Settings::d`] is set.
    pub params: SystemParams,
    pub d: Option<f64>,
    pub format: Format,
    pub out: Option<PathBuf>,
    file: ConfigFile,
}

impl Settings {
    pub fn new(common: &CommonArgs) -> Result<Self> {
        let file = match &common.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let m = &file.model;
        let base = SystemParams::default();
        let d = common.d.or(m.d);
        let params = SystemParams {
            alpha: common.alpha.or(m.alpha).unwrap_or(base.alpha),
            p_t: common.p_t.or(m.p_t).unwrap_or(base.p_t),
            beta_t: common.beta_t.or(m.beta_t).unwrap_or(base.beta_t),
            beta_e: common.beta_e.or(m.beta_e).unwrap_or(base.beta_e),
            epsilon: common.epsilon.or(m.epsilon).unwrap_or(base.epsilon),
            sigma2_p: common.sigma2_p.or(m.sigma2_p).unwrap_or(base.sigma2_p),
            sigma2_s: common.sigma2_s.or(m.sigma2_s).unwrap_or(base.sigma2_s),
            lambda_e: common.lambda_e.or(m.lambda_e).unwrap_or(base.lambda_e),
            d: d.unwrap_or(base.d),
        };
        params.validate()?;
        let format = common.format.or(file.cli.format).unwrap_or(Format::Csv);
        let out = common
            .out
            .clone()
            .or_else(|| file.cli.out.clone())
            .filter(|p| p.as_os_str() != "-");
        Ok(Self {
            params,
            d,
            format,
            out,
            file,
        })
    }

    /// Parameters with a link distance that was actually supplied.
    pub fn params_with_d(&self) -> Result<SystemParams> {
        match self.d {
            Some(_) => Ok(self.params),
            None => Err(CliError::Missing("d")),
        }
    }

    /// Exactly one of `r_g` and `γ`. Flags replace the config's design as a
    /// whole.
    pub fn design(&self, args: &DesignArgs) -> Result<Design> {
        let (r_g, gamma) = if args.r_g.is_some() || args.gamma.is_some() {
            (args.r_g, args.gamma)
        } else {
            (self.file.model.r_g, self.file.model.gamma)
        };
        match (r_g, gamma) {
            (Some(r_g), None) => Ok(Design::GuardZone(GuardZoneDesign::new(r_g)?)),
            (None, Some(gamma)) => Ok(Design::NoiseSplit(NoiseSplitDesign::new(gamma)?)),
            (Some(_), Some(_)) => Err(CliError::Usage(
                "give either --r-g or --gamma, not both".into(),
            )),
            (None, None) => Err(CliError::Usage(
                "missing design: give --r-g or --gamma".into(),
            )),
        }
    }

    /// Trial configuration, or `None` when no trial count was given and
    /// `default_trials` is `None`.
    pub fn trials(
        &self,
        args: &McArgs,
        default_trials: Option<u64>,
    ) -> Result<Option<TrialConfig>> {
        let f = &self.file.montecarlo;
        let Some(n_trials) = args.trials.or(f.n_trials).or(default_trials) else {
            return Ok(None);
        };
        let base = TrialConfig::default();
        let cfg = TrialConfig {
            n_trials,
            seed: args.seed.or(f.seed).unwrap_or(base.seed),
            window_radius: args.window_radius.or(f.window_radius),
            tail_prob: args.tail_prob.or(f.tail_prob).unwrap_or(base.tail_prob),
        };
        cfg.validate()?;
        Ok(Some(cfg))
    }

    pub fn grid(&self, args: &GridArgs, default: (f64, f64, f64)) -> Result<Grid> {
        let c = &self.file.cli;
        Grid::new(
            args.grid_start.or(c.grid_start).unwrap_or(default.0),
            args.grid_stop.or(c.grid_stop).unwrap_or(default.1),
            args.grid_step.or(c.grid_step).unwrap_or(default.2),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_d_grid_is_inclusive() {
        let g = Grid::new(D_GRID.0, D_GRID.1, D_GRID.2).unwrap().points();
        assert_eq!(g.len(), 29);
        assert_eq!(g[0], 0.1);
        assert_eq!(g[3], 0.25);
        assert_eq!(*g.last().unwrap(), 1.5);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn lambda_grid_points() {
        let g = Grid::new(LAMBDA_GRID.0, LAMBDA_GRID.1, LAMBDA_GRID.2)
            .unwrap()
            .points();
        assert_eq!(
            g,
            vec![0.05, 0.075, 0.1, 0.125, 0.15, 0.175, 0.2, 0.225, 0.25]
        );
    }

    #[test]
    fn single_point_grid() {
        assert_eq!(Grid::new(0.1, 0.1, 0.05).unwrap().points(), vec![0.1]);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid::new(1.0, 0.5, 0.1).is_err());
        assert!(Grid::new(0.1, 0.5, 0.0).is_err());
        assert!(Grid::new(0.1, f64::INFINITY, 0.1).is_err());
    }

    #[test]
    fn config_sections_parse() {
        let file: ConfigFile = toml::from_str(
            "[model]\nalpha = 3.5\nlambda_e = 0.2\nr_g = 0.5\n\
             [montecarlo]\nn_trials = 1000\nseed = 7\n\
             [cli]\nformat = \"json\"\ngrid_step = 0.1\n",
        )
        .unwrap();
        assert_eq!(file.model.alpha, Some(3.5));
        assert_eq!(file.montecarlo.seed, Some(7));
        assert_eq!(file.cli.format, Some(Format::Json));
        assert!(toml::from_str::<ConfigFile>("[model]\nbogus = 1\n").is_err());
    }
}
