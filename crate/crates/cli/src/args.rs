use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "secplan",
    version,
    about = "Guard zone vs. artificial noise planning for a D2D link"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Closed-form probabilities for one guard-zone or noise-split design.
    Analytic {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        design: DesignArgs,
    },
    /// Density threshold and the secrecy-constrained optimal designs.
    Optimize {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Picks the technique with the higher optimal coverage.
    Select {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Compares the closed forms against a Monte-Carlo estimate.
    McValidate {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        design: DesignArgs,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Selection function and optimal designs over a grid of link distances.
    SweepD {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Critical distance over a grid of eavesdropper densities.
    SweepLambda {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
}

#[derive(Args, Debug, Default, Clone)]
pub struct CommonArgs {
    /// TOML file with [model], [montecarlo] and [cli] sections.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long = "pt")]
    pub p_t: Option<f64>,
    #[arg(long)]
    pub beta_t: Option<f64>,
    #[arg(long)]
    pub beta_e: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long = "sigma2-p")]
    pub sigma2_p: Option<f64>,
    #[arg(long = "sigma2-s")]
    pub sigma2_s: Option<f64>,
    #[arg(long)]
    pub lambda_e: Option<f64>,
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when absent or `-`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct DesignArgs {
    /// Guard zone radius.
    #[arg(long)]
    pub r_g: Option<f64>,
    /// Fraction of power spent on the information signal.
    #[arg(long)]
    pub gamma: Option<f64>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct McArgs {
    #[arg(long, visible_alias = "mc")]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub window_radius: Option<f64>,
    #[arg(long)]
    pub tail_prob: Option<f64>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct GridArgs {
    #[arg(long)]
    pub grid_start: Option<f64>,
    #[arg(long)]
    pub grid_stop: Option<f64>,
    #[arg(long)]
    pub grid_step: Option<f64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}
