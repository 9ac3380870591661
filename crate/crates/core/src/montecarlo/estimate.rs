use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF};

use crate::error::{Error, Result};

const Z_95: f64 = 1.959_963_984_540_054;

/// Below this many successes (or failures) the normal approximation is
/// replaced by the exact Clopper–Pearson interval.
pub const RARE_EVENT_COUNT: u64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntervalMethod {
    Normal,
    ClopperPearson,
}

/// A Monte-Carlo probability estimate with its 95% confidence half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub half_width: f64,
    pub n_effective: u64,
    pub method: IntervalMethod,
}

impl McEstimate {
    pub fn from_counts(successes: u64, trials: u64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::InsufficientData("no trials entered the estimate"));
        }
        if successes > trials {
            return Err(Error::domain(
                "successes",
                successes as f64,
                "exceeds trial count",
            ));
        }
        let n = trials as f64;
        let mean = successes as f64 / n;
        if successes.min(trials - successes) < RARE_EVENT_COUNT {
            let (lo, hi) = clopper_pearson(successes, trials);
            Ok(Self {
                mean,
                half_width: (mean - lo).max(hi - mean),
                n_effective: trials,
                method: IntervalMethod::ClopperPearson,
            })
        } else {
            Ok(Self {
                mean,
                half_width: Z_95 * (mean * (1.0 - mean) / n).sqrt(),
                n_effective: trials,
                method: IntervalMethod::Normal,
            })
        }
    }

    /// Whether `value` lies within `k` half-widths of the mean.
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.half_width
    }
}

/// Exact two-sided 95% binomial interval.
fn clopper_pearson(successes: u64, trials: u64) -> (f64, f64) {
    let k = successes as f64;
    let n = trials as f64;
    let lo = if successes == 0 {
        0.0
    } else {
        Beta::new(k, n - k + 1.0)
            .map(|b| b.inverse_cdf(0.025))
            .unwrap_or(0.0)
    };
    let hi = if successes == trials {
        1.0
    } else {
        Beta::new(k + 1.0, n - k)
            .map(|b| b.inverse_cdf(0.975))
            .unwrap_or(1.0)
    };
    (lo, hi)
}
