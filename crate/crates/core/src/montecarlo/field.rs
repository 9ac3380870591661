use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Poisson};
use serde::{Deserialize, Serialize};

use super::rng::{Stream, StreamKey};
use crate::error::{Error, Result};
use crate::model::SystemParams;

/// Points closer than this to the transmitter are redrawn; the path-loss
/// law is singular at the origin.
pub const ORIGIN_EXCLUSION: f64 = 1e-9;

/// One realization of the eavesdropper process on a disk centred at the
/// transmitter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EavesdropperField {
    pub radius: f64,
    pub points: Vec<[f64; 2]>,
    /// Unit-mean exponential channel power gain of each point.
    pub fading: Vec<f64>,
}

impl EavesdropperField {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Samples fields on a fixed disk. The Poisson law of the point count is
/// built once and shared by all trials.
#[derive(Debug, Clone)]
pub(crate) struct FieldSampler {
    key: StreamKey,
    radius: f64,
    count: Option<Poisson<f64>>,
}

impl FieldSampler {
    pub(crate) fn new(lambda_e: f64, radius: f64, seed: u64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::domain(
                "radius",
                radius,
                "window radius must be positive",
            ));
        }
        let mean = lambda_e * PI * radius * radius;
        let count =
            if mean > 0.0 {
                Some(Poisson::new(mean).map_err(|_| {
                    Error::domain("lambda_e", lambda_e, "Poisson mean out of range")
                })?)
            } else {
                None
            };
        Ok(Self {
            key: StreamKey::new(seed),
            radius,
            count,
        })
    }

    pub(crate) fn key(&self) -> &StreamKey {
        &self.key
    }

    /// Lazily generated `(position, fading)` pairs of one trial.
    pub(crate) fn draws(&self, trial_index: u64) -> FieldDraws {
        let remaining = match &self.count {
            Some(poisson) => {
                let mut rng = self.key.rng(trial_index, Stream::PointCount);
                poisson.sample(&mut rng) as u64
            }
            None => 0,
        };
        FieldDraws {
            positions: self.key.rng(trial_index, Stream::Positions),
            fading: self.key.rng(trial_index, Stream::Fading),
            radius: self.radius,
            remaining,
        }
    }

    pub(crate) fn sample(&self, trial_index: u64) -> EavesdropperField {
        let draws = self.draws(trial_index);
        let mut points = Vec::with_capacity(draws.remaining as usize);
        let mut fading = Vec::with_capacity(draws.remaining as usize);
        for draw in draws {
            points.push(draw.position);
            fading.push(draw.gain);
        }
        EavesdropperField {
            radius: self.radius,
            points,
            fading,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct PointDraw {
    pub position: [f64; 2],
    pub distance: f64,
    pub gain: f64,
}

pub(crate) struct FieldDraws {
    positions: ChaCha8Rng,
    fading: ChaCha8Rng,
    radius: f64,
    remaining: u64,
}

impl Iterator for FieldDraws {
    type Item = PointDraw;

    fn next(&mut self) -> Option<PointDraw> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let (distance, angle) = loop {
            // radius·√u is uniform in area over the disk
            let u: f64 = self.positions.random();
            let angle = 2.0 * PI * self.positions.random::<f64>();
            let distance = self.radius * u.sqrt();
            if distance >= ORIGIN_EXCLUSION {
                break (distance, angle);
            }
        };
        let gain = loop {
            let g: f64 = Exp1.sample(&mut self.fading);
            if g > 0.0 {
                break g;
            }
        };
        Some(PointDraw {
            position: [distance * angle.cos(), distance * angle.sin()],
            distance,
            gain,
        })
    }
}

/// Draws the eavesdropper field of one trial on a disk of `radius`.
///
/// The result depends only on `(seed, trial_index)` and the inputs, and
/// matches the field the trial runners see for the same arguments.
pub fn sample_field(
    params: &SystemParams,
    radius: f64,
    trial_index: u64,
    seed: u64,
) -> Result<EavesdropperField> {
    params.validate()?;
    Ok(FieldSampler::new(params.lambda_e, radius, seed)?.sample(trial_index))
}

/// Largest faded path gain `g‖y‖^{-α}` over the field, `0` when empty.
pub fn strongest_received_power(field: &EavesdropperField, params: &SystemParams) -> Result<f64> {
    let mut best = 0.0f64;
    for (point, &gain) in field.points.iter().zip(&field.fading) {
        let distance = point[0].hypot(point[1]);
        if distance < ORIGIN_EXCLUSION {
            return Err(Error::ExcludedRegion { distance });
        }
        best = best.max(gain * distance.powf(-params.alpha));
    }
    Ok(best)
}
