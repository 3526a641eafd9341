//! Audio ingest, training-time augmentation and feature context windows.

mod augment;
mod features;
mod wav;

pub use augment::{
    add_noise, apply_gain, gaussian_noise, mean_power, time_shift, AugmentationPlan, Snr,
};
pub use features::{context_window, FeatureSequence, DEFAULT_CONTEXT_RADIUS};
pub use wav::{read_wav, write_wav};

use crate::error::{Error, Result};

/// Mono audio with samples in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    samples: Vec<f32>,
    sample_rate: u32,
}

impl Waveform {
    /// Rejects non-finite or out-of-range samples and a zero sample rate.
    pub fn new(samples: Vec<f32>, sample_rate: u32) -> Result<Self> {
        if sample_rate == 0 {
            return Err(Error::Audio("sample rate must be positive".into()));
        }
        if let Some(i) = samples.iter().position(|s| !s.is_finite() || s.abs() > 1.0) {
            return Err(Error::Audio(format!(
                "sample {i} is {} (must be finite and within [-1, 1])",
                samples[i]
            )));
        }
        Ok(Self {
            samples,
            sample_rate,
        })
    }

    /// Builds a waveform, clamping samples into `[-1, 1]`.
    pub fn clamped(samples: impl IntoIterator<Item = f64>, sample_rate: u32) -> Result<Self> {
        let samples = samples
            .into_iter()
            .map(|s| {
                if s.is_finite() {
                    Ok(s.clamp(-1.0, 1.0) as f32)
                } else {
                    Err(Error::Numerical("non-finite sample".into()))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(samples, sample_rate)
    }

    pub fn samples(&self) -> &[f32] {
        &self.samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_secs(&self) -> f64 {
        self.samples.len() as f64 / f64::from(self.sample_rate)
    }
}
