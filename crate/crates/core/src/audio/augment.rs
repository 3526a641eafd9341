//! Perturbations applied to training audio: additive noise at a target
//! SNR, gain, and time shift. Every result is clamped to `[-1, 1]`.

use super::Waveform;
use crate::error::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Target signal-to-noise ratio.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Snr {
    /// No noise.
    #[default]
    Clean,
    Db(f64),
}

impl FromStr for Snr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("clean") || s.eq_ignore_ascii_case("inf") {
            return Ok(Snr::Clean);
        }
        let db: f64 = s.parse().map_err(|_| {
            Error::Invalid(format!("SNR must be a number of dB or `clean`, got {s:?}"))
        })?;
        if db.is_nan() {
            return Err(Error::Invalid("SNR is NaN".into()));
        }
        Ok(if db == f64::INFINITY {
            Snr::Clean
        } else {
            Snr::Db(db)
        })
    }
}

impl fmt::Display for Snr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Snr::Clean => f.pad("clean"),
            Snr::Db(db) => f.pad(&format!("{db} dB")),
        }
    }
}

/// Mean squared amplitude.
pub fn mean_power(samples: &[f32]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    samples.iter().map(|&s| f64::from(s).powi(2)).sum::<f64>() / samples.len() as f64
}

/// `len` samples of zero-mean Gaussian noise with variance `power`,
/// reproducible for a given seed.
pub fn gaussian_noise(len: usize, power: f64, seed: u64) -> Vec<f64> {
    let sigma = power.sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            sigma * z
        })
        .collect::<Vec<f64>>()
}

/// Adds Gaussian noise so that `10·log10(P_signal / P_noise) = snr_db`.
pub fn add_noise(w: &Waveform, snr: Snr, seed: u64) -> Result<Waveform> {
    let db = match snr {
        Snr::Clean => return Ok(w.clone()),
        Snr::Db(db) if db == f64::INFINITY => return Ok(w.clone()),
        Snr::Db(db) if !db.is_finite() => {
            return Err(Error::Invalid(format!(
                "SNR must be finite or clean, got {db}"
            )))
        }
        Snr::Db(db) => db,
    };
    let signal = mean_power(w.samples());
    if signal == 0.0 {
        return Err(Error::Numerical(
            "signal has zero power; SNR is undefined".into(),
        ));
    }
    let noise = gaussian_noise(w.len(), signal / 10f64.powf(db / 10.0), seed);
    Waveform::clamped(
        w.samples()
            .iter()
            .zip(noise)
            .map(|(&s, n)| f64::from(s) + n),
        w.sample_rate(),
    )
}

/// Scales by `10^(gain_db / 20)`.
pub fn apply_gain(w: &Waveform, gain_db: f64) -> Result<Waveform> {
    if gain_db == 0.0 {
        return Ok(w.clone());
    }
    let factor = 10f64.powf(gain_db / 20.0);
    Waveform::clamped(
        w.samples().iter().map(|&s| f64::from(s) * factor),
        w.sample_rate(),
    )
}

/// Positive shifts delay the signal (zeros at the head), negative shifts
/// advance it (zeros at the tail). Length is preserved.
pub fn time_shift(w: &Waveform, shift_samples: i64) -> Result<Waveform> {
    let len = w.len();
    let magnitude = shift_samples.unsigned_abs() as usize;
    if magnitude > len {
        return Err(Error::Invalid(format!(
            "shift of {shift_samples} samples exceeds length {len}"
        )));
    }
    let src = w.samples();
    let mut out = vec![0.0f32; len];
    if shift_samples >= 0 {
        out[magnitude..].copy_from_slice(&src[..len - magnitude]);
    } else {
        out[..len - magnitude].copy_from_slice(&src[magnitude..]);
    }
    Waveform::new(out, w.sample_rate())
}

/// A full augmentation recipe, applied as gain, then shift, then noise.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct AugmentationPlan {
    pub gain_db: f64,
    pub shift_samples: i64,
    pub snr: Snr,
    pub seed: u64,
}

impl AugmentationPlan {
    pub fn apply(&self, w: &Waveform) -> Result<Waveform> {
        let w = apply_gain(w, self.gain_db)?;
        let w = time_shift(&w, self.shift_samples)?;
        add_noise(&w, self.snr, self.seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wave(samples: &[f32]) -> Waveform {
        Waveform::new(samples.to_vec(), 16_000).unwrap()
    }

    #[test]
    fn gain_examples() {
        let w = wave(&[0.8, -0.25]);
        assert_eq!(apply_gain(&w, 0.0).unwrap(), w);
        let half = apply_gain(&w, -6.0206).unwrap();
        assert!((half.samples()[0] - 0.4).abs() < 1e-6);
        let loud = apply_gain(&wave(&[0.5, -0.5]), 40.0).unwrap();
        assert_eq!(loud.samples(), [1.0, -1.0]);
    }

    #[test]
    fn shift_examples() {
        let w = wave(&[0.1, 0.2, 0.3, 0.4]);
        assert_eq!(time_shift(&w, 0).unwrap(), w);
        assert_eq!(time_shift(&w, 2).unwrap().samples(), [0.0, 0.0, 0.1, 0.2]);
        assert_eq!(time_shift(&w, -1).unwrap().samples(), [0.2, 0.3, 0.4, 0.0]);
        assert_eq!(time_shift(&w, 4).unwrap().samples(), [0.0; 4]);
        assert!(time_shift(&w, 5).is_err());
        assert!(time_shift(&w, -5).is_err());
    }

    #[test]
    fn clean_noise_is_identity_and_seed_is_reproducible() {
        let w = wave(&[0.1, -0.2, 0.3, 0.05]);
        assert_eq!(add_noise(&w, Snr::Clean, 1).unwrap(), w);
        assert_eq!(add_noise(&w, Snr::Db(f64::INFINITY), 1).unwrap(), w);
        let a = add_noise(&w, Snr::Db(10.0), 5).unwrap();
        let b = add_noise(&w, Snr::Db(10.0), 5).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, add_noise(&w, Snr::Db(10.0), 6).unwrap());
    }

    #[test]
    fn silent_input_has_undefined_snr() {
        let w = wave(&[0.0; 8]);
        assert!(matches!(
            add_noise(&w, Snr::Db(0.0), 1),
            Err(Error::Numerical(_))
        ));
    }

    #[test]
    fn snr_parsing() {
        assert_eq!("clean".parse::<Snr>().unwrap(), Snr::Clean);
        assert_eq!("inf".parse::<Snr>().unwrap(), Snr::Clean);
        assert_eq!("-3.5".parse::<Snr>().unwrap(), Snr::Db(-3.5));
        assert!("loud".parse::<Snr>().is_err());
    }

    #[test]
    fn noise_power_matches_request_at_zero_db() {
        // Unit-power target: noise generated for a unit-power signal at 0 dB.
        let noise = gaussian_noise(16_000, 1.0, 42);
        let power = noise.iter().map(|n| n * n).sum::<f64>() / noise.len() as f64;
        assert!((power - 1.0).abs() < 0.05, "{power}");
    }
}
