//! Loss composition for training with a timestep-aware spatial loss.
//!
//! The objective is `L_latent + λ·L_spatial`, where the spatial term
//! `w(t)·(MSE + perceptual)` is computed on decoded images and weighted by
//! `w(t) = cos(t·π / 2T)`. The perceptual distance is supplied by the
//! caller; this module only composes the terms.

use crate::error::{Error, Result};
use crate::float_image::FloatImage;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// `cos(t·π / (2T))` for `0 ≤ t ≤ T`.
pub fn timestep_weight(t: u64, total: u64) -> Result<f64> {
    if total == 0 {
        return Err(Error::Invalid(
            "total timestep count must be positive".into(),
        ));
    }
    if t > total {
        return Err(Error::Invalid(format!("timestep {t} outside [0, {total}]")));
    }
    Ok((t as f64 * PI / (2.0 * total as f64)).cos())
}

/// The full weight schedule `w(0), …, w(T)`.
pub fn weight_schedule(total: u64) -> Result<Vec<f64>> {
    (0..=total).map(|t| timestep_weight(t, total)).collect()
}

/// Mean squared difference over all `H·W·C` samples.
pub fn pixel_mse(a: &FloatImage, b: &FloatImage) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::Shape {
            expected: format!("{:?}", a.shape()),
            got: format!("{:?}", b.shape()),
        });
    }
    let n = a.data().len();
    if n == 0 {
        return Ok(0.0);
    }
    let sum: f64 = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok(sum / n as f64)
}

fn non_negative(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::Invalid(format!(
            "{name} must be finite and non-negative, got {v}"
        )))
    }
}

/// `w(t)·(mse + perceptual)`.
pub fn spatial_loss(t: u64, total: u64, mse: f64, perceptual: f64) -> Result<f64> {
    non_negative("mse", mse)?;
    non_negative("perceptual loss", perceptual)?;
    Ok(timestep_weight(t, total)? * (mse + perceptual))
}

/// `l_latent + lambda·l_spatial`.
pub fn total_objective(l_latent: f64, l_spatial: f64, lambda: f64) -> Result<f64> {
    for (name, v) in [
        ("l_latent", l_latent),
        ("l_spatial", l_spatial),
        ("lambda", lambda),
    ] {
        if !v.is_finite() {
            return Err(Error::Invalid(format!("{name} must be finite, got {v}")));
        }
    }
    Ok(l_latent + lambda * l_spatial)
}

/// All loss terms for one training step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossBreakdown {
    pub l_latent: f64,
    pub mse: f64,
    pub perceptual: f64,
    pub t: u64,
    pub total_steps: u64,
    pub lambda: f64,
}

impl LossBreakdown {
    pub fn new(l_latent: f64, mse: f64, perceptual: f64, t: u64, total_steps: u64) -> Self {
        Self {
            l_latent,
            mse,
            perceptual,
            t,
            total_steps,
            lambda: 1.0,
        }
    }

    pub fn spatial(&self) -> Result<f64> {
        spatial_loss(self.t, self.total_steps, self.mse, self.perceptual)
    }

    pub fn objective(&self) -> Result<f64> {
        non_negative("l_latent", self.l_latent)?;
        non_negative("lambda", self.lambda)?;
        total_objective(self.l_latent, self.spatial()?, self.lambda)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_endpoints() {
        assert_eq!(timestep_weight(0, 1000).unwrap(), 1.0);
        assert!(timestep_weight(1000, 1000).unwrap().abs() < 1e-12);
        let mid = timestep_weight(500, 1000).unwrap();
        assert!((mid - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(timestep_weight(1001, 1000).is_err());
        assert!(timestep_weight(0, 0).is_err());
    }

    #[test]
    fn spatial_examples() {
        assert!((spatial_loss(0, 10, 0.2, 0.3).unwrap() - 0.5).abs() < 1e-15);
        assert!(spatial_loss(10, 10, 3.0, 4.0).unwrap().abs() < 1e-12);
        let half = spatial_loss(5, 10, 1.0, 0.0).unwrap();
        assert!((half - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(spatial_loss(0, 10, -0.1, 0.0).is_err());
    }

    #[test]
    fn objective_examples() {
        assert_eq!(total_objective(0.4, 0.2, 0.0).unwrap(), 0.4);
        assert!((total_objective(0.4, 0.2, 1.0).unwrap() - 0.6).abs() < 1e-15);
        assert!((total_objective(0.4, 0.2, 0.5).unwrap() - 0.5).abs() < 1e-15);
        assert!(total_objective(f64::NAN, 0.2, 0.5).is_err());
    }

    #[test]
    fn mse_examples() {
        let zeros = FloatImage::filled(4, 3, 3, 0.0);
        let ones = FloatImage::filled(4, 3, 3, 1.0);
        assert_eq!(pixel_mse(&zeros, &zeros).unwrap(), 0.0);
        assert_eq!(pixel_mse(&zeros, &ones).unwrap(), 1.0);
        assert!(pixel_mse(&zeros, &FloatImage::filled(3, 4, 3, 0.0)).is_err());
    }

    #[test]
    fn breakdown_combines_terms() {
        let b = LossBreakdown::new(0.1, 0.2, 0.3, 0, 100);
        assert!((b.objective().unwrap() - 0.6).abs() < 1e-15);
        let b = LossBreakdown {
            lambda: 2.0,
            t: 100,
            ..b
        };
        assert!((b.objective().unwrap() - 0.1).abs() < 1e-12);
    }
}
