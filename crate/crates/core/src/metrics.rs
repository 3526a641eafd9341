//! Image similarity (SSIM) and landmark-space distances.
//!
//! SSIM uses a normalized Gaussian window evaluated at every position where
//! the window fits entirely inside the image (no padding), and reports the
//! mean of the local index map.

use crate::error::{Error, Result};
use crate::float_image::FloatImage;
use crate::landmarks::LandmarkSequence;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SsimParams {
    pub window: usize,
    pub sigma: f64,
    pub k1: f64,
    pub k2: f64,
    pub dynamic_range: f64,
}

impl Default for SsimParams {
    fn default() -> Self {
        Self {
            window: 11,
            sigma: 1.5,
            k1: 0.01,
            k2: 0.03,
            dynamic_range: 1.0,
        }
    }
}

impl SsimParams {
    pub fn validate(&self) -> Result<()> {
        if self.window < 3 || self.window % 2 == 0 {
            return Err(Error::Invalid(format!(
                "SSIM window must be odd and at least 3, got {}",
                self.window
            )));
        }
        if !(self.sigma > 0.0 && self.k1 > 0.0 && self.k2 > 0.0 && self.dynamic_range > 0.0) {
            return Err(Error::Invalid(
                "SSIM sigma, k1, k2 and dynamic range must be positive".into(),
            ));
        }
        Ok(())
    }

    /// One-dimensional Gaussian taps, normalized to sum to 1.
    pub fn kernel(&self) -> Vec<f64> {
        let r = (self.window / 2) as f64;
        let taps: Vec<f64> = (0..self.window)
            .map(|i| {
                let d = i as f64 - r;
                (-(d * d) / (2.0 * self.sigma * self.sigma)).exp()
            })
            .collect();
        let sum: f64 = taps.iter().sum();
        taps.into_iter().map(|v| v / sum).collect()
    }
}

/// Valid-region separable filtering of a `height × width` plane.
fn filter_valid(plane: &[f64], width: usize, height: usize, kernel: &[f64]) -> Vec<f64> {
    let k = kernel.len();
    let ow = width - k + 1;
    let oh = height - k + 1;
    let mut horiz = vec![0.0; height * ow];
    for y in 0..height {
        let row = &plane[y * width..(y + 1) * width];
        for x in 0..ow {
            horiz[y * ow + x] = kernel.iter().zip(&row[x..x + k]).map(|(w, v)| w * v).sum();
        }
    }
    let mut out = vec![0.0; oh * ow];
    for y in 0..oh {
        for x in 0..ow {
            out[y * ow + x] = kernel
                .iter()
                .enumerate()
                .map(|(i, w)| w * horiz[(y + i) * ow + x])
                .sum();
        }
    }
    out
}

/// Mean structural similarity of two images. RGB inputs are compared on
/// their luma.
pub fn ssim(a: &FloatImage, b: &FloatImage, p: &SsimParams) -> Result<f64> {
    p.validate()?;
    if a.shape() != b.shape() {
        return Err(Error::Shape {
            expected: format!("{:?}", a.shape()),
            got: format!("{:?}", b.shape()),
        });
    }
    if a.width() < p.window || a.height() < p.window {
        return Err(Error::Invalid(format!(
            "image {}×{} is smaller than the {}-px SSIM window",
            a.height(),
            a.width(),
            p.window
        )));
    }
    let (a, b) = (a.to_luma()?, b.to_luma()?);
    let (w, h) = (a.width(), a.height());
    let (x, y) = (a.data(), b.data());
    let kernel = p.kernel();

    let xx: Vec<f64> = x.iter().map(|v| v * v).collect();
    let yy: Vec<f64> = y.iter().map(|v| v * v).collect();
    let xy: Vec<f64> = x.iter().zip(y).map(|(u, v)| u * v).collect();

    let mu_x = filter_valid(x, w, h, &kernel);
    let mu_y = filter_valid(y, w, h, &kernel);
    let e_xx = filter_valid(&xx, w, h, &kernel);
    let e_yy = filter_valid(&yy, w, h, &kernel);
    let e_xy = filter_valid(&xy, w, h, &kernel);

    let c1 = (p.k1 * p.dynamic_range).powi(2);
    let c2 = (p.k2 * p.dynamic_range).powi(2);
    let mut sum = 0.0;
    for i in 0..mu_x.len() {
        let (mx, my) = (mu_x[i], mu_y[i]);
        let var_x = e_xx[i] - mx * mx;
        let var_y = e_yy[i] - my * my;
        let cov = e_xy[i] - mx * my;
        sum += ((2.0 * (mx * my) + c1) * (2.0 * cov + c2))
            / ((mx * mx + my * my + c1) * (var_x + var_y + c2));
    }
    Ok(sum / mu_x.len() as f64)
}

/// Per-frame SSIM values and their arithmetic mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SsimReport {
    pub per_frame: Vec<f64>,
    pub mean: f64,
}

pub fn ssim_report(
    frames_a: &[FloatImage],
    frames_b: &[FloatImage],
    p: &SsimParams,
) -> Result<SsimReport> {
    if frames_a.len() != frames_b.len() {
        return Err(Error::Shape {
            expected: format!("{} frames", frames_a.len()),
            got: format!("{} frames", frames_b.len()),
        });
    }
    if frames_a.is_empty() {
        return Err(Error::Invalid("no frames to compare".into()));
    }
    let per_frame = frames_a
        .iter()
        .zip(frames_b)
        .map(|(a, b)| ssim(a, b, p))
        .collect::<Result<Vec<_>>>()?;
    let mean = per_frame.iter().sum::<f64>() / per_frame.len() as f64;
    Ok(SsimReport { per_frame, mean })
}

/// Arithmetic mean of per-frame SSIM over two equal-length sequences.
pub fn mean_ssim_sequence(
    frames_a: &[FloatImage],
    frames_b: &[FloatImage],
    p: &SsimParams,
) -> Result<f64> {
    ssim_report(frames_a, frames_b, p).map(|r| r.mean)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoordinateSpace {
    #[default]
    Normalized,
    /// Each sequence scaled by its own source dimensions.
    Pixel,
}

/// Root mean squared Euclidean distance over all (frame, landmark) pairs.
pub fn landmark_rmse(
    a: &LandmarkSequence,
    b: &LandmarkSequence,
    space: CoordinateSpace,
) -> Result<f64> {
    if a.len() != b.len() || a.topology_size() != b.topology_size() {
        return Err(Error::Shape {
            expected: format!("{} frames × {} points", a.len(), a.topology_size()),
            got: format!("{} frames × {} points", b.len(), b.topology_size()),
        });
    }
    let scale = |s: &LandmarkSequence| match space {
        CoordinateSpace::Normalized => (1.0, 1.0),
        CoordinateSpace::Pixel => (f64::from(s.width()), f64::from(s.height())),
    };
    let (sax, say) = scale(a);
    let (sbx, sby) = scale(b);
    let mut sum = 0.0;
    let mut count = 0usize;
    for (fa, fb) in a.frames().iter().zip(b.frames()) {
        for (pa, pb) in fa.points.iter().zip(&fb.points) {
            let dx = pa.x * sax - pb.x * sbx;
            let dy = pa.y * say - pb.y * sby;
            sum += dx * dx + dy * dy;
            count += 1;
        }
    }
    Ok((sum / count as f64).sqrt())
}
