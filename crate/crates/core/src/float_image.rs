use crate::error::{Error, Result};
use image::RgbImage;

/// Interleaved `H × W × C` image with real-valued samples, nominally in
/// `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatImage {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<f64>,
}

impl FloatImage {
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        if channels == 0 {
            return Err(Error::Invalid("image needs at least one channel".into()));
        }
        let expected = width
            .checked_mul(height)
            .and_then(|v| v.checked_mul(channels));
        if expected != Some(data.len()) {
            return Err(Error::Shape {
                expected: format!("{height}×{width}×{channels}"),
                got: format!("{} values", data.len()),
            });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical("image contains non-finite values".into()));
        }
        Ok(Self {
            width,
            height,
            channels,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, channels: usize, value: f64) -> Self {
        Self::new(
            width,
            height,
            channels,
            vec![value; width * height * channels],
        )
        .expect("filled image has consistent shape")
    }

    /// Converts 8-bit RGB to `[0, 1]` by dividing by 255.
    pub fn from_rgb8(img: &RgbImage) -> Self {
        Self {
            width: img.width() as usize,
            height: img.height() as usize,
            channels: 3,
            data: img.as_raw().iter().map(|&v| f64::from(v) / 255.0).collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize, c: usize) -> f64 {
        self.data[(y * self.width + x) * self.channels + c]
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.height, self.width, self.channels)
    }

    /// Single-channel view: copies grayscale input, converts RGB with
    /// `0.299 R + 0.587 G + 0.114 B`.
    pub fn to_luma(&self) -> Result<Self> {
        match self.channels {
            1 => Ok(self.clone()),
            3 => Ok(Self {
                width: self.width,
                height: self.height,
                channels: 1,
                data: self
                    .data
                    .chunks_exact(3)
                    .map(|p| 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2])
                    .collect(),
            }),
            c => Err(Error::Invalid(format!(
                "cannot convert {c}-channel image to luma"
            ))),
        }
    }
}
