//! Landmark data model: points, frames, sequences and face partitions.
//!
//! Sequences store coordinates normalized to the source image (`x / width`,
//! `y / height`) together with the source dimensions. Geometry that needs
//! to be resolution-aware (transform fitting, rasterization) works on pixel
//! frames obtained through [`to_pixel`].

mod canonical;
mod export;
mod partition;

pub use canonical::{read_canonical, write_canonical, CANONICAL_FORMAT, FORMAT_VERSION};
pub use export::{parse_mediapipe_export, read_landmarks, ParsedExport};
pub use partition::{validate_partition, FacePartition, Finding, Part, ValidationReport};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Number of points in the default face-mesh topology (468 mesh + 10 iris).
pub const FACE_MESH_TOPOLOGY: usize = 478;

/// A planar point. Used both for normalized and pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<[f64; 2]> for Point2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Self { x, y }
    }
}

/// Landmarks of a single video frame.
#[derive(Debug, Clone, PartialEq)]
pub struct LandmarkFrame {
    pub points: Vec<Point2>,
    pub timestamp_ms: Option<i64>,
}

impl LandmarkFrame {
    pub fn new(points: Vec<Point2>) -> Self {
        Self {
            points,
            timestamp_ms: None,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// A validated stream of landmark frames sharing one topology.
#[derive(Debug, Clone, PartialEq)]
pub struct LandmarkSequence {
    frames: Vec<LandmarkFrame>,
    fps: f64,
    width: u32,
    height: u32,
    topology_size: usize,
}

impl LandmarkSequence {
    /// Builds a sequence, checking that every frame has `topology_size`
    /// finite points and that fps and dimensions are positive.
    pub fn new(
        frames: Vec<LandmarkFrame>,
        fps: f64,
        width: u32,
        height: u32,
        topology_size: usize,
    ) -> Result<Self> {
        if !(fps.is_finite() && fps > 0.0) {
            return Err(Error::Invalid(format!("fps must be positive, got {fps}")));
        }
        if width == 0 || height == 0 {
            return Err(Error::Invalid(format!(
                "source dimensions must be at least 1x1, got {width}x{height}"
            )));
        }
        if topology_size == 0 {
            return Err(Error::Invalid("topology_size must be positive".into()));
        }
        if frames.is_empty() {
            return Err(Error::Invalid("no frames".into()));
        }
        for (idx, frame) in frames.iter().enumerate() {
            if frame.len() != topology_size {
                return Err(Error::ParseAt {
                    frame: idx + 1,
                    message: format!("expected {topology_size} points, found {}", frame.len()),
                });
            }
            if let Some(p) = frame.points.iter().position(|p| !p.is_finite()) {
                return Err(Error::ParseAt {
                    frame: idx + 1,
                    message: format!("point {p}: non-finite coordinate"),
                });
            }
        }
        Ok(Self {
            frames,
            fps,
            width,
            height,
            topology_size,
        })
    }

    pub fn frames(&self) -> &[LandmarkFrame] {
        &self.frames
    }

    pub fn frame(&self, idx: usize) -> Option<&LandmarkFrame> {
        self.frames.get(idx)
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn fps(&self) -> f64 {
        self.fps
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn topology_size(&self) -> usize {
        self.topology_size
    }

    pub fn into_frames(self) -> Vec<LandmarkFrame> {
        self.frames
    }
}

/// Scales a normalized frame to pixel coordinates.
pub fn to_pixel(frame: &LandmarkFrame, width: u32, height: u32) -> Vec<Point2> {
    let (w, h) = (f64::from(width), f64::from(height));
    frame
        .points
        .iter()
        .map(|p| Point2::new(p.x * w, p.y * h))
        .collect()
}

/// Inverse of [`to_pixel`].
pub fn to_normalized(points: &[Point2], width: u32, height: u32) -> LandmarkFrame {
    let (w, h) = (f64::from(width), f64::from(height));
    LandmarkFrame::new(
        points
            .iter()
            .map(|p| Point2::new(p.x / w, p.y / h))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn to_pixel_scales_by_dimensions() {
        let frame = LandmarkFrame::new(vec![
            Point2::new(0.5, 0.5),
            Point2::new(0.0, 0.0),
            Point2::new(0.25, 0.75),
        ]);
        assert_eq!(to_pixel(&frame, 512, 512)[0], Point2::new(256.0, 256.0));
        assert_eq!(to_pixel(&frame, 37, 11)[1], Point2::new(0.0, 0.0));
        assert_eq!(to_pixel(&frame, 640, 480)[2], Point2::new(160.0, 360.0));
    }

    #[test]
    fn sequence_rejects_bad_header() {
        let frame = LandmarkFrame::new(vec![Point2::new(0.1, 0.2)]);
        assert!(LandmarkSequence::new(vec![frame.clone()], 0.0, 10, 10, 1).is_err());
        assert!(LandmarkSequence::new(vec![frame.clone()], 25.0, 0, 10, 1).is_err());
        assert!(LandmarkSequence::new(vec![], 25.0, 10, 10, 1).is_err());
        assert!(LandmarkSequence::new(vec![frame], 25.0, 10, 10, 2).is_err());
    }
}
