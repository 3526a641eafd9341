//! Flat-array entry points for foreign bindings.
//!
//! Landmarks travel as `n_frames × topology × 2` row-major `f64`, images as
//! `H × W × 3` bytes and features as `n × d` `f32`. Shapes are checked here
//! so that callers get an error naming the expected shape.

use crate::audio::FeatureSequence;
use crate::error::{Error, Result};
use crate::landmarks::{LandmarkFrame, LandmarkSequence, Point2};
use image::RgbImage;

/// Builds a sequence from a flat landmark array with shape
/// `[n_frames, topology, 2]`.
pub fn sequence_from_array(
    data: &[f64],
    shape: [usize; 3],
    fps: f64,
    width: u32,
    height: u32,
) -> Result<LandmarkSequence> {
    let [frames, topology, coords] = shape;
    let expected = format!("({frames}, {topology}, 2)");
    if coords != 2 {
        return Err(Error::Shape {
            expected,
            got: format!("({frames}, {topology}, {coords})"),
        });
    }
    if frames.checked_mul(topology).and_then(|v| v.checked_mul(2)) != Some(data.len()) {
        return Err(Error::Shape {
            expected,
            got: format!("{} values", data.len()),
        });
    }
    let out = data
        .chunks_exact(topology * 2)
        .map(|f| LandmarkFrame::new(f.chunks_exact(2).map(|p| Point2::new(p[0], p[1])).collect()))
        .collect();
    LandmarkSequence::new(out, fps, width, height, topology)
}

/// Flattens a sequence to `[n_frames, topology, 2]`.
pub fn sequence_to_array(seq: &LandmarkSequence) -> (Vec<f64>, [usize; 3]) {
    let data = seq
        .frames()
        .iter()
        .flat_map(|f| f.points.iter().flat_map(|p| [p.x, p.y]))
        .collect();
    (data, [seq.len(), seq.topology_size(), 2])
}

/// Raw `H × W × 3` buffer and its shape.
pub fn image_to_array(img: &RgbImage) -> (Vec<u8>, [usize; 3]) {
    (
        img.as_raw().clone(),
        [img.height() as usize, img.width() as usize, 3],
    )
}

pub fn image_from_array(data: Vec<u8>, shape: [usize; 3]) -> Result<RgbImage> {
    let [h, w, c] = shape;
    let len = data.len();
    let bad = || Error::Shape {
        expected: format!(
            "({h}, {w}, 3) = {} bytes",
            h.saturating_mul(w).saturating_mul(3)
        ),
        got: format!("({h}, {w}, {c}) with {len} bytes"),
    };
    if c != 3 || h.checked_mul(w).and_then(|v| v.checked_mul(3)) != Some(len) {
        return Err(bad());
    }
    let w32 = u32::try_from(w).map_err(|_| bad())?;
    let h32 = u32::try_from(h).map_err(|_| bad())?;
    RgbImage::from_raw(w32, h32, data).ok_or_else(bad)
}

pub fn features_from_array(
    data: &[f32],
    shape: [usize; 2],
    frame_rate: f64,
) -> Result<FeatureSequence> {
    let [n, d] = shape;
    if n.checked_mul(d) != Some(data.len()) {
        return Err(Error::Shape {
            expected: format!("({n}, {d})"),
            got: format!("{} values", data.len()),
        });
    }
    FeatureSequence::new(data.to_vec(), n, d, frame_rate)
}
