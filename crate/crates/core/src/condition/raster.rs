//! Rasterization of landmark frames into condition images.
//!
//! Output is byte-exact: discs of `point_radius` around rounded landmark
//! centers and 1-px Bresenham segments for part edges, no anti-aliasing.

use super::mask::{sample_mask, visibility, PartMask, RlsConfig};
use crate::error::{Error, Result};
use crate::landmarks::{FacePartition, LandmarkFrame, LandmarkSequence};
use image::RgbImage;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

pub type Rgb = [u8; 3];

/// Colors for parts missing from the palette, picked by part position.
const FALLBACK_COLORS: [Rgb; 6] = [
    [255, 0, 255],
    [255, 255, 0],
    [128, 0, 255],
    [0, 255, 128],
    [255, 128, 128],
    [128, 128, 255],
];

/// Edges spanning more than this many canvas extents are not drawn.
const MAX_EDGE_SPAN: i64 = 16;

fn default_palette() -> BTreeMap<String, Rgb> {
    [
        ("eyebrows", [255, 165, 0]),
        ("eyes", [0, 255, 0]),
        ("pupils", [0, 255, 255]),
        ("nose", [0, 128, 255]),
        ("mouth", [255, 0, 0]),
    ]
    .into_iter()
    .map(|(n, c)| (n.to_owned(), c))
    .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct RenderOptions {
    pub width: u32,
    pub height: u32,
    pub point_radius: u32,
    pub draw_edges: bool,
    pub palette: BTreeMap<String, Rgb>,
    /// Color of landmarks that belong to no part.
    pub unpartitioned: Rgb,
    pub background: Rgb,
    pub grayscale: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            width: 512,
            height: 512,
            point_radius: 2,
            draw_edges: true,
            palette: default_palette(),
            unpartitioned: [255, 255, 255],
            background: [0, 0, 0],
            grayscale: false,
        }
    }
}

impl RenderOptions {
    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::Invalid(format!(
                "canvas must be at least 1x1, got {}x{}",
                self.width, self.height
            )));
        }
        Ok(())
    }

    fn color(&self, part: Option<(usize, &str)>) -> Rgb {
        let rgb = match part {
            None => self.unpartitioned,
            Some((pos, name)) => self
                .palette
                .get(name)
                .copied()
                .unwrap_or(FALLBACK_COLORS[pos % FALLBACK_COLORS.len()]),
        };
        if self.grayscale {
            let [r, g, b] = rgb.map(f64::from);
            let y = (0.299 * r + 0.587 * g + 0.114 * b).round() as u8;
            [y; 3]
        } else {
            rgb
        }
    }
}

/// Rounds half up to the nearest pixel index.
fn pixel_center(v: f64, extent: u32) -> i64 {
    (v * f64::from(extent) + 0.5).floor() as i64
}

struct Canvas {
    img: RgbImage,
}

impl Canvas {
    fn put(&mut self, x: i64, y: i64, color: Rgb) {
        if x >= 0 && y >= 0 && x < i64::from(self.img.width()) && y < i64::from(self.img.height()) {
            self.img.put_pixel(x as u32, y as u32, image::Rgb(color));
        }
    }

    fn disc(&mut self, cx: i64, cy: i64, radius: u32, color: Rgb) {
        let r = i64::from(radius);
        for dy in -r..=r {
            for dx in -r..=r {
                if dx * dx + dy * dy <= r * r {
                    self.put(cx + dx, cy + dy, color);
                }
            }
        }
    }

    fn line(&mut self, (x0, y0): (i64, i64), (x1, y1): (i64, i64), color: Rgb) {
        let dx = (x1 - x0).abs();
        let dy = -(y1 - y0).abs();
        let span = i64::from(self.img.width().max(self.img.height())) * MAX_EDGE_SPAN;
        if dx > span || -dy > span {
            return;
        }
        let sx = if x0 < x1 { 1 } else { -1 };
        let sy = if y0 < y1 { 1 } else { -1 };
        let (mut x, mut y, mut err) = (x0, y0, dx + dy);
        loop {
            self.put(x, y, color);
            if x == x1 && y == y1 {
                break;
            }
            let e2 = 2 * err;
            if e2 >= dy {
                err += dy;
                x += sx;
            }
            if e2 <= dx {
                err += dx;
                y += sy;
            }
        }
    }
}

/// Renders one normalized landmark frame onto a `width × height` canvas.
///
/// Edges are drawn first (parts in name order), then landmark discs in
/// index order. An edge is drawn only when both endpoints are visible.
pub fn rasterize_frame(
    frame: &LandmarkFrame,
    partition: &FacePartition,
    mask: &PartMask,
    opts: &RenderOptions,
) -> Result<RgbImage> {
    opts.validate()?;
    let visible = visibility(partition, mask, frame.len())?;
    let centers: Vec<(i64, i64)> = frame
        .points
        .iter()
        .map(|p| {
            (
                pixel_center(p.x, opts.width),
                pixel_center(p.y, opts.height),
            )
        })
        .collect();

    let mut canvas = Canvas {
        img: RgbImage::from_pixel(opts.width, opts.height, image::Rgb(opts.background)),
    };

    let positions: BTreeMap<&str, usize> =
        partition.names().enumerate().map(|(i, n)| (n, i)).collect();
    if opts.draw_edges {
        for (pos, (name, part)) in partition.parts.iter().enumerate() {
            let color = opts.color(Some((pos, name)));
            for &[a, b] in &part.edges {
                if visible[a] && visible[b] {
                    canvas.line(centers[a], centers[b], color);
                }
            }
        }
    }
    for (i, part) in partition.assignment(frame.len()).into_iter().enumerate() {
        if visible[i] {
            let color = opts.color(part.map(|n| (positions[n], n)));
            canvas.disc(centers[i].0, centers[i].1, opts.point_radius, color);
        }
    }
    Ok(canvas.img)
}

/// Where per-frame masks come from.
#[derive(Debug, Clone)]
pub enum MaskSource {
    Fixed(PartMask),
    /// Random selection. With `cfg.per_clip` every frame uses draw
    /// `clip_id`; otherwise frame `t` uses draw `t`.
    Random {
        cfg: RlsConfig,
        clip_id: u64,
    },
}

#[derive(Debug, Clone)]
pub struct RasterizedSequence {
    pub images: Vec<RgbImage>,
    pub masks: Vec<PartMask>,
}

pub fn rasterize_sequence(
    seq: &LandmarkSequence,
    partition: &FacePartition,
    source: &MaskSource,
    opts: &RenderOptions,
) -> Result<RasterizedSequence> {
    let masks: Vec<PartMask> = match source {
        MaskSource::Fixed(mask) => vec![mask.clone(); seq.len()],
        MaskSource::Random { cfg, clip_id } if cfg.per_clip => {
            vec![sample_mask(partition, cfg, *clip_id)?; seq.len()]
        }
        MaskSource::Random { cfg, .. } => (0..seq.len() as u64)
            .map(|t| sample_mask(partition, cfg, t))
            .collect::<Result<_>>()?,
    };
    let images = seq
        .frames()
        .iter()
        .zip(&masks)
        .map(|(frame, mask)| rasterize_frame(frame, partition, mask, opts))
        .collect::<Result<_>>()?;
    Ok(RasterizedSequence { images, masks })
}

/// File name used for frame `idx` by [`write_frames`].
pub fn frame_file_name(idx: usize) -> String {
    format!("frame_{idx:05}.png")
}

/// Writes images as numbered 8-bit RGB PNG files into `dir`.
pub fn write_frames(dir: &Path, images: &[RgbImage]) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    images
        .iter()
        .enumerate()
        .map(|(i, img)| {
            let path = dir.join(frame_file_name(i));
            img.save_with_format(&path, image::ImageFormat::Png)?;
            Ok(path)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landmarks::{Part, Point2};

    fn single_point_partition() -> FacePartition {
        FacePartition::new(1, [("dot".to_owned(), Part::new([0], vec![]))])
    }

    fn foreground(img: &RgbImage, bg: Rgb) -> Vec<(u32, u32)> {
        img.enumerate_pixels()
            .filter(|(_, _, p)| p.0 != bg)
            .map(|(x, y, _)| (x, y))
            .collect()
    }

    #[test]
    fn radius_zero_point_is_one_pixel() {
        let partition = single_point_partition();
        let frame = LandmarkFrame::new(vec![Point2::new(0.5, 0.5)]);
        let opts = RenderOptions {
            point_radius: 0,
            ..RenderOptions::default()
        };
        let img =
            rasterize_frame(&frame, &partition, &PartMask::all_kept(&partition), &opts).unwrap();
        assert_eq!(foreground(&img, opts.background), [(256, 256)]);
        assert_eq!(img.get_pixel(256, 256).0, FALLBACK_COLORS[0]);
    }

    #[test]
    fn everything_dropped_gives_blank_canvas() {
        let partition = single_point_partition();
        let frame = LandmarkFrame::new(vec![Point2::new(0.5, 0.5)]);
        let opts = RenderOptions::default();
        let img = rasterize_frame(
            &frame,
            &partition,
            &PartMask::all_dropped(&partition),
            &opts,
        )
        .unwrap();
        assert!(foreground(&img, opts.background).is_empty());
    }

    #[test]
    fn off_canvas_points_are_clipped() {
        let partition = FacePartition::new(2, [("p".to_owned(), Part::new([0, 1], vec![[0, 1]]))]);
        let frame = LandmarkFrame::new(vec![Point2::new(-0.2, 0.5), Point2::new(1e12, 0.5)]);
        let opts = RenderOptions {
            width: 16,
            height: 16,
            ..RenderOptions::default()
        };
        let img =
            rasterize_frame(&frame, &partition, &PartMask::all_kept(&partition), &opts).unwrap();
        assert!(foreground(&img, opts.background).is_empty());
    }

    #[test]
    fn bresenham_covers_endpoints_and_is_connected() {
        let mut canvas = Canvas {
            img: RgbImage::new(20, 20),
        };
        canvas.line((2, 3), (15, 9), [9, 9, 9]);
        let px = foreground(&canvas.img, [0, 0, 0]);
        assert!(px.contains(&(2, 3)) && px.contains(&(15, 9)));
        assert_eq!(px.len(), 14);
    }

    #[test]
    fn grayscale_uses_luma() {
        let opts = RenderOptions {
            grayscale: true,
            ..RenderOptions::default()
        };
        assert_eq!(opts.color(Some((0, "mouth"))), [76; 3]);
    }

    #[test]
    fn zero_canvas_is_rejected() {
        let partition = single_point_partition();
        let frame = LandmarkFrame::new(vec![Point2::new(0.5, 0.5)]);
        let opts = RenderOptions {
            width: 0,
            ..RenderOptions::default()
        };
        assert!(
            rasterize_frame(&frame, &partition, &PartMask::all_kept(&partition), &opts).is_err()
        );
    }
}
