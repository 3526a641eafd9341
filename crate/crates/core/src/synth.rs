//! Deterministic synthetic faces for demos and tests.
//!
//! Parts are laid out where they sit on a frontal face; unpartitioned
//! landmarks are scattered over the face oval. Sequences add a small head
//! motion and a periodic mouth opening on top of one base face.

use crate::error::Result;
use crate::landmarks::{FacePartition, LandmarkFrame, LandmarkSequence, Point2};
use crate::motion::AffineTransform;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `(center x, center y, half-width, half-height)` per known part name.
fn part_layout(name: &str) -> Option<(f64, f64, f64, f64)> {
    Some(match name {
        "eyebrows" => (0.5, 0.36, 0.22, 0.03),
        "eyes" => (0.5, 0.43, 0.20, 0.03),
        "pupils" => (0.5, 0.43, 0.14, 0.012),
        "nose" => (0.5, 0.55, 0.06, 0.08),
        "mouth" => (0.5, 0.70, 0.10, 0.035),
        _ => return None,
    })
}

fn sample_in_ellipse(rng: &mut ChaCha8Rng, (cx, cy, rx, ry): (f64, f64, f64, f64)) -> Point2 {
    let angle = rng.random_range(0.0..std::f64::consts::TAU);
    let radius = rng.random::<f64>().sqrt();
    Point2::new(
        cx + rx * radius * angle.cos(),
        cy + ry * radius * angle.sin(),
    )
}

/// A plausible normalized face of `topology_size` points.
pub fn synthetic_face(partition: &FacePartition, topology_size: usize, seed: u64) -> LandmarkFrame {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<Point2> = (0..topology_size)
        .map(|_| sample_in_ellipse(&mut rng, (0.5, 0.55, 0.3, 0.38)))
        .collect();
    for (name, part) in &partition.parts {
        let layout = part_layout(name).unwrap_or_else(|| {
            let cx = rng.random_range(0.35..0.65);
            let cy = rng.random_range(0.35..0.75);
            (cx, cy, 0.05, 0.03)
        });
        for &i in &part.indices {
            if i < topology_size {
                points[i] = sample_in_ellipse(&mut rng, layout);
            }
        }
    }
    LandmarkFrame::new(points)
}

/// A talking-head-like sequence: slow head sway plus mouth opening.
pub fn synthetic_sequence(
    partition: &FacePartition,
    topology_size: usize,
    frames: usize,
    fps: f64,
    (width, height): (u32, u32),
    seed: u64,
) -> Result<LandmarkSequence> {
    let base = synthetic_face(partition, topology_size, seed);
    let mouth = partition
        .get("mouth")
        .map(|p| p.indices.clone())
        .unwrap_or_default();
    let mouth_center = if mouth.is_empty() {
        None
    } else {
        let n = mouth.len() as f64;
        let (sx, sy) = mouth.iter().fold((0.0, 0.0), |(x, y), &i| {
            (x + base.points[i].x, y + base.points[i].y)
        });
        Some(Point2::new(sx / n, sy / n))
    };
    let (w, h) = (f64::from(width), f64::from(height));

    let out = (0..frames)
        .map(|t| {
            let phase = t as f64 / fps;
            let open = 1.0 + 0.35 * (phase * 6.0).sin().abs();
            let head = AffineTransform::similarity(
                1.0 + 0.03 * (phase * 0.7).sin(),
                0.06 * (phase * 1.3).sin(),
                8.0 * (phase * 0.9).sin(),
                5.0 * (phase * 1.1).cos(),
            );
            // Rotate about the image center, in pixels.
            let to_center = AffineTransform::translation(-w / 2.0, -h / 2.0);
            let back = AffineTransform::translation(w / 2.0, h / 2.0);
            let head = back.compose(&head).compose(&to_center);

            let mut points = base.points.clone();
            if let Some(c) = mouth_center {
                for &i in &mouth {
                    points[i].y = c.y + (points[i].y - c.y) * open;
                }
            }
            let mut frame = LandmarkFrame::new(
                points
                    .iter()
                    .map(|p| {
                        let q = head.apply(Point2::new(p.x * w, p.y * h));
                        Point2::new(q.x / w, q.y / h)
                    })
                    .collect(),
            );
            frame.timestamp_ms = Some((t as f64 * 1000.0 / fps).round() as i64);
            frame
        })
        .collect();
    LandmarkSequence::new(out, fps, width, height, topology_size)
}
