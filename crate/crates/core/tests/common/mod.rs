//! Independent reference implementations used as test oracles. None of
//! these call into the code paths they check.

#![allow(dead_code, clippy::needless_range_loop)]

use image::RgbImage;
use mimic::landmarks::{FacePartition, LandmarkFrame, LandmarkSequence, Point2};
use mimic::motion::AffineTransform;
use mimic::FloatImage;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("fixtures")
        .join(name)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_cloud(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point2> {
    (0..n)
        .map(|_| Point2::new(rng.random_range(0.0..512.0), rng.random_range(0.0..512.0)))
        .collect()
}

/// Random similarity with scale in [0.2, 5], angle in [-π, π] and
/// translation in [-100, 100]².
pub fn random_similarity(rng: &mut ChaCha8Rng) -> (f64, f64, f64, f64) {
    (
        rng.random_range(0.2..=5.0),
        rng.random_range(-std::f64::consts::PI..=std::f64::consts::PI),
        rng.random_range(-100.0..=100.0),
        rng.random_range(-100.0..=100.0),
    )
}

/// Similarity matrix built from scalar parameters by hand.
pub fn similarity_matrix((s, theta, tx, ty): (f64, f64, f64, f64)) -> [[f64; 3]; 2] {
    [
        [s * theta.cos(), -s * theta.sin(), tx],
        [s * theta.sin(), s * theta.cos(), ty],
    ]
}

/// Per-coordinate application of a 2×3 matrix.
pub fn apply_naive(m: &[[f64; 3]; 2], p: Point2) -> Point2 {
    let mut out = [0.0; 2];
    for (r, row) in m.iter().enumerate() {
        out[r] = row[0] * p.x;
        out[r] += row[1] * p.y;
        out[r] += row[2];
    }
    Point2::new(out[0], out[1])
}

pub fn cost(m: &[[f64; 3]; 2], src: &[Point2], dst: &[Point2]) -> f64 {
    src.iter()
        .zip(dst)
        .map(|(s, d)| {
            let q = apply_naive(m, *s);
            (q.x - d.x).powi(2) + (q.y - d.y).powi(2)
        })
        .sum()
}

/// Nelder–Mead minimization of the similarity fit cost over
/// `(a, b, tx, ty)` with matrix `[[a, -b, tx], [b, a, ty]]`, restarted until
/// the best value stops improving.
pub fn numeric_similarity_fit(src: &[Point2], dst: &[Point2]) -> ([[f64; 3]; 2], f64) {
    let matrix = |v: &[f64; 4]| [[v[0], -v[1], v[2]], [v[1], v[0], v[3]]];
    let f = |v: &[f64; 4]| cost(&matrix(v), src, dst);

    let mut best = [1.0, 0.0, 0.0, 0.0];
    let mut best_val = f(&best);
    let steps = [0.5, 0.5, 50.0, 50.0];
    for round in 0..60 {
        let scale = 0.5f64.powi(round % 12);
        let (x, v) = nelder_mead(&f, best, steps.map(|s| s * scale), 4000);
        let improved = best_val - v;
        if v < best_val {
            best = x;
            best_val = v;
        }
        if round >= 12 && improved.abs() <= 1e-15 * best_val.max(1e-300) {
            break;
        }
    }
    (matrix(&best), best_val)
}

fn nelder_mead(
    f: &impl Fn(&[f64; 4]) -> f64,
    start: [f64; 4],
    step: [f64; 4],
    iters: usize,
) -> ([f64; 4], f64) {
    let mut simplex: Vec<([f64; 4], f64)> = (0..5)
        .map(|i| {
            let mut x = start;
            if i > 0 {
                x[i - 1] += step[i - 1];
            }
            (x, f(&x))
        })
        .collect();
    for _ in 0..iters {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[4].1 - simplex[0].1;
        if spread <= 1e-16 * simplex[0].1.abs().max(1e-300) {
            break;
        }
        let mut centroid = [0.0; 4];
        for (x, _) in &simplex[..4] {
            for k in 0..4 {
                centroid[k] += x[k] / 4.0;
            }
        }
        let worst = simplex[4].0;
        let along = |t: f64| {
            let mut p = [0.0; 4];
            for k in 0..4 {
                p[k] = centroid[k] + t * (worst[k] - centroid[k]);
            }
            p
        };
        let reflected = along(-1.0);
        let fr = f(&reflected);
        if fr < simplex[0].1 {
            let expanded = along(-2.0);
            let fe = f(&expanded);
            simplex[4] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
        } else if fr < simplex[3].1 {
            simplex[4] = (reflected, fr);
        } else {
            let contracted = if fr < simplex[4].1 {
                along(-0.5)
            } else {
                along(0.5)
            };
            let fc = f(&contracted);
            if fc < simplex[4].1.min(fr) {
                simplex[4] = (contracted, fc);
            } else {
                let best = simplex[0].0;
                for entry in simplex.iter_mut().skip(1) {
                    for k in 0..4 {
                        entry.0[k] = best[k] + 0.5 * (entry.0[k] - best[k]);
                    }
                    entry.1 = f(&entry.0);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex[0]
}

/// SSIM by direct evaluation of each window with a 2-D Gaussian and
/// centered (two-pass) moments.
pub fn naive_ssim(
    a: &FloatImage,
    b: &FloatImage,
    window: usize,
    sigma: f64,
    k1: f64,
    k2: f64,
    range: f64,
) -> f64 {
    let gray = |img: &FloatImage, x: usize, y: usize| {
        if img.channels() == 1 {
            img.get(x, y, 0)
        } else {
            0.299 * img.get(x, y, 0) + 0.587 * img.get(x, y, 1) + 0.114 * img.get(x, y, 2)
        }
    };
    let r = (window / 2) as isize;
    let mut weights = vec![vec![0.0; window]; window];
    let mut total = 0.0;
    for u in 0..window {
        for v in 0..window {
            let du = u as isize - r;
            let dv = v as isize - r;
            let w = (-((du * du + dv * dv) as f64) / (2.0 * sigma * sigma)).exp();
            weights[u][v] = w;
            total += w;
        }
    }
    let c1 = (k1 * range) * (k1 * range);
    let c2 = (k2 * range) * (k2 * range);
    let mut acc = 0.0;
    let mut count = 0usize;
    for y0 in 0..=(a.height() - window) {
        for x0 in 0..=(a.width() - window) {
            let (mut mx, mut my) = (0.0, 0.0);
            for v in 0..window {
                for u in 0..window {
                    let w = weights[v][u] / total;
                    mx += w * gray(a, x0 + u, y0 + v);
                    my += w * gray(b, x0 + u, y0 + v);
                }
            }
            let (mut vx, mut vy, mut cxy) = (0.0, 0.0, 0.0);
            for v in 0..window {
                for u in 0..window {
                    let w = weights[v][u] / total;
                    let dx = gray(a, x0 + u, y0 + v) - mx;
                    let dy = gray(b, x0 + u, y0 + v) - my;
                    vx += w * dx * dx;
                    vy += w * dy * dy;
                    cxy += w * dx * dy;
                }
            }
            acc += ((2.0 * mx * my + c1) * (2.0 * cxy + c2))
                / ((mx * mx + my * my + c1) * (vx + vy + c2));
            count += 1;
        }
    }
    acc / count as f64
}

/// Deterministic 64×64 test image family: smooth pattern plus texture.
pub fn pattern_image(seed: u64, size: usize) -> FloatImage {
    let mut r = rng(seed);
    let fx = r.random_range(0.05..0.4);
    let fy = r.random_range(0.05..0.4);
    let data = (0..size * size)
        .map(|i| {
            let (x, y) = ((i % size) as f64, (i / size) as f64);
            let v = 0.5 + 0.3 * (fx * x).sin() * (fy * y).cos() + 0.1 * r.random_range(-1.0..1.0);
            v.clamp(0.0, 1.0)
        })
        .collect();
    FloatImage::new(size, size, 1, data).unwrap()
}

/// `img + amplitude · uniform(-1, 1)` noise, clamped.
pub fn perturbed(img: &FloatImage, amplitude: f64, seed: u64) -> FloatImage {
    let mut r = rng(seed);
    let data = img
        .data()
        .iter()
        .map(|v| (v + amplitude * r.random_range(-1.0..1.0)).clamp(0.0, 1.0))
        .collect();
    FloatImage::new(img.width(), img.height(), img.channels(), data).unwrap()
}

pub fn foreground(img: &RgbImage, background: [u8; 3]) -> Vec<(i64, i64)> {
    img.enumerate_pixels()
        .filter(|(_, _, p)| p.0 != background)
        .map(|(x, y, _)| (i64::from(x), i64::from(y)))
        .collect()
}

fn distance_to_segment(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    let (cx, cy) = (a.0 + t * dx, a.1 + t * dy);
    ((p.0 - cx).powi(2) + (p.1 - cy).powi(2)).sqrt()
}

/// Foreground pixels not explained by visible geometry: each foreground
/// pixel must lie within `radius + 1` (Chebyshev) of a visible landmark, or
/// within one pixel of an edge whose endpoints are both visible.
pub fn unexplained_pixels(
    img: &RgbImage,
    frame: &LandmarkFrame,
    partition: &FacePartition,
    visible: &[bool],
    radius: u32,
    background: [u8; 3],
) -> Vec<(i64, i64)> {
    let (w, h) = (f64::from(img.width()), f64::from(img.height()));
    let centers: Vec<(f64, f64)> = frame
        .points
        .iter()
        .map(|p| ((p.x * w + 0.5).floor(), (p.y * h + 0.5).floor()))
        .collect();
    let edges: Vec<((f64, f64), (f64, f64))> = partition
        .parts
        .values()
        .flat_map(|part| part.edges.iter())
        .filter(|[a, b]| visible[*a] && visible[*b])
        .map(|&[a, b]| (centers[a], centers[b]))
        .collect();
    let reach = f64::from(radius) + 1.0;
    foreground(img, background)
        .into_iter()
        .filter(|&(x, y)| {
            let p = (x as f64, y as f64);
            let near_point = centers
                .iter()
                .zip(visible)
                .any(|(c, &v)| v && (p.0 - c.0).abs() <= reach && (p.1 - c.1).abs() <= reach);
            let on_edge = edges
                .iter()
                .any(|(a, b)| distance_to_segment(p, *a, *b) <= 1.0);
            !(near_point || on_edge)
        })
        .collect()
}

/// Root-mean-square landmark distance by explicit loops.
pub fn naive_rmse(a: &LandmarkSequence, b: &LandmarkSequence) -> f64 {
    let mut total = 0.0;
    let mut n = 0.0;
    for f in 0..a.len() {
        for i in 0..a.topology_size() {
            let pa = a.frames()[f].points[i];
            let pb = b.frames()[f].points[i];
            total += (pa.x - pb.x) * (pa.x - pb.x) + (pa.y - pb.y) * (pa.y - pb.y);
            n += 1.0;
        }
    }
    (total / n).sqrt()
}

/// Applies a pixel-space transform to every frame of a sequence.
pub fn transform_sequence(seq: &LandmarkSequence, t: &AffineTransform) -> LandmarkSequence {
    let (w, h) = (f64::from(seq.width()), f64::from(seq.height()));
    let frames = seq
        .frames()
        .iter()
        .map(|f| {
            let mut out = LandmarkFrame::new(
                f.points
                    .iter()
                    .map(|p| {
                        let q = apply_naive(&t.m, Point2::new(p.x * w, p.y * h));
                        Point2::new(q.x / w, q.y / h)
                    })
                    .collect(),
            );
            out.timestamp_ms = f.timestamp_ms;
            out
        })
        .collect();
    LandmarkSequence::new(
        frames,
        seq.fps(),
        seq.width(),
        seq.height(),
        seq.topology_size(),
    )
    .unwrap()
}
