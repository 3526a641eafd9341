//! Part-aware motion synchronization.
//!
//! A driving landmark stream is aligned to a reference face in two steps.
//! A least-squares similarity transform is fitted between the anchor
//! driving frame and the reference over all landmarks. Each facial part
//! then gets its own similarity fit, stored as a residual `ΔM_p = M_p −
//! M_full` (entrywise on the 2×3 matrices). Every driving frame is mapped
//! with `M_full + ΔM_p` for the part each landmark belongs to.
//!
//! Because residuals are entrywise differences of fits that compose with
//! any similarity applied to the driving data, the output is invariant to
//! a global similarity of the driving sequence.

use crate::error::{Error, Result};
use crate::landmarks::{
    to_normalized, to_pixel, FacePartition, LandmarkFrame, LandmarkSequence, Point2,
};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet};
use std::ops::{Add, Sub};

/// Relative tolerance under which a part is considered already aligned by
/// the full-face transform; such parts get an exactly zero residual.
const EXACT_FIT_TOL: f64 = 1e-9;

/// A 2×3 planar transform `[[a, b, tx], [c, d, ty]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 6]", try_from = "[f64; 6]")]
pub struct AffineTransform {
    pub m: [[f64; 3]; 2],
}

impl AffineTransform {
    pub const IDENTITY: Self = Self {
        m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
    };
    pub const ZERO: Self = Self { m: [[0.0; 3]; 2] };

    pub fn new(m: [[f64; 3]; 2]) -> Result<Self> {
        if m.iter().flatten().all(|v| v.is_finite()) {
            Ok(Self { m })
        } else {
            Err(Error::Numerical(format!(
                "non-finite transform entry in {m:?}"
            )))
        }
    }

    /// Similarity with scale `s`, rotation `theta` (radians) and translation.
    pub fn similarity(scale: f64, theta: f64, tx: f64, ty: f64) -> Self {
        let (sin, cos) = theta.sin_cos();
        let (p, q) = (scale * cos, scale * sin);
        Self {
            m: [[p, -q, tx], [q, p, ty]],
        }
    }

    pub fn translation(tx: f64, ty: f64) -> Self {
        Self {
            m: [[1.0, 0.0, tx], [0.0, 1.0, ty]],
        }
    }

    #[inline]
    pub fn apply(&self, p: Point2) -> Point2 {
        let [[a, b, tx], [c, d, ty]] = self.m;
        Point2::new(a * p.x + b * p.y + tx, c * p.x + d * p.y + ty)
    }

    /// Composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Self {
        let [[a, b, tx], [c, d, ty]] = self.m;
        let [[e, f, ux], [g, h, uy]] = other.m;
        Self {
            m: [
                [a * e + b * g, a * f + b * h, a * ux + b * uy + tx],
                [c * e + d * g, c * f + d * h, c * ux + d * uy + ty],
            ],
        }
    }

    /// Inverse of the affine map, if its linear block is invertible.
    pub fn inverse(&self) -> Result<Self> {
        let [[a, b, tx], [c, d, ty]] = self.m;
        let det = a * d - b * c;
        if det == 0.0 || !det.is_finite() {
            return Err(Error::Degenerate("transform is not invertible".into()));
        }
        let (ia, ib, ic, id) = (d / det, -b / det, -c / det, a / det);
        Self::new([
            [ia, ib, -(ia * tx + ib * ty)],
            [ic, id, -(ic * tx + id * ty)],
        ])
    }

    pub fn to_array(&self) -> [f64; 6] {
        let [[a, b, tx], [c, d, ty]] = self.m;
        [a, b, tx, c, d, ty]
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other)
            .m
            .iter()
            .flatten()
            .fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

impl From<AffineTransform> for [f64; 6] {
    fn from(t: AffineTransform) -> Self {
        t.to_array()
    }
}

impl TryFrom<[f64; 6]> for AffineTransform {
    type Error = Error;

    fn try_from([a, b, tx, c, d, ty]: [f64; 6]) -> Result<Self> {
        Self::new([[a, b, tx], [c, d, ty]])
    }
}

impl Add for AffineTransform {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let mut m = self.m;
        for (row, r) in m.iter_mut().zip(rhs.m) {
            for (v, w) in row.iter_mut().zip(r) {
                *v += w;
            }
        }
        Self { m }
    }
}

impl Sub for AffineTransform {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        let mut m = self.m;
        for (row, r) in m.iter_mut().zip(rhs.m) {
            for (v, w) in row.iter_mut().zip(r) {
                *v -= w;
            }
        }
        Self { m }
    }
}

/// Applies `t` to every point of a pixel-space frame.
pub fn apply_transform(t: &AffineTransform, frame: &[Point2]) -> Vec<Point2> {
    frame.iter().map(|&p| t.apply(p)).collect()
}

fn centroid(points: &[Point2]) -> Point2 {
    let n = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(sx, sy), p| (sx + p.x, sy + p.y));
    Point2::new(sx / n, sy / n)
}

fn distinct_points(points: &[Point2]) -> usize {
    points
        .iter()
        .map(|p| (p.x.to_bits(), p.y.to_bits()))
        .collect::<HashSet<_>>()
        .len()
}

/// Least-squares similarity (uniform scale, rotation, translation) mapping
/// `src` onto `dst`, in closed form.
///
/// With centered coordinates the optimal linear block is `[[p, −q], [q, p]]`
/// where `p = Σ(x·x' + y·y') / Σ|x|²` and `q = Σ(x·y' − y·x') / Σ|x|²`;
/// the translation then maps the source centroid onto the target centroid.
pub fn estimate_similarity(src: &[Point2], dst: &[Point2]) -> Result<AffineTransform> {
    if src.len() != dst.len() {
        return Err(Error::Shape {
            expected: format!("{} target points", src.len()),
            got: dst.len().to_string(),
        });
    }
    if src.len() < 2 {
        return Err(Error::Degenerate(format!(
            "similarity fit needs at least 2 points, got {}",
            src.len()
        )));
    }
    let cs = centroid(src);
    let cd = centroid(dst);
    let (mut dot, mut cross, mut var) = (0.0, 0.0, 0.0);
    for (s, d) in src.iter().zip(dst) {
        let (sx, sy) = (s.x - cs.x, s.y - cs.y);
        let (dx, dy) = (d.x - cd.x, d.y - cd.y);
        dot += sx * dx + sy * dy;
        cross += sx * dy - sy * dx;
        var += sx * sx + sy * sy;
    }
    if var == 0.0 {
        return Err(Error::Degenerate(
            "all source points coincide; scale is undefined".into(),
        ));
    }
    let p = dot / var;
    let q = cross / var;
    AffineTransform::new([
        [p, -q, cd.x - (p * cs.x - q * cs.y)],
        [q, p, cd.y - (q * cs.x + p * cs.y)],
    ])
}

/// How per-part transforms are fitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartFit {
    /// Always fit a similarity; parts with fewer than 2 distinct anchor
    /// points are an error.
    Similarity,
    /// Fit a similarity when the part has at least this many distinct
    /// anchor points, otherwise a translation-only residual.
    TranslationFallback(usize),
}

impl Default for PartFit {
    fn default() -> Self {
        PartFit::TranslationFallback(2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RetargetMode {
    /// Full-face transform only; parts are not matched individually.
    FullFaceOnly,
    #[default]
    PartAware,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct RetargetOptions {
    pub anchor_index: usize,
    pub mode: RetargetMode,
    pub part_fit: PartFit,
}

/// Full-face transform plus per-part residuals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualSet {
    pub full: AffineTransform,
    pub residuals: BTreeMap<String, AffineTransform>,
    pub anchor_index: usize,
}

impl ResidualSet {
    /// Final transform for a part (`full + ΔM`), or the full transform for
    /// unpartitioned landmarks.
    pub fn transform_for(&self, part: Option<&str>) -> AffineTransform {
        match part.and_then(|p| self.residuals.get(p)) {
            Some(delta) => self.full + *delta,
            None => self.full,
        }
    }

    /// Diagnostics document `{full: [6], residuals: {part: [6]}, anchor_index}`.
    pub fn to_json(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("residual set is serializable");
        out.push(b'\n');
        out
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        serde_json::from_slice(bytes).map_err(|e| Error::Parse(format!("residual set: {e}")))
    }
}

/// Fits per-part residuals relative to `full` between two pixel frames.
pub fn estimate_residuals(
    anchor: &[Point2],
    reference: &[Point2],
    partition: &FacePartition,
    full: AffineTransform,
    part_fit: PartFit,
) -> Result<ResidualSet> {
    if anchor.len() != reference.len() {
        return Err(Error::Shape {
            expected: format!("reference with {} points", anchor.len()),
            got: reference.len().to_string(),
        });
    }
    partition.ensure_valid(anchor.len())?;

    let mut residuals = BTreeMap::new();
    for (name, part) in &partition.parts {
        if part.indices.is_empty() {
            log::warn!("part {name:?} has no landmarks; residual set to zero");
            residuals.insert(name.clone(), AffineTransform::ZERO);
            continue;
        }
        let src: Vec<Point2> = part.indices.iter().map(|&i| anchor[i]).collect();
        let dst: Vec<Point2> = part.indices.iter().map(|&i| reference[i]).collect();

        if already_aligned(&full, &src, &dst) {
            residuals.insert(name.clone(), AffineTransform::ZERO);
            continue;
        }

        let use_similarity = match part_fit {
            PartFit::Similarity => true,
            PartFit::TranslationFallback(min) => distinct_points(&src) >= min.max(2),
        };
        let delta = if use_similarity {
            let fitted = estimate_similarity(&src, &dst)
                .map_err(|e| Error::Degenerate(format!("part {name:?}: {e}")))?;
            fitted - full
        } else {
            let shift = centroid(&dst);
            let mapped = full.apply(centroid(&src));
            AffineTransform {
                m: [
                    [0.0, 0.0, shift.x - mapped.x],
                    [0.0, 0.0, shift.y - mapped.y],
                ],
            }
        };
        residuals.insert(name.clone(), delta);
    }
    Ok(ResidualSet {
        full,
        residuals,
        anchor_index: 0,
    })
}

fn already_aligned(full: &AffineTransform, src: &[Point2], dst: &[Point2]) -> bool {
    let mut magnitude = 1.0f64;
    let mut worst = 0.0f64;
    for (s, d) in src.iter().zip(dst) {
        let m = full.apply(*s);
        magnitude = magnitude.max(d.x.abs()).max(d.y.abs());
        worst = worst.max((m.x - d.x).abs()).max((m.y - d.y).abs());
    }
    worst <= EXACT_FIT_TOL * magnitude
}

/// Reference face: one landmark frame plus its image dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceFace {
    pub frame: LandmarkFrame,
    pub width: u32,
    pub height: u32,
}

impl ReferenceFace {
    pub fn new(frame: LandmarkFrame, width: u32, height: u32) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Invalid(format!(
                "reference dimensions must be at least 1x1, got {width}x{height}"
            )));
        }
        Ok(Self {
            frame,
            width,
            height,
        })
    }

    /// Takes frame `idx` of a sequence as the reference.
    pub fn from_sequence(seq: &LandmarkSequence, idx: usize) -> Result<Self> {
        let frame = seq.frame(idx).ok_or_else(|| {
            Error::Invalid(format!(
                "reference frame {idx} out of range for {} frames",
                seq.len()
            ))
        })?;
        Self::new(frame.clone(), seq.width(), seq.height())
    }
}

/// Output of [`retarget_sequence`].
#[derive(Debug, Clone, PartialEq)]
pub struct Retargeted {
    pub sequence: LandmarkSequence,
    pub transforms: ResidualSet,
}

/// Retargets a driving sequence onto a reference face.
///
/// Transforms are estimated once, at `opts.anchor_index`, in pixel space.
/// The output is normalized by the reference dimensions and keeps the
/// driving fps and timestamps.
pub fn retarget_sequence(
    driving: &LandmarkSequence,
    reference: &ReferenceFace,
    partition: &FacePartition,
    opts: &RetargetOptions,
) -> Result<Retargeted> {
    let topology = driving.topology_size();
    if reference.frame.len() != topology {
        return Err(Error::Shape {
            expected: format!("reference with {topology} points"),
            got: reference.frame.len().to_string(),
        });
    }
    let anchor_frame = driving.frame(opts.anchor_index).ok_or_else(|| {
        Error::Invalid(format!(
            "anchor index {} out of range for {} frames",
            opts.anchor_index,
            driving.len()
        ))
    })?;
    partition.ensure_valid(topology)?;

    let (dw, dh) = (driving.width(), driving.height());
    let anchor = to_pixel(anchor_frame, dw, dh);
    let target = to_pixel(&reference.frame, reference.width, reference.height);

    let full = estimate_similarity(&anchor, &target)?;
    let mut transforms = match opts.mode {
        RetargetMode::FullFaceOnly => ResidualSet {
            full,
            residuals: BTreeMap::new(),
            anchor_index: 0,
        },
        RetargetMode::PartAware => {
            estimate_residuals(&anchor, &target, partition, full, opts.part_fit)?
        }
    };
    transforms.anchor_index = opts.anchor_index;

    let assignment = partition.assignment(topology);
    let per_landmark: Vec<AffineTransform> = assignment
        .iter()
        .map(|part| transforms.transform_for(*part))
        .collect();

    let frames = driving
        .frames()
        .iter()
        .map(|frame| {
            let px = to_pixel(frame, dw, dh);
            let mapped: Vec<Point2> = px
                .iter()
                .zip(&per_landmark)
                .map(|(p, t)| t.apply(*p))
                .collect();
            let mut out = to_normalized(&mapped, reference.width, reference.height);
            out.timestamp_ms = frame.timestamp_ms;
            out
        })
        .collect();

    let sequence = LandmarkSequence::new(
        frames,
        driving.fps(),
        reference.width,
        reference.height,
        topology,
    )
    .map_err(|e| Error::Numerical(format!("retargeted sequence: {e}")))?;
    Ok(Retargeted {
        sequence,
        transforms,
    })
}
