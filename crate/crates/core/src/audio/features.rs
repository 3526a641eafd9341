//! Per-frame audio feature matrices and their temporal context windows.
//!
//! Binary layout (all little-endian):
//!
//! | offset | size    | field                         |
//! |--------|---------|-------------------------------|
//! | 0      | 4       | magic `b"MFEA"`               |
//! | 4      | 4       | version `u32` = 1             |
//! | 8      | 8       | rows `n` as `u64`             |
//! | 16     | 8       | width `d` as `u64`            |
//! | 24     | 8       | frame rate as `f64`           |
//! | 32     | 4·n·d   | values, row-major, `f32`      |

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

const MAGIC: &[u8; 4] = b"MFEA";
const VERSION: u32 = 1;
const HEADER_LEN: usize = 32;

/// Context radius used when none is given.
pub const DEFAULT_CONTEXT_RADIUS: usize = 2;

/// An `n × d` row-major feature matrix with its frame rate.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSequence {
    values: Vec<f32>,
    rows: usize,
    dim: usize,
    frame_rate: f64,
}

#[derive(Serialize, Deserialize)]
struct FeatureDoc {
    n: usize,
    d: usize,
    frame_rate: f64,
    rows: Vec<Vec<f32>>,
}

impl FeatureSequence {
    pub fn new(values: Vec<f32>, rows: usize, dim: usize, frame_rate: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid("feature width must be at least 1".into()));
        }
        if !(frame_rate.is_finite() && frame_rate > 0.0) {
            return Err(Error::Invalid(format!(
                "frame rate must be positive, got {frame_rate}"
            )));
        }
        if rows.checked_mul(dim) != Some(values.len()) {
            return Err(Error::Shape {
                expected: format!("{rows}×{dim} = {} values", rows.saturating_mul(dim)),
                got: values.len().to_string(),
            });
        }
        Ok(Self {
            values,
            rows,
            dim,
            frame_rate,
        })
    }

    pub fn from_rows(rows: &[Vec<f32>], frame_rate: f64) -> Result<Self> {
        let dim = rows.first().map_or(1, Vec::len);
        if let Some(i) = rows.iter().position(|r| r.len() != dim) {
            return Err(Error::Shape {
                expected: format!("rows of width {dim}"),
                got: format!("row {i} of width {}", rows[i].len()),
            });
        }
        Self::new(rows.concat(), rows.len(), dim, frame_rate)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn frame_rate(&self) -> f64 {
        self.frame_rate
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    pub fn row(&self, t: usize) -> &[f32] {
        &self.values[t * self.dim..(t + 1) * self.dim]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f32]> {
        self.values.chunks_exact(self.dim)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + 4 * self.values.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&(self.rows as u64).to_le_bytes());
        out.extend_from_slice(&(self.dim as u64).to_le_bytes());
        out.extend_from_slice(&self.frame_rate.to_le_bytes());
        for v in &self.values {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::Parse("feature file shorter than its header".into()));
        }
        if &bytes[..4] != MAGIC {
            return Err(Error::Parse("bad feature file magic".into()));
        }
        let word = |at: usize| u64::from_le_bytes(bytes[at..at + 8].try_into().unwrap());
        let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
        if version != VERSION {
            return Err(Error::Version {
                found: version.to_string(),
                expected: VERSION.to_string(),
            });
        }
        let rows =
            usize::try_from(word(8)).map_err(|_| Error::Parse("row count overflow".into()))?;
        let dim = usize::try_from(word(16)).map_err(|_| Error::Parse("width overflow".into()))?;
        let frame_rate = f64::from_bits(word(24));
        let payload = &bytes[HEADER_LEN..];
        let count = rows
            .checked_mul(dim)
            .filter(|c| c.checked_mul(4) == Some(payload.len()))
            .ok_or_else(|| {
                Error::Parse(format!(
                    "payload of {} bytes does not hold {rows}×{dim} f32 values",
                    payload.len()
                ))
            })?;
        let values = payload
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
            .collect::<Vec<_>>();
        debug_assert_eq!(values.len(), count);
        Self::new(values, rows, dim, frame_rate)
    }

    /// Structured-text variant `{n, d, frame_rate, rows: [[...], ...]}`.
    pub fn to_json(&self) -> Vec<u8> {
        let doc = FeatureDoc {
            n: self.rows,
            d: self.dim,
            frame_rate: self.frame_rate,
            rows: self.iter_rows().map(<[f32]>::to_vec).collect(),
        };
        let mut out = serde_json::to_vec(&doc).expect("features are serializable");
        out.push(b'\n');
        out
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let doc: FeatureDoc =
            serde_json::from_slice(bytes).map_err(|e| Error::Parse(format!("features: {e}")))?;
        if doc.rows.len() != doc.n || doc.rows.iter().any(|r| r.len() != doc.d) {
            return Err(Error::Shape {
                expected: format!("{}×{}", doc.n, doc.d),
                got: format!("{} rows", doc.rows.len()),
            });
        }
        Self::new(doc.rows.concat(), doc.n, doc.d, doc.frame_rate)
    }
}

/// Concatenates each row with its `radius` neighbours on both sides,
/// replicating the first and last rows at the edges. Output width is
/// `(2·radius + 1)·d`.
pub fn context_window(f: &FeatureSequence, radius: usize) -> Result<FeatureSequence> {
    let n = f.rows();
    if n == 0 {
        return Err(Error::Invalid(
            "context window needs at least one frame".into(),
        ));
    }
    let span = 2 * radius + 1;
    let mut values = Vec::with_capacity(n * span * f.dim());
    for t in 0..n {
        for k in 0..span {
            let src = (t + k).saturating_sub(radius).min(n - 1);
            values.extend_from_slice(f.row(src));
        }
    }
    FeatureSequence::new(values, n, span * f.dim(), f.frame_rate())
}
