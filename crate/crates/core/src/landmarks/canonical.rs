//! Canonical landmark document: the export shape tagged with
//! `"format": "mimic-landmarks"` and written with a fixed key order.
//!
//! Floats are written in shortest round-trip form so `read(write(s)) == s`
//! holds bit for bit.

use super::{LandmarkSequence, Point2};
use crate::error::{Error, Result};
use serde::Serialize;
use serde_json::Value;

pub const CANONICAL_FORMAT: &str = "mimic-landmarks";
pub const FORMAT_VERSION: &str = "1";

#[derive(Serialize)]
struct CanonicalDoc {
    format: &'static str,
    version: &'static str,
    fps: f64,
    width: u32,
    height: u32,
    topology_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamps_ms: Option<Vec<Option<i64>>>,
    frames: Vec<Vec<[f64; 2]>>,
}

/// Serializes a sequence as a canonical document (compact JSON plus a
/// trailing newline).
pub fn write_canonical(seq: &LandmarkSequence) -> Vec<u8> {
    let frames = seq.frames();
    let timestamps_ms = frames
        .iter()
        .any(|f| f.timestamp_ms.is_some())
        .then(|| frames.iter().map(|f| f.timestamp_ms).collect());
    let doc = CanonicalDoc {
        format: CANONICAL_FORMAT,
        version: FORMAT_VERSION,
        fps: seq.fps(),
        width: seq.width(),
        height: seq.height(),
        topology_size: seq.topology_size(),
        timestamps_ms,
        frames: frames
            .iter()
            .map(|f| f.points.iter().map(|&Point2 { x, y }| [x, y]).collect())
            .collect(),
    };
    let mut out = serde_json::to_vec(&doc).expect("canonical document is always serializable");
    out.push(b'\n');
    out
}

pub fn read_canonical(bytes: &[u8]) -> Result<LandmarkSequence> {
    let doc: Value = serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))?;
    read_canonical_value(&doc)
}

pub(super) fn read_canonical_value(doc: &Value) -> Result<LandmarkSequence> {
    match doc.get("format").and_then(Value::as_str) {
        Some(CANONICAL_FORMAT) => {}
        Some(other) => {
            return Err(Error::Parse(format!(
                "unknown format tag {other:?}, expected {CANONICAL_FORMAT:?}"
            )))
        }
        None => return Err(Error::Parse("missing `format` tag".into())),
    }
    super::export::parse_document(doc).map(|p| p.sequence)
}
