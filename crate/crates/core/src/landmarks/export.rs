//! Reader for landmark exports produced by an external face-mesh extractor.

use super::{LandmarkFrame, LandmarkSequence, Point2};
use crate::error::{Error, Result};
use serde_json::{Map, Value};

/// Coordinates outside this band are accepted but tallied.
const IN_FRAME_BAND: (f64, f64) = (-0.5, 1.5);

/// Result of parsing an export document.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedExport {
    pub sequence: LandmarkSequence,
    /// Number of coordinate values (x or y) outside `[-0.5, 1.5]`.
    pub out_of_range: usize,
}

/// Parses an extractor export:
/// `{version: "1", fps, width, height, topology_size, frames: [[[x, y], ...], ...]}`.
///
/// A third coordinate per point (depth) is accepted and ignored.
pub fn parse_mediapipe_export(bytes: &[u8]) -> Result<ParsedExport> {
    let doc: Value = serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))?;
    parse_document(&doc)
}

/// Reads either an extractor export or a canonical document.
pub fn read_landmarks(bytes: &[u8]) -> Result<ParsedExport> {
    let doc: Value = serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))?;
    if doc.get("format").is_some() {
        let sequence = super::canonical::read_canonical_value(&doc)?;
        let out_of_range = count_out_of_range(&sequence);
        Ok(ParsedExport {
            sequence,
            out_of_range,
        })
    } else {
        parse_document(&doc)
    }
}

pub(super) fn parse_document(doc: &Value) -> Result<ParsedExport> {
    let obj = doc
        .as_object()
        .ok_or_else(|| Error::Parse("top level must be an object".into()))?;

    let version = obj
        .get("version")
        .ok_or_else(|| Error::Parse("missing field `version`".into()))?;
    let version = version
        .as_str()
        .ok_or_else(|| Error::Parse("`version` must be a string".into()))?;
    if version != super::FORMAT_VERSION {
        return Err(Error::Version {
            found: version.to_owned(),
            expected: super::FORMAT_VERSION.to_owned(),
        });
    }

    let fps = field_f64(obj, "fps")?;
    if fps.is_nan() || fps <= 0.0 {
        return Err(Error::Parse(format!("`fps` must be positive, got {fps}")));
    }
    let width = field_dim(obj, "width")?;
    let height = field_dim(obj, "height")?;
    let topology_size = field_u64(obj, "topology_size")?;
    if topology_size == 0 {
        return Err(Error::Parse("`topology_size` must be positive".into()));
    }
    let topology_size = topology_size as usize;

    let frames = obj
        .get("frames")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing or non-array field `frames`".into()))?;
    if frames.is_empty() {
        return Err(Error::Parse("no frames".into()));
    }

    let timestamps = match obj.get("timestamps_ms") {
        None | Some(Value::Null) => None,
        Some(Value::Array(ts)) => {
            if ts.len() != frames.len() {
                return Err(Error::Parse(format!(
                    "`timestamps_ms` has {} entries for {} frames",
                    ts.len(),
                    frames.len()
                )));
            }
            Some(ts)
        }
        Some(_) => return Err(Error::Parse("`timestamps_ms` must be an array".into())),
    };

    let mut out_of_range = 0;
    let mut parsed = Vec::with_capacity(frames.len());
    for (idx, frame) in frames.iter().enumerate() {
        let number = idx + 1;
        let at = |message: String| Error::ParseAt {
            frame: number,
            message,
        };
        let points = frame
            .as_array()
            .ok_or_else(|| at("frame must be an array of points".into()))?;
        if points.len() != topology_size {
            return Err(at(format!(
                "expected {topology_size} points, found {}",
                points.len()
            )));
        }
        let mut out = Vec::with_capacity(points.len());
        for (pi, point) in points.iter().enumerate() {
            let coords = point
                .as_array()
                .ok_or_else(|| at(format!("point {pi} must be an array")))?;
            if coords.len() < 2 || coords.len() > 3 {
                return Err(at(format!(
                    "point {pi} must have 2 or 3 coordinates, found {}",
                    coords.len()
                )));
            }
            let x = coord(&coords[0])
                .ok_or_else(|| at(format!("point {pi} field x: not a finite number")))?;
            let y = coord(&coords[1])
                .ok_or_else(|| at(format!("point {pi} field y: not a finite number")))?;
            for v in [x, y] {
                if v < IN_FRAME_BAND.0 || v > IN_FRAME_BAND.1 {
                    out_of_range += 1;
                }
            }
            out.push(Point2::new(x, y));
        }
        let timestamp_ms = match timestamps.map(|ts| &ts[idx]) {
            None | Some(Value::Null) => None,
            Some(v) => Some(
                v.as_i64()
                    .ok_or_else(|| at("timestamp must be an integer or null".into()))?,
            ),
        };
        parsed.push(LandmarkFrame {
            points: out,
            timestamp_ms,
        });
    }

    let sequence = LandmarkSequence::new(parsed, fps, width, height, topology_size)?;
    if out_of_range > 0 {
        log::warn!("{out_of_range} landmark coordinates lie outside [-0.5, 1.5]");
    }
    Ok(ParsedExport {
        sequence,
        out_of_range,
    })
}

fn coord(v: &Value) -> Option<f64> {
    v.as_f64().filter(|x| x.is_finite())
}

fn field_f64(obj: &Map<String, Value>, name: &str) -> Result<f64> {
    obj.get(name)
        .and_then(Value::as_f64)
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Parse(format!("missing or non-numeric field `{name}`")))
}

fn field_u64(obj: &Map<String, Value>, name: &str) -> Result<u64> {
    obj.get(name)
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse(format!("field `{name}` must be a non-negative integer")))
}

fn field_dim(obj: &Map<String, Value>, name: &str) -> Result<u32> {
    let v = field_u64(obj, name)?;
    match u32::try_from(v) {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(Error::Parse(format!(
            "`{name}` must be in 1..=u32::MAX, got {v}"
        ))),
    }
}

fn count_out_of_range(seq: &LandmarkSequence) -> usize {
    seq.frames()
        .iter()
        .flat_map(|f| f.points.iter())
        .flat_map(|p| [p.x, p.y])
        .filter(|&v| v < IN_FRAME_BAND.0 || v > IN_FRAME_BAND.1)
        .count()
}
