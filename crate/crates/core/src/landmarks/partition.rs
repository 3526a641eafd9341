//! Named, disjoint groups of landmark indices ("parts") with drawing
//! connectivity.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

const FACE_MESH_PARTITION: &str = include_str!("../../data/face_mesh_478.json");

/// One facial part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Part {
    pub indices: Vec<usize>,
    #[serde(default)]
    pub edges: Vec<[usize; 2]>,
}

impl Part {
    pub fn new(indices: impl IntoIterator<Item = usize>, edges: Vec<[usize; 2]>) -> Self {
        let mut indices: Vec<usize> = indices.into_iter().collect();
        indices.sort_unstable();
        indices.dedup();
        Self { indices, edges }
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.indices.binary_search(&idx).is_ok()
    }
}

/// A face partition. Part names iterate in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacePartition {
    pub topology_size: usize,
    pub parts: BTreeMap<String, Part>,
}

impl FacePartition {
    /// Builds a partition without validating it; see [`validate_partition`].
    pub fn new(topology_size: usize, parts: impl IntoIterator<Item = (String, Part)>) -> Self {
        Self {
            topology_size,
            parts: parts
                .into_iter()
                .map(|(name, part)| (name, Part::new(part.indices, part.edges)))
                .collect(),
        }
    }

    /// The shipped partition of the 478-point face mesh into eyebrows,
    /// eyes, pupils, nose and mouth.
    pub fn face_mesh_default() -> Self {
        Self::from_json(FACE_MESH_PARTITION.as_bytes())
            .expect("bundled face-mesh partition is valid")
    }

    /// Parses a partition file and rejects it if validation finds problems.
    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let raw: FacePartition =
            serde_json::from_slice(bytes).map_err(|e| Error::Parse(format!("partition: {e}")))?;
        let partition = Self::new(raw.topology_size, raw.parts);
        partition.ensure_valid(partition.topology_size)?;
        Ok(partition)
    }

    pub fn to_json(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("partition is serializable");
        out.push(b'\n');
        out
    }

    /// Converts validation findings into an error.
    pub fn ensure_valid(&self, topology_size: usize) -> Result<()> {
        let report = validate_partition(self, topology_size);
        if report.is_clean() {
            Ok(())
        } else {
            Err(Error::Invalid(format!("invalid partition: {report}")))
        }
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.parts.keys().map(String::as_str)
    }

    pub fn get(&self, name: &str) -> Option<&Part> {
        self.parts.get(name)
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Maps every landmark index to the name of its part, `None` when the
    /// landmark is unpartitioned. Indices beyond `topology_size` are ignored.
    pub fn assignment(&self, topology_size: usize) -> Vec<Option<&str>> {
        let mut out = vec![None; topology_size];
        for (name, part) in &self.parts {
            for &i in &part.indices {
                if let Some(slot) = out.get_mut(i) {
                    *slot = Some(name.as_str());
                }
            }
        }
        out
    }

    /// Returns a copy of this partition with the named parts removed.
    pub fn without(&self, names: &[&str]) -> Self {
        Self {
            topology_size: self.topology_size,
            parts: self
                .parts
                .iter()
                .filter(|(n, _)| !names.contains(&n.as_str()))
                .map(|(n, p)| (n.clone(), p.clone()))
                .collect(),
        }
    }
}

/// One problem found by [`validate_partition`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Finding {
    EmptyName,
    TopologyMismatch {
        declared: usize,
        expected: usize,
    },
    IndexOutOfRange {
        part: String,
        index: usize,
    },
    Overlap {
        index: usize,
        first: String,
        second: String,
    },
    EdgeOutsidePart {
        part: String,
        edge: [usize; 2],
    },
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finding::EmptyName => write!(f, "empty part name"),
            Finding::TopologyMismatch { declared, expected } => write!(
                f,
                "topology mismatch: partition declares {declared}, expected {expected}"
            ),
            Finding::IndexOutOfRange { part, index } => {
                write!(f, "index out of range: {index} in part {part:?}")
            }
            Finding::Overlap {
                index,
                first,
                second,
            } => write!(
                f,
                "overlap: index {index} in parts {first:?} and {second:?}"
            ),
            Finding::EdgeOutsidePart { part, edge } => write!(
                f,
                "edge endpoint outside part: ({}, {}) in part {part:?}",
                edge[0], edge[1]
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, finding) in self.findings.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{finding}")?;
        }
        Ok(())
    }
}

/// Checks a partition against a topology size. Problems are returned as
/// data; an empty report means the partition is usable.
pub fn validate_partition(p: &FacePartition, topology_size: usize) -> ValidationReport {
    let mut findings = Vec::new();
    if p.topology_size != topology_size {
        findings.push(Finding::TopologyMismatch {
            declared: p.topology_size,
            expected: topology_size,
        });
    }
    let mut owner: BTreeMap<usize, &str> = BTreeMap::new();
    for (name, part) in &p.parts {
        if name.trim().is_empty() {
            findings.push(Finding::EmptyName);
        }
        for &index in &part.indices {
            if index >= topology_size {
                findings.push(Finding::IndexOutOfRange {
                    part: name.clone(),
                    index,
                });
            }
            if let Some(first) = owner.insert(index, name) {
                findings.push(Finding::Overlap {
                    index,
                    first: first.to_owned(),
                    second: name.clone(),
                });
            }
        }
        for &edge in &part.edges {
            if !(part.contains(edge[0]) && part.contains(edge[1])) {
                findings.push(Finding::EdgeOutsidePart {
                    part: name.clone(),
                    edge,
                });
            }
        }
    }
    ValidationReport { findings }
}
