//! Random landmark selection: dropping whole facial parts from the
//! condition signal.

use crate::error::{Error, Result};
use crate::landmarks::{FacePartition, LandmarkSequence};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Name of the part hidden by [`mouth_exclusion_mask`].
pub const MOUTH: &str = "mouth";

/// Keep/drop state per part.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartMask {
    pub kept: BTreeMap<String, bool>,
}

impl PartMask {
    pub fn all_kept(partition: &FacePartition) -> Self {
        Self::from_fn(partition, |_| true)
    }

    pub fn all_dropped(partition: &FacePartition) -> Self {
        Self::from_fn(partition, |_| false)
    }

    pub fn from_fn(partition: &FacePartition, mut keep: impl FnMut(&str) -> bool) -> Self {
        Self {
            kept: partition.names().map(|n| (n.to_owned(), keep(n))).collect(),
        }
    }

    pub fn is_kept(&self, part: &str) -> bool {
        self.kept.get(part).copied().unwrap_or(false)
    }

    pub fn dropped(&self) -> impl Iterator<Item = &str> {
        self.kept
            .iter()
            .filter(|(_, &k)| !k)
            .map(|(n, _)| n.as_str())
    }

    /// Errors unless the key set equals the partition's part names.
    pub fn check_against(&self, partition: &FacePartition) -> Result<()> {
        if self.kept.len() == partition.len()
            && partition.names().all(|n| self.kept.contains_key(n))
        {
            Ok(())
        } else {
            let mask: Vec<_> = self.kept.keys().collect();
            let parts: Vec<_> = partition.names().collect();
            Err(Error::Invalid(format!(
                "mask parts {mask:?} do not match partition parts {parts:?}"
            )))
        }
    }

    pub fn to_json(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("mask is serializable");
        out.push(b'\n');
        out
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        serde_json::from_slice(bytes).map_err(|e| Error::Parse(format!("mask: {e}")))
    }
}

/// Random landmark selection settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RlsConfig {
    /// Per-part drop probability; parts not listed use `default_drop_prob`.
    pub drop_prob: BTreeMap<String, f64>,
    pub default_drop_prob: f64,
    pub seed: u64,
    /// One mask per sequence when true, one per frame otherwise.
    pub per_clip: bool,
}

impl Default for RlsConfig {
    fn default() -> Self {
        Self {
            drop_prob: BTreeMap::new(),
            default_drop_prob: 0.5,
            seed: 0,
            per_clip: true,
        }
    }
}

impl RlsConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn drop_prob_for(&self, part: &str) -> f64 {
        self.drop_prob
            .get(part)
            .copied()
            .unwrap_or(self.default_drop_prob)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |p: f64| !(0.0..=1.0).contains(&p);
        if bad(self.default_drop_prob) {
            return Err(Error::Invalid(format!(
                "default drop probability {} outside [0, 1]",
                self.default_drop_prob
            )));
        }
        if let Some((name, p)) = self.drop_prob.iter().find(|(_, &p)| bad(p)) {
            return Err(Error::Invalid(format!(
                "drop probability {p} for part {name:?} outside [0, 1]"
            )));
        }
        Ok(())
    }
}

/// FNV-1a, used to derive a stable per-part stream id.
fn part_stream(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Uniform draw in `[0, 1)` addressed by `(seed, part, draw_index)`.
///
/// The ChaCha block counter is positioned directly at the draw, so the
/// value does not depend on how many other draws were made before it.
pub(crate) fn uniform_at(seed: u64, part: &str, draw_index: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(part_stream(part));
    rng.set_word_pos(u128::from(draw_index) * 2);
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Samples a part mask: part `p` is dropped with probability `drop_prob[p]`,
/// independently, as a pure function of `(seed, draw_index, part name)`.
pub fn sample_mask(
    partition: &FacePartition,
    cfg: &RlsConfig,
    draw_index: u64,
) -> Result<PartMask> {
    cfg.validate()?;
    Ok(PartMask::from_fn(partition, |name| {
        uniform_at(cfg.seed, name, draw_index) >= cfg.drop_prob_for(name)
    }))
}

/// The audio-plus-landmarks mode: every part except the mouth is kept.
pub fn mouth_exclusion_mask(partition: &FacePartition) -> Result<PartMask> {
    if partition.get(MOUTH).is_none() {
        return Err(Error::Invalid(format!("partition has no {MOUTH:?} part")));
    }
    Ok(PartMask::from_fn(partition, |n| n != MOUTH))
}

/// Per-landmark visibility for a mask: unpartitioned landmarks are always
/// visible, partitioned ones follow their part's keep flag.
pub fn visibility(
    partition: &FacePartition,
    mask: &PartMask,
    topology_size: usize,
) -> Result<Vec<bool>> {
    mask.check_against(partition)?;
    partition.ensure_valid(topology_size)?;
    Ok(partition
        .assignment(topology_size)
        .into_iter()
        .map(|part| part.is_none_or(|p| mask.is_kept(p)))
        .collect())
}

/// A sequence viewed through a part mask. Coordinates are untouched.
#[derive(Debug, Clone)]
pub struct MaskedSequence<'a> {
    pub sequence: &'a LandmarkSequence,
    pub visible: Vec<bool>,
}

impl MaskedSequence<'_> {
    pub fn visible_count(&self) -> usize {
        self.visible.iter().filter(|&&v| v).count()
    }
}

pub fn apply_mask<'a>(
    seq: &'a LandmarkSequence,
    partition: &FacePartition,
    mask: &PartMask,
) -> Result<MaskedSequence<'a>> {
    Ok(MaskedSequence {
        sequence: seq,
        visible: visibility(partition, mask, seq.topology_size())?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landmarks::{LandmarkFrame, Point2};

    fn cfg(p: f64) -> RlsConfig {
        RlsConfig {
            default_drop_prob: p,
            ..RlsConfig::with_seed(7)
        }
    }

    #[test]
    fn extreme_probabilities() {
        let partition = FacePartition::face_mesh_default();
        for draw in 0..50 {
            assert_eq!(
                sample_mask(&partition, &cfg(0.0), draw).unwrap(),
                PartMask::all_kept(&partition)
            );
            assert_eq!(
                sample_mask(&partition, &cfg(1.0), draw).unwrap(),
                PartMask::all_dropped(&partition)
            );
        }
    }

    #[test]
    fn invalid_probability_is_rejected() {
        let partition = FacePartition::face_mesh_default();
        assert!(sample_mask(&partition, &cfg(1.5), 0).is_err());
        let mut c = cfg(0.5);
        c.drop_prob.insert("nose".into(), -0.1);
        assert!(sample_mask(&partition, &c, 0).is_err());
    }

    #[test]
    fn draws_are_position_addressed() {
        // Draw 5 is the same whether or not draws 0..5 were taken first.
        let direct = uniform_at(99, "eyes", 5);
        let _: Vec<f64> = (0..5).map(|i| uniform_at(99, "eyes", i)).collect();
        assert_eq!(uniform_at(99, "eyes", 5), direct);
        assert_ne!(uniform_at(99, "eyes", 5), uniform_at(99, "nose", 5));
        assert_ne!(uniform_at(99, "eyes", 5), uniform_at(98, "eyes", 5));
    }

    #[test]
    fn mouth_exclusion() {
        let partition = FacePartition::face_mesh_default();
        let mask = mouth_exclusion_mask(&partition).unwrap();
        assert_eq!(mask.dropped().collect::<Vec<_>>(), [MOUTH]);
        assert!(mouth_exclusion_mask(&partition.without(&[MOUTH])).is_err());
    }

    #[test]
    fn apply_mask_hides_exactly_the_dropped_part() {
        let partition = FacePartition::face_mesh_default();
        let frame = LandmarkFrame::new(vec![Point2::new(0.5, 0.5); 478]);
        let seq = LandmarkSequence::new(vec![frame], 25.0, 512, 512, 478).unwrap();

        let all = apply_mask(&seq, &partition, &PartMask::all_kept(&partition)).unwrap();
        assert_eq!(all.visible_count(), 478);

        let mask = PartMask::from_fn(&partition, |n| n != "mouth");
        let view = apply_mask(&seq, &partition, &mask).unwrap();
        let hidden: Vec<usize> = (0..478).filter(|&i| !view.visible[i]).collect();
        assert_eq!(hidden, partition.get("mouth").unwrap().indices);

        let mask = PartMask::from_fn(&partition, |n| n != "eyes" && n != "nose");
        let view = apply_mask(&seq, &partition, &mask).unwrap();
        let eyes = partition.get("eyes").unwrap().indices.len();
        let nose = partition.get("nose").unwrap().indices.len();
        assert_eq!(view.visible_count(), 478 - eyes - nose);
    }

    #[test]
    fn mismatched_mask_is_rejected() {
        let partition = FacePartition::face_mesh_default();
        let mask = PartMask::all_kept(&partition.without(&["nose"]));
        assert!(visibility(&partition, &mask, 478).is_err());
    }
}
