//! Render landmark condition images to PNG files.
//!
//! cargo run --example rasterize_condition [-- out_dir]

use mimic::condition::{rasterize_sequence, write_frames, MaskSource, RenderOptions, RlsConfig};
use mimic::landmarks::FacePartition;
use mimic::synth::synthetic_sequence;
use std::path::PathBuf;

fn main() -> mimic::Result<()> {
    let out_dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("mimic_condition_frames"));
    let partition = FacePartition::face_mesh_default();
    let seq = synthetic_sequence(&partition, 478, 8, 25.0, (512, 512), 3)?;

    let source = MaskSource::Random {
        cfg: RlsConfig {
            per_clip: false,
            ..RlsConfig::with_seed(9)
        },
        clip_id: 0,
    };
    let opts = RenderOptions {
        width: 256,
        height: 256,
        point_radius: 1,
        ..RenderOptions::default()
    };
    let rendered = rasterize_sequence(&seq, &partition, &source, &opts)?;
    let paths = write_frames(&out_dir, &rendered.images)?;
    for (path, mask) in paths.iter().zip(&rendered.masks) {
        println!(
            "{} dropped {:?}",
            path.display(),
            mask.dropped().collect::<Vec<_>>()
        );
    }
    Ok(())
}
