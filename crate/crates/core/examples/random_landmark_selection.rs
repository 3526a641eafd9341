//! Draw reproducible part masks and look at how often each part is dropped.

use mimic::condition::{apply_mask, mouth_exclusion_mask, sample_mask, RlsConfig};
use mimic::landmarks::FacePartition;
use mimic::synth::synthetic_sequence;

fn main() -> mimic::Result<()> {
    let partition = FacePartition::face_mesh_default();
    let mut cfg = RlsConfig::with_seed(42);
    cfg.drop_prob.insert("pupils".into(), 0.8);

    for draw in 0..5 {
        let mask = sample_mask(&partition, &cfg, draw)?;
        let dropped: Vec<&str> = mask.dropped().collect();
        println!("draw {draw}: dropped {dropped:?}");
    }

    let n = 2000;
    for name in partition.names() {
        let dropped = (0..n)
            .filter(|&i| {
                !sample_mask(&partition, &cfg, i)
                    .map(|m| m.is_kept(name))
                    .unwrap_or(true)
            })
            .count();
        println!(
            "{name:>9}: p = {:.2}, observed {:.3}",
            cfg.drop_prob_for(name),
            dropped as f64 / n as f64
        );
    }

    let seq = synthetic_sequence(&partition, 478, 4, 25.0, (256, 256), 1)?;
    let masked = apply_mask(&seq, &partition, &mouth_exclusion_mask(&partition)?)?;
    println!(
        "audio + landmarks mode keeps {} of 478 landmarks",
        masked.visible_count()
    );
    Ok(())
}
