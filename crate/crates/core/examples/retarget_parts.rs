//! Transfer a driving clip onto a reference face with a larger mouth and
//! inspect the per-part residual transforms.

use mimic::landmarks::{to_normalized, to_pixel, FacePartition};
use mimic::metrics::{landmark_rmse, CoordinateSpace};
use mimic::motion::{
    apply_transform, retarget_sequence, AffineTransform, ReferenceFace, RetargetMode,
    RetargetOptions,
};
use mimic::synth::synthetic_sequence;

fn main() -> mimic::Result<()> {
    let partition = FacePartition::face_mesh_default();
    let driving = synthetic_sequence(&partition, 478, 50, 25.0, (512, 512), 7)?;

    // Reference: the driver's first frame, moved and scaled, with the
    // mouth enlarged by 30% about its own center.
    let mut points = to_pixel(&driving.frames()[0], 512, 512);
    let mouth = &partition
        .get("mouth")
        .expect("default partition has a mouth")
        .indices;
    let (cx, cy) = mouth
        .iter()
        .fold((0.0, 0.0), |(x, y), &i| (x + points[i].x, y + points[i].y));
    let (cx, cy) = (cx / mouth.len() as f64, cy / mouth.len() as f64);
    for &i in mouth {
        points[i].x = cx + 1.3 * (points[i].x - cx);
        points[i].y = cy + 1.3 * (points[i].y - cy);
    }
    let placed = apply_transform(&AffineTransform::similarity(1.5, 0.1, 40.0, -20.0), &points);
    let reference = ReferenceFace::new(to_normalized(&placed, 1024, 1024), 1024, 1024)?;

    let part_aware = retarget_sequence(
        &driving,
        &reference,
        &partition,
        &RetargetOptions::default(),
    )?;
    let full_only = retarget_sequence(
        &driving,
        &reference,
        &partition,
        &RetargetOptions {
            mode: RetargetMode::FullFaceOnly,
            ..RetargetOptions::default()
        },
    )?;

    let set = &part_aware.transforms;
    println!("full face: {:.4?}", set.full.to_array());
    for (part, delta) in &set.residuals {
        println!("{part:>9}: {:+.4?}", delta.to_array());
    }
    let gap = landmark_rmse(
        &part_aware.sequence,
        &full_only.sequence,
        CoordinateSpace::Pixel,
    )?;
    println!("part-aware vs full-face output: {gap:.3} px rms");
    Ok(())
}
