//! Move landmarks, images and features through flat arrays, as a foreign
//! caller holding numpy-style buffers would.

use mimic::bridge::{features_from_array, image_to_array, sequence_from_array, sequence_to_array};
use mimic::condition::{rasterize_frame, PartMask, RenderOptions};
use mimic::landmarks::FacePartition;
use mimic::synth::synthetic_face;

fn main() -> mimic::Result<()> {
    let partition = FacePartition::face_mesh_default();
    let face = synthetic_face(&partition, 478, 5);
    let flat: Vec<f64> = (0..3)
        .flat_map(|_| face.points.iter().flat_map(|p| [p.x, p.y]))
        .collect();

    let seq = sequence_from_array(&flat, [3, 478, 2], 25.0, 512, 512)?;
    let (back, shape) = sequence_to_array(&seq);
    assert_eq!(back, flat);
    println!("landmarks: shape {shape:?}");

    let img = rasterize_frame(
        &seq.frames()[0],
        &partition,
        &PartMask::all_kept(&partition),
        &RenderOptions::default(),
    )?;
    let (pixels, shape) = image_to_array(&img);
    println!("image: shape {shape:?}, {} bytes", pixels.len());

    let features = features_from_array(&[0.0; 12], [4, 3], 50.0)?;
    println!("features: {} x {}", features.rows(), features.dim());

    if let Err(e) = sequence_from_array(&flat, [3, 478, 3], 25.0, 512, 512) {
        println!("bad shape: {e}");
    }
    Ok(())
}
