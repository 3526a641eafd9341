//! Widen per-frame audio features with their neighbours.

use mimic::audio::{context_window, FeatureSequence, DEFAULT_CONTEXT_RADIUS};

fn main() -> mimic::Result<()> {
    let rows: Vec<Vec<f32>> = (0..5).map(|t| vec![t as f32, 10.0 * t as f32]).collect();
    let features = FeatureSequence::from_rows(&rows, 25.0)?;

    let windowed = context_window(&features, 1)?;
    println!("radius 1: {} x {}", windowed.rows(), windowed.dim());
    for row in windowed.iter_rows() {
        println!("  {row:?}");
    }

    let wide = context_window(&features, DEFAULT_CONTEXT_RADIUS)?;
    println!(
        "radius {DEFAULT_CONTEXT_RADIUS}: {} x {}",
        wide.rows(),
        wide.dim()
    );

    let bytes = wide.to_bytes();
    assert_eq!(FeatureSequence::from_bytes(&bytes)?, wide);
    println!("binary file: {} bytes", bytes.len());
    Ok(())
}
