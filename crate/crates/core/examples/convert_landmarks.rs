//! Parse an extractor export and write it back in canonical form.
//!
//! cargo run --example convert_landmarks [-- export.json out.json]

use mimic::landmarks::{read_canonical, read_landmarks, write_canonical};

const SAMPLE: &str = r#"{
  "version": "1", "fps": 25, "width": 640, "height": 480, "topology_size": 3,
  "frames": [
    [[0.25, 0.5, 0.0], [0.75, 0.5, 0.0], [0.5, 0.8, 0.0]],
    [[0.26, 0.5, 0.0], [0.76, 0.5, 0.0], [0.5, 1.7, 0.0]]
  ]
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let bytes = match args.first() {
        Some(path) => std::fs::read(path)?,
        None => SAMPLE.as_bytes().to_vec(),
    };

    let parsed = read_landmarks(&bytes)?;
    let seq = &parsed.sequence;
    println!(
        "{} frames x {} points at {} fps, {}x{} px",
        seq.len(),
        seq.topology_size(),
        seq.fps(),
        seq.width(),
        seq.height()
    );
    if parsed.out_of_range > 0 {
        println!("{} coordinates lie outside the frame", parsed.out_of_range);
    }

    let canonical = write_canonical(seq);
    assert_eq!(&read_canonical(&canonical)?, seq);
    match args.get(1) {
        Some(out) => std::fs::write(out, &canonical)?,
        None => print!("{}", String::from_utf8_lossy(&canonical)),
    }
    Ok(())
}
