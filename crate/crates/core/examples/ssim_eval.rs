//! Compare two frame sequences with SSIM.
//!
//! cargo run --example ssim_eval [-- a.png b.png]

use mimic::cli::load_png;
use mimic::metrics::{ssim, ssim_report, SsimParams};
use mimic::FloatImage;

fn gradient(shift: f64) -> FloatImage {
    let (w, h) = (64, 64);
    let data = (0..w * h)
        .map(|i| {
            let (x, y) = ((i % w) as f64, (i / w) as f64);
            (0.5 + 0.4 * ((x + shift) * 0.2).sin() * (y * 0.15).cos()).clamp(0.0, 1.0)
        })
        .collect();
    FloatImage::new(w, h, 1, data).expect("valid image")
}

fn main() -> mimic::Result<()> {
    let params = SsimParams::default();
    let args: Vec<String> = std::env::args().skip(1).collect();
    if let [a, b] = args.as_slice() {
        let score = ssim(&load_png(a.as_ref())?, &load_png(b.as_ref())?, &params)?;
        println!("{score:.6}");
        return Ok(());
    }

    let reference: Vec<FloatImage> = (0..4).map(|_| gradient(0.0)).collect();
    let generated: Vec<FloatImage> = (0..4).map(|t| gradient(t as f64 * 0.5)).collect();
    let report = ssim_report(&reference, &generated, &params)?;
    for (t, s) in report.per_frame.iter().enumerate() {
        println!("frame {t}: {s:.6}");
    }
    println!("mean: {:.6}", report.mean);
    Ok(())
}
