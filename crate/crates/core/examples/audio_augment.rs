//! Augment a waveform with gain, a time shift and noise at a target SNR.
//!
//! cargo run --example audio_augment [-- in.wav out.wav]

use mimic::audio::{mean_power, read_wav, write_wav, AugmentationPlan, Snr, Waveform};

fn main() -> mimic::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let wave = match args.first() {
        Some(path) => read_wav(&std::fs::read(path)?)?,
        None => Waveform::clamped(
            (0..16_000)
                .map(|i| 0.25 * (i as f64 * 2.0 * std::f64::consts::PI * 220.0 / 16_000.0).sin()),
            16_000,
        )?,
    };

    for snr in [Snr::Clean, Snr::Db(20.0), Snr::Db(5.0)] {
        let plan = AugmentationPlan {
            gain_db: -3.0,
            shift_samples: 160,
            snr,
            seed: 1,
        };
        let out = plan.apply(&wave)?;
        println!(
            "{snr:>8}: {} samples, power {:.5} -> {:.5}",
            out.len(),
            mean_power(wave.samples()),
            mean_power(out.samples())
        );
        if let (Some(path), Snr::Db(_)) = (args.get(1), snr) {
            std::fs::write(path, write_wav(&out)?)?;
        }
    }
    Ok(())
}
