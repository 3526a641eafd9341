//! Timestep-weighted spatial loss and the total training objective.

use mimic::train::{pixel_mse, timestep_weight, total_objective, LossBreakdown};
use mimic::FloatImage;

fn main() -> mimic::Result<()> {
    let total = 1000;
    for t in [0, 250, 500, 750, 1000] {
        println!("w({t:>4}) = {:.6}", timestep_weight(t, total)?);
    }

    let decoded = FloatImage::filled(64, 64, 3, 0.52);
    let target = FloatImage::filled(64, 64, 3, 0.50);
    let mse = pixel_mse(&decoded, &target)?;
    let perceptual = 0.08; // from an external perceptual network

    for t in [10, 900] {
        let step = LossBreakdown {
            lambda: 0.5,
            ..LossBreakdown::new(0.12, mse, perceptual, t, total)
        };
        println!(
            "t = {t:>3}: spatial {:.5}, objective {:.5}",
            step.spatial()?,
            step.objective()?
        );
    }
    println!("latent only: {}", total_objective(0.12, 0.0, 0.5)?);
    Ok(())
}
