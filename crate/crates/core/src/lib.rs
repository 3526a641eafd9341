//! Landmark-driven motion retargeting and conditioning toolkit for
//! audio/landmark-driven portrait animation.
//!
//! * [`landmarks`]: landmark sequences, face partitions and file formats.
//! * [`motion`]: full-face plus per-part similarity alignment of a driving
//!   sequence onto a reference face.
//! * [`condition`]: random part dropping and condition-image rendering.
//! * [`audio`]: WAV I/O, augmentation and feature context windows.
//! * [`train`]: timestep-weighted spatial loss and objective composition.
//! * [`metrics`]: SSIM and landmark distances.
//!
//! Everything is deterministic: randomized steps take an explicit seed.

pub mod audio;
pub mod bridge;
pub mod cli;
pub mod condition;
pub mod error;
pub mod float_image;
pub mod landmarks;
pub mod metrics;
pub mod motion;
pub mod synth;
pub mod train;

pub use error::{Error, Result};
pub use float_image::FloatImage;

/// Library version, shared with the bindings.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
