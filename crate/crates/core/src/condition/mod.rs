//! Condition images for the landmark encoder: part masking and rendering.

mod mask;
mod raster;

pub use mask::{
    apply_mask, mouth_exclusion_mask, sample_mask, visibility, MaskedSequence, PartMask, RlsConfig,
    MOUTH,
};
pub use raster::{
    frame_file_name, rasterize_frame, rasterize_sequence, write_frames, MaskSource,
    RasterizedSequence, RenderOptions, Rgb,
};
