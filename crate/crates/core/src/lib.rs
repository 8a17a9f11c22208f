//! Haze removal for registered RGB + near-infrared image pairs.
//!
//! The luma channel of the color image and the NIR image are decomposed into
//! multi-level orthonormal Haar pyramids. Approximation bands are blended with
//! a haze-weight map taken from the blue channel, detail bands are combined by
//! choose-max, and the pyramid is collapsed bottom-up with a histogram match at
//! every level. The fused luma is matched back to the original luma, blended
//! once more with the haze map, and recombined with the untouched chroma.
//!
//! # Modules
//! - [`image_io`]: decoding, normalization to `[0, 1]`, and PNG output.
//! - [`colorspace`]: full-range BT.601 YCbCr and the haze-weight map.
//! - [`wavelet`]: 2-D Haar analysis/synthesis and the multi-level pyramid.
//! - [`fusion`]: the dehazing pipeline itself.
//! - [`metrics`]: entropy, standard deviation, SSIM, correlation coefficient,
//!   spatial frequency, and a blind contrast-restoration assessment.
//!
//! # Quick start
//! ```no_run
//! use hazefuse::{dehaze, load_pair, save_image, BitDepth, FusionConfig};
//!
//! # fn run() -> hazefuse::Result<()> {
//! let pair = load_pair("scene_rgb.tiff", "scene_nir.tiff")?;
//! let out = dehaze(&pair, &FusionConfig::default())?;
//! save_image(&out, "scene_dehazed.png", BitDepth::Eight)?;
//! # Ok(())
//! # }
//! ```

pub mod colorspace;
mod error;
pub mod fusion;
pub mod image_io;
pub mod metrics;
mod plane;
pub mod wavelet;

pub use colorspace::{
    compute_haze_map, downsample_map, rgb_to_ycbcr, ycbcr_to_rgb, HazeMapMode, HazeWeightMap,
    YCbCrImage,
};
pub use error::{Error, Result};
pub use fusion::{
    dehaze, dehaze_with_map, dehaze_ycbcr, fuse_approx, fuse_detail, fuse_pyramids, histogram_match,
    FusedLevelImage, FusionConfig,
};
pub use image_io::{load_pair, save_image, BitDepth, ImagePair, NirImage, RgbImage};
pub use metrics::{BlindAssessment, MetricsReport};
pub use plane::Plane;
pub use wavelet::{decompose, dwt2_level, idwt2_level, reconstruct, CoefficientSet, HaarPyramid};
