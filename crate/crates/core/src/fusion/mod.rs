//! The dehazing pipeline.
//!
//! Luma and NIR pyramids are fused from the coarsest level up:
//!
//! 1. approximation bands are blended with the haze map pooled to that level,
//!    `A = p * na + (1 - p) * la`;
//! 2. detail bands keep whichever coefficient has the larger magnitude;
//! 3. at the coarsest level the fused bands are synthesized into `z`; at every
//!    finer level `z` is first histogram-matched to that level's fused
//!    approximation and then used as the approximation band for synthesis.
//!
//! [`dehaze`] wraps this with the color split, a final match against the input
//! luma, a last haze-weighted blend, and chroma recombination.

mod histogram;

pub use histogram::histogram_match;

use serde::{Deserialize, Serialize};

use crate::colorspace::{
    compute_haze_map, downsample_map, rgb_to_ycbcr, ycbcr_to_rgb, HazeMapMode, HazeWeightMap,
    YCbCrImage,
};
use crate::error::{Error, Result};
use crate::image_io::{ImagePair, RgbImage};
use crate::plane::Plane;
use crate::wavelet::{decompose, idwt2_level, CoefficientSet, HaarPyramid};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FusionConfig {
    pub n_levels: usize,
    pub haze_map_mode: HazeMapMode,
    pub histogram_bins: usize,
}

impl Default for FusionConfig {
    fn default() -> Self {
        Self {
            n_levels: 2,
            haze_map_mode: HazeMapMode::Scale,
            histogram_bins: 256,
        }
    }
}

impl FusionConfig {
    pub fn new(n_levels: usize, haze_map_mode: HazeMapMode, histogram_bins: usize) -> Result<Self> {
        let cfg = Self {
            n_levels,
            haze_map_mode,
            histogram_bins,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_levels < 1 {
            return Err(Error::InvalidConfig("n_levels must be at least 1".into()));
        }
        if self.histogram_bins < 2 {
            return Err(Error::InvalidConfig(
                "histogram_bins must be at least 2".into(),
            ));
        }
        Ok(())
    }
}

/// The running reconstruction after fusing pyramid level `level`.
#[derive(Clone, Debug, PartialEq)]
pub struct FusedLevelImage {
    pub z: Plane,
    pub level: usize,
}

/// `weights * nir + (1 - weights) * luma`, elementwise.
pub fn fuse_approx(luma: &Plane, nir: &Plane, weights: &Plane) -> Result<Plane> {
    luma.ensure_same_dims(nir)?;
    luma.ensure_same_dims(weights)?;
    let data = luma
        .as_slice()
        .iter()
        .zip(nir.as_slice())
        .zip(weights.as_slice())
        .map(|((&l, &n), &p)| p * n + (1.0 - p) * l)
        .collect();
    Plane::new(luma.width(), luma.height(), data)
}

/// Choose-max: keep the coefficient with the larger magnitude, luma on ties.
pub fn fuse_detail(luma: &Plane, nir: &Plane) -> Result<Plane> {
    luma.zip_map(nir, |l, n| if n.abs() > l.abs() { n } else { l })
}

fn check_pyramids(luma: &HaarPyramid, nir: &HaarPyramid, map: &HazeWeightMap) -> Result<()> {
    luma.validate()?;
    nir.validate()?;
    if luma.n_levels() != nir.n_levels() {
        return Err(Error::PyramidMismatch(format!(
            "luma has {} levels, NIR has {}",
            luma.n_levels(),
            nir.n_levels()
        )));
    }
    if luma.original_dims() != nir.original_dims() {
        return Err(Error::PyramidMismatch(format!(
            "luma built from {:?}, NIR from {:?}",
            luma.original_dims(),
            nir.original_dims()
        )));
    }
    if map.dims() != luma.original_dims() {
        return Err(Error::DimensionMismatch {
            expected: luma.original_dims(),
            found: map.dims(),
        });
    }
    Ok(())
}

/// Fuses two pyramids and returns `z` after every level, coarsest first.
pub fn fuse_pyramid_levels(
    luma: &HaarPyramid,
    nir: &HaarPyramid,
    map: &HazeWeightMap,
    cfg: &FusionConfig,
) -> Result<Vec<FusedLevelImage>> {
    cfg.validate()?;
    check_pyramids(luma, nir, map)?;

    let n = luma.n_levels();
    let mut trace: Vec<FusedLevelImage> = Vec::with_capacity(n);
    for k in (1..=n).rev() {
        let (l, r) = (luma.level(k), nir.level(k));
        let weights = downsample_map(map, k)?;
        let fused_approx = fuse_approx(&l.approx, &r.approx, weights.plane())?;
        let approx = match trace.last() {
            None => fused_approx,
            Some(prev) => histogram_match(&prev.z, &fused_approx, cfg.histogram_bins)?,
        };
        let coeffs = CoefficientSet {
            approx,
            horizontal: fuse_detail(&l.horizontal, &r.horizontal)?,
            vertical: fuse_detail(&l.vertical, &r.vertical)?,
            diagonal: fuse_detail(&l.diagonal, &r.diagonal)?,
        };
        let z = idwt2_level(&coeffs, luma.input_dims(k))?;
        trace.push(FusedLevelImage { z, level: k });
    }
    Ok(trace)
}

/// Fuses two pyramids into a full-resolution plane.
pub fn fuse_pyramids(
    luma: &HaarPyramid,
    nir: &HaarPyramid,
    map: &HazeWeightMap,
    cfg: &FusionConfig,
) -> Result<Plane> {
    let mut trace = fuse_pyramid_levels(luma, nir, map, cfg)?;
    Ok(trace.pop().expect("at least one level").z)
}

/// Dehazes a registered pair with the haze map derived from its blue channel.
pub fn dehaze(pair: &ImagePair, cfg: &FusionConfig) -> Result<RgbImage> {
    let map = compute_haze_map(pair.rgb(), cfg.haze_map_mode);
    dehaze_with_map(pair, &map, cfg)
}

/// Dehazes a registered pair with a caller-supplied haze map.
pub fn dehaze_with_map(
    pair: &ImagePair,
    map: &HazeWeightMap,
    cfg: &FusionConfig,
) -> Result<RgbImage> {
    ycbcr_to_rgb(&dehaze_ycbcr(pair, map, cfg)?)
}

/// The dehazed image in YCbCr, before conversion back to RGB and clamping.
/// Chroma planes are the input's, untouched.
pub fn dehaze_ycbcr(pair: &ImagePair, map: &HazeWeightMap, cfg: &FusionConfig) -> Result<YCbCrImage> {
    cfg.validate()?;
    let ycc = rgb_to_ycbcr(pair.rgb());
    let luma = ycc.y();
    let luma_pyr = decompose(luma, cfg.n_levels)?;
    let nir_pyr = decompose(pair.nir().plane(), cfg.n_levels)?;
    let z = fuse_pyramids(&luma_pyr, &nir_pyr, map, cfg)?;
    let matched = histogram_match(&z, luma, cfg.histogram_bins)?;
    let y_out = fuse_approx(luma, &matched, map.plane())?;
    ycc.with_luma(y_out)
}
