//! Image quality measures for judging a dehazed result.
//!
//! Full-reference measures ([`correlation_coefficient`], [`ssim`]) compare the
//! restored plane to the original; [`entropy`], [`std_dev`] and
//! [`spatial_frequency`] describe one plane; [`blind_assessment`] scores the
//! change in visible edges and contrast between the two.

mod blind;
mod ssim;

pub use blind::{blind_assessment, sobel_magnitude, BlindAssessment, VISIBILITY_THRESHOLD};
pub use ssim::{ssim, WINDOW as SSIM_WINDOW};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plane::Plane;

const ENTROPY_BINS: usize = 256;

/// Shannon entropy in bits of a 256-bin histogram over `[0, 1]`.
pub fn entropy(img: &Plane) -> f64 {
    if img.is_empty() {
        return 0.0;
    }
    let mut counts = [0usize; ENTROPY_BINS];
    for &v in img.as_slice() {
        let bin = ((v.clamp(0.0, 1.0) * ENTROPY_BINS as f64) as usize).min(ENTROPY_BINS - 1);
        counts[bin] += 1;
    }
    let total = img.len() as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum::<f64>()
        .max(0.0)
}

/// Population standard deviation.
pub fn std_dev(img: &Plane) -> f64 {
    if img.is_empty() {
        return 0.0;
    }
    let mean = img.mean();
    let var = img
        .as_slice()
        .iter()
        .map(|&v| (v - mean) * (v - mean))
        .sum::<f64>()
        / img.len() as f64;
    var.sqrt()
}

/// Pearson correlation of two planes over all pixels.
pub fn correlation_coefficient(i: &Plane, f: &Plane) -> Result<f64> {
    i.ensure_same_dims(f)?;
    if i.is_empty() {
        return Err(Error::EmptyInput);
    }
    let (mi, mf) = (i.mean(), f.mean());
    let mut cross = 0.0;
    let mut ii = 0.0;
    let mut ff = 0.0;
    for (&a, &b) in i.as_slice().iter().zip(f.as_slice()) {
        let (da, db) = (a - mi, b - mf);
        cross += da * db;
        ii += da * da;
        ff += db * db;
    }
    if ii == 0.0 || ff == 0.0 {
        return Err(Error::DegenerateInput(
            "correlation is undefined for a constant image",
        ));
    }
    Ok((cross / (ii * ff).sqrt()).clamp(-1.0, 1.0))
}

/// `sqrt(RF^2 + CF^2)` where RF and CF are RMS horizontal and vertical
/// neighbour differences, both normalized by the full pixel count.
pub fn spatial_frequency(f: &Plane) -> Result<f64> {
    let (w, h) = f.dims();
    if w < 2 || h < 2 {
        return Err(Error::TooSmall {
            min: (2, 2),
            found: (w, h),
        });
    }
    let mn = (w * h) as f64;
    let mut row_sq = 0.0;
    for y in 0..h {
        let row = f.row(y);
        row_sq += row.windows(2).map(|p| (p[1] - p[0]).powi(2)).sum::<f64>();
    }
    let mut col_sq = 0.0;
    for y in 1..h {
        let (above, here) = (f.row(y - 1), f.row(y));
        col_sq += here
            .iter()
            .zip(above)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>();
    }
    let rf2 = row_sq / mn;
    let cf2 = col_sq / mn;
    Ok((rf2 + cf2).sqrt())
}

/// All quality measures for one (original, restored) pair of luma planes.
/// Single-image measures describe the restored plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub entropy: f64,
    pub std_dev: f64,
    pub ssim: f64,
    pub cc: f64,
    pub sf: f64,
    pub e: f64,
    pub sigma_sat: f64,
    pub r_bar: f64,
}

impl MetricsReport {
    pub fn compute(original: &Plane, restored: &Plane) -> Result<Self> {
        original.ensure_same_dims(restored)?;
        let blind = blind_assessment(original, restored)?;
        Ok(Self {
            entropy: entropy(restored),
            std_dev: std_dev(restored),
            ssim: ssim(original, restored)?,
            cc: correlation_coefficient(original, restored)?,
            sf: spatial_frequency(restored)?,
            e: blind.e,
            sigma_sat: blind.sigma_sat,
            r_bar: blind.r_bar,
        })
    }
}
