//! Luma/chroma split and the blue-channel haze-weight map.
//!
//! Full-range BT.601 with chroma offset to 0.5:
//!
//! ```text
//! Y  = 0.299 R + 0.587 G + 0.114 B
//! Cb = 0.564 (B - Y) + 0.5
//! Cr = 0.713 (R - Y) + 0.5
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image_io::RgbImage;
use crate::plane::Plane;

const KR: f64 = 0.299;
const KG: f64 = 0.587;
const KB: f64 = 0.114;
const CB_SCALE: f64 = 0.564;
const CR_SCALE: f64 = 0.713;

#[derive(Clone, Debug, PartialEq)]
pub struct YCbCrImage {
    y: Plane,
    cb: Plane,
    cr: Plane,
}

impl YCbCrImage {
    pub fn new(y: Plane, cb: Plane, cr: Plane) -> Result<Self> {
        y.ensure_same_dims(&cb)?;
        y.ensure_same_dims(&cr)?;
        Ok(Self { y, cb, cr })
    }

    pub fn y(&self) -> &Plane {
        &self.y
    }

    pub fn cb(&self) -> &Plane {
        &self.cb
    }

    pub fn cr(&self) -> &Plane {
        &self.cr
    }

    /// Swap in a new luma plane, keeping chroma.
    pub fn with_luma(&self, y: Plane) -> Result<Self> {
        Self::new(y, self.cb.clone(), self.cr.clone())
    }
}

#[inline]
pub fn luma(r: f64, g: f64, b: f64) -> f64 {
    KR * r + KG * g + KB * b
}

pub fn rgb_to_ycbcr(img: &RgbImage) -> YCbCrImage {
    let (w, h) = img.dims();
    let n = w * h;
    let (r, g, b) = (img.r().as_slice(), img.g().as_slice(), img.b().as_slice());
    let mut y = Vec::with_capacity(n);
    let mut cb = Vec::with_capacity(n);
    let mut cr = Vec::with_capacity(n);
    for i in 0..n {
        let yy = luma(r[i], g[i], b[i]);
        y.push(yy);
        cb.push(CB_SCALE * (b[i] - yy) + 0.5);
        cr.push(CR_SCALE * (r[i] - yy) + 0.5);
    }
    YCbCrImage {
        y: Plane::new(w, h, y).unwrap(),
        cb: Plane::new(w, h, cb).unwrap(),
        cr: Plane::new(w, h, cr).unwrap(),
    }
}

/// Inverse of [`rgb_to_ycbcr`] without clamping; returns `(r, g, b)`.
pub fn ycbcr_to_rgb_unclamped(img: &YCbCrImage) -> (Plane, Plane, Plane) {
    let (w, h) = img.y.dims();
    let n = w * h;
    let (y, cb, cr) = (img.y.as_slice(), img.cb.as_slice(), img.cr.as_slice());
    let mut r = Vec::with_capacity(n);
    let mut g = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for i in 0..n {
        let rr = y[i] + (cr[i] - 0.5) / CR_SCALE;
        let bb = y[i] + (cb[i] - 0.5) / CB_SCALE;
        r.push(rr);
        g.push((y[i] - KR * rr - KB * bb) / KG);
        b.push(bb);
    }
    (
        Plane::new(w, h, r).unwrap(),
        Plane::new(w, h, g).unwrap(),
        Plane::new(w, h, b).unwrap(),
    )
}

/// Inverse of [`rgb_to_ycbcr`], clamped into `[0, 1]`.
pub fn ycbcr_to_rgb(img: &YCbCrImage) -> Result<RgbImage> {
    let (r, g, b) = ycbcr_to_rgb_unclamped(img);
    RgbImage::new(r.clamp01(), g.clamp01(), b.clamp01())
}

/// How the blue channel is turned into weights.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HazeMapMode {
    /// The normalized blue channel is used as is.
    #[default]
    Scale,
    /// The blue channel is stretched so its minimum maps to 0 and maximum to 1.
    MinMax,
}

impl fmt::Display for HazeMapMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HazeMapMode::Scale => "scale",
            HazeMapMode::MinMax => "minmax",
        })
    }
}

impl FromStr for HazeMapMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "scale" => Ok(HazeMapMode::Scale),
            "minmax" => Ok(HazeMapMode::MinMax),
            other => Err(Error::InvalidConfig(format!(
                "unknown haze map mode {other:?} (expected scale or minmax)"
            ))),
        }
    }
}

/// Per-pixel weights in `[0, 1]`; high values favour the NIR side of a blend.
#[derive(Clone, Debug, PartialEq)]
pub struct HazeWeightMap {
    p: Plane,
    mode: HazeMapMode,
}

impl HazeWeightMap {
    pub fn new(p: Plane, mode: HazeMapMode) -> Result<Self> {
        if let Some(index) = p.as_slice().iter().position(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::OutOfRange {
                index,
                value: p.as_slice()[index],
            });
        }
        Ok(Self { p, mode })
    }

    /// A map holding the same weight everywhere.
    pub fn uniform(width: usize, height: usize, weight: f64) -> Result<Self> {
        Self::new(Plane::filled(width, height, weight), HazeMapMode::Scale)
    }

    pub fn plane(&self) -> &Plane {
        &self.p
    }

    pub fn mode(&self) -> HazeMapMode {
        self.mode
    }

    pub fn dims(&self) -> (usize, usize) {
        self.p.dims()
    }
}

pub fn compute_haze_map(img: &RgbImage, mode: HazeMapMode) -> HazeWeightMap {
    let blue = img.b();
    let p = match mode {
        HazeMapMode::Scale => blue.clone(),
        HazeMapMode::MinMax => {
            let (lo, hi) = blue.min_max();
            if hi > lo {
                let range = hi - lo;
                blue.map(|v| ((v - lo) / range).clamp(0.0, 1.0))
            } else {
                Plane::filled(blue.width(), blue.height(), 0.5)
            }
        }
    };
    HazeWeightMap { p, mode }
}

/// Box-averages the map `level` times so it lines up with the level-`level`
/// coefficient grids of a pyramid built from a plane of the map's size.
///
/// Odd dimensions are replicate-padded before each pooling step, mirroring the
/// wavelet transform.
pub fn downsample_map(map: &HazeWeightMap, level: usize) -> Result<HazeWeightMap> {
    if level == 0 {
        return Err(Error::InvalidConfig("map level must be at least 1".into()));
    }
    if map.p.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut p = map.p.clone();
    for _ in 0..level {
        p = box_pool(&p);
    }
    Ok(HazeWeightMap { p, mode: map.mode })
}

fn box_pool(plane: &Plane) -> Plane {
    let padded = plane.pad_even();
    let (w, h) = (padded.width() / 2, padded.height() / 2);
    Plane::from_fn(w, h, |x, y| {
        let (x2, y2) = (2 * x, 2 * y);
        let sum = padded.get(x2, y2)
            + padded.get(x2 + 1, y2)
            + padded.get(x2, y2 + 1)
            + padded.get(x2 + 1, y2 + 1);
        // Keep rounding from drifting a weight past the ends of [0, 1].
        (0.25 * sum).clamp(0.0, 1.0)
    })
}
