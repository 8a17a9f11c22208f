//! Orthonormal 2-D Haar transform and the multi-level pyramid built from it.
//!
//! One analysis level maps each 2x2 block `[[p, q], [r, s]]` to
//!
//! ```text
//! a = (p + q + r + s) / 2      approximation
//! h = (p + q - r - s) / 2      horizontal detail (column high-pass)
//! v = (p - q + r - s) / 2      vertical detail (row high-pass)
//! d = (p - q - r + s) / 2      diagonal detail
//! ```
//!
//! which is the separable row/column Haar pair with `1/sqrt(2)` scaling, so
//! energy is preserved. Odd dimensions are replicate-padded to even; the
//! original size is kept so synthesis can crop back exactly.

use crate::error::{Error, Result};
use crate::plane::Plane;

/// One level of a 2-D Haar decomposition. All four grids share dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSet {
    pub approx: Plane,
    pub horizontal: Plane,
    pub vertical: Plane,
    pub diagonal: Plane,
}

impl CoefficientSet {
    pub fn dims(&self) -> (usize, usize) {
        self.approx.dims()
    }

    /// Checks that the four grids agree and returns their shared dimensions.
    pub fn validate(&self) -> Result<(usize, usize)> {
        for band in [&self.horizontal, &self.vertical, &self.diagonal] {
            self.approx.ensure_same_dims(band)?;
        }
        Ok(self.approx.dims())
    }

    pub fn details(&self) -> [&Plane; 3] {
        [&self.horizontal, &self.vertical, &self.diagonal]
    }
}

pub fn dwt2_level(plane: &Plane) -> Result<CoefficientSet> {
    if plane.is_empty() {
        return Err(Error::EmptyInput);
    }
    let padded = plane.pad_even();
    let (w, h) = (padded.width() / 2, padded.height() / 2);
    let n = w * h;
    let mut a = Vec::with_capacity(n);
    let mut hz = Vec::with_capacity(n);
    let mut vt = Vec::with_capacity(n);
    let mut dg = Vec::with_capacity(n);
    for y in 0..h {
        let top = padded.row(2 * y);
        let bottom = padded.row(2 * y + 1);
        for x in 0..w {
            let (p, q) = (top[2 * x], top[2 * x + 1]);
            let (r, s) = (bottom[2 * x], bottom[2 * x + 1]);
            a.push(0.5 * (p + q + r + s));
            hz.push(0.5 * (p + q - r - s));
            vt.push(0.5 * (p - q + r - s));
            dg.push(0.5 * (p - q - r + s));
        }
    }
    Ok(CoefficientSet {
        approx: Plane::new(w, h, a)?,
        horizontal: Plane::new(w, h, hz)?,
        vertical: Plane::new(w, h, vt)?,
        diagonal: Plane::new(w, h, dg)?,
    })
}

/// Inverse of [`dwt2_level`], cropped to `target` = `(width, height)`.
///
/// Each target dimension must be `2n` or `2n - 1` for coefficient dimension `n`.
pub fn idwt2_level(coeffs: &CoefficientSet, target: (usize, usize)) -> Result<Plane> {
    let (w, h) = coeffs.validate()?;
    let fits = |t: usize, n: usize| t <= 2 * n && t + 1 >= 2 * n;
    if w == 0 || h == 0 || !fits(target.0, w) || !fits(target.1, h) {
        return Err(Error::DimensionMismatch {
            expected: (2 * w, 2 * h),
            found: target,
        });
    }
    let (a, hz, vt, dg) = (
        coeffs.approx.as_slice(),
        coeffs.horizontal.as_slice(),
        coeffs.vertical.as_slice(),
        coeffs.diagonal.as_slice(),
    );
    let (tw, th) = target;
    let mut out = Plane::zeros(tw, th);
    let buf = out.as_mut_slice();
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            let (a, hz, vt, dg) = (a[i], hz[i], vt[i], dg[i]);
            let block = [
                (0, 0, 0.5 * (a + hz + vt + dg)),
                (1, 0, 0.5 * (a + hz - vt - dg)),
                (0, 1, 0.5 * (a - hz + vt - dg)),
                (1, 1, 0.5 * (a - hz - vt + dg)),
            ];
            for (dx, dy, value) in block {
                let (px, py) = (2 * x + dx, 2 * y + dy);
                if px < tw && py < th {
                    buf[py * tw + px] = value;
                }
            }
        }
    }
    Ok(out)
}

/// Coefficient sets ordered finest (level 1) to coarsest (level N), together
/// with the unpadded size of the plane each level was computed from.
#[derive(Clone, Debug, PartialEq)]
pub struct HaarPyramid {
    levels: Vec<CoefficientSet>,
    input_dims: Vec<(usize, usize)>,
}

impl HaarPyramid {
    /// Assembles a pyramid from parts without checking consistency;
    /// [`reconstruct`] and [`HaarPyramid::validate`] do that.
    pub fn from_parts(levels: Vec<CoefficientSet>, input_dims: Vec<(usize, usize)>) -> Self {
        Self { levels, input_dims }
    }

    pub fn n_levels(&self) -> usize {
        self.levels.len()
    }

    /// Level `k` (1-based, 1 = finest).
    pub fn level(&self, k: usize) -> &CoefficientSet {
        &self.levels[k - 1]
    }

    pub fn levels(&self) -> &[CoefficientSet] {
        &self.levels
    }

    pub fn level_mut(&mut self, k: usize) -> &mut CoefficientSet {
        &mut self.levels[k - 1]
    }

    /// Unpadded dimensions of the plane that level `k` decomposed. Level 1's
    /// input is the original plane.
    pub fn input_dims(&self, k: usize) -> (usize, usize) {
        self.input_dims[k - 1]
    }

    pub fn original_dims(&self) -> (usize, usize) {
        self.input_dims[0]
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels.is_empty() {
            return Err(Error::CorruptPyramid("pyramid has no levels".into()));
        }
        if self.levels.len() != self.input_dims.len() {
            return Err(Error::CorruptPyramid(format!(
                "{} levels but {} recorded sizes",
                self.levels.len(),
                self.input_dims.len()
            )));
        }
        for (k, (set, &(iw, ih))) in self.levels.iter().zip(&self.input_dims).enumerate() {
            let level = k + 1;
            let (w, h) = set
                .validate()
                .map_err(|_| Error::CorruptPyramid(format!("level {level}: sub-band sizes differ")))?;
            if (w, h) != (iw.div_ceil(2), ih.div_ceil(2)) {
                return Err(Error::CorruptPyramid(format!(
                    "level {level}: {w}x{h} coefficients cannot come from a {iw}x{ih} input"
                )));
            }
            if level < self.levels.len() && self.input_dims[level] != (w, h) {
                return Err(Error::CorruptPyramid(format!(
                    "level {} input {:?} does not match level {level} approximation {:?}",
                    level + 1,
                    self.input_dims[level],
                    (w, h)
                )));
            }
        }
        Ok(())
    }
}

/// Runs `n_levels` analysis steps, each on the previous approximation.
///
/// Fails with [`Error::TooManyLevels`] if a level would start from a 1x1
/// approximation, where no further detail can be separated.
pub fn decompose(plane: &Plane, n_levels: usize) -> Result<HaarPyramid> {
    if n_levels == 0 {
        return Err(Error::InvalidConfig("decomposition needs at least one level".into()));
    }
    if plane.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut levels = Vec::with_capacity(n_levels);
    let mut input_dims = Vec::with_capacity(n_levels);
    let mut current = plane.clone();
    for level in 1..=n_levels {
        if level > 1 && current.dims() == (1, 1) {
            return Err(Error::TooManyLevels {
                dims: plane.dims(),
                requested: n_levels,
                level,
            });
        }
        input_dims.push(current.dims());
        let set = dwt2_level(&current)?;
        current = set.approx.clone();
        levels.push(set);
    }
    Ok(HaarPyramid { levels, input_dims })
}

pub fn reconstruct(pyramid: &HaarPyramid) -> Result<Plane> {
    pyramid.validate()?;
    let n = pyramid.n_levels();
    let mut approx = pyramid.level(n).approx.clone();
    for k in (1..=n).rev() {
        let set = pyramid.level(k);
        let coeffs = CoefficientSet {
            approx,
            horizontal: set.horizontal.clone(),
            vertical: set.vertical.clone(),
            diagonal: set.diagonal.clone(),
        };
        approx = idwt2_level(&coeffs, pyramid.input_dims(k))?;
    }
    Ok(approx)
}
