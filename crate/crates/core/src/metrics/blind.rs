//! Blind assessment of contrast restoration.
//!
//! A pixel is a visible edge when its Sobel gradient magnitude exceeds 5% of
//! the `[0, 1]` dynamic range. The Sobel response is scaled by 1/8 so that a
//! ramp of slope `s` per pixel has gradient magnitude `s`. Borders replicate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plane::Plane;

pub const VISIBILITY_THRESHOLD: f64 = 0.05;
const RATIO_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlindAssessment {
    /// Rate of newly visible edges, `(n_r - n_o) / n_o`.
    pub e: f64,
    /// Percentage of pixels saturated (0 or 1) in the restored image but not
    /// in the original.
    pub sigma_sat: f64,
    /// Geometric mean of restored/original gradient ratios over the restored
    /// image's visible edges; 0 when the restored image has none.
    pub r_bar: f64,
}

pub fn sobel_magnitude(plane: &Plane) -> Plane {
    let (w, h) = plane.dims();
    let at = |x: isize, y: isize| {
        let xc = x.clamp(0, w as isize - 1) as usize;
        let yc = y.clamp(0, h as isize - 1) as usize;
        plane.get(xc, yc)
    };
    Plane::from_fn(w, h, |x, y| {
        let (x, y) = (x as isize, y as isize);
        let gx = (at(x + 1, y - 1) + 2.0 * at(x + 1, y) + at(x + 1, y + 1))
            - (at(x - 1, y - 1) + 2.0 * at(x - 1, y) + at(x - 1, y + 1));
        let gy = (at(x - 1, y + 1) + 2.0 * at(x, y + 1) + at(x + 1, y + 1))
            - (at(x - 1, y - 1) + 2.0 * at(x, y - 1) + at(x + 1, y - 1));
        0.125 * gx.hypot(gy)
    })
}

#[inline]
fn saturated(v: f64) -> bool {
    v <= 0.0 || v >= 1.0
}

pub fn blind_assessment(original: &Plane, restored: &Plane) -> Result<BlindAssessment> {
    original.ensure_same_dims(restored)?;
    if original.is_empty() {
        return Err(Error::EmptyInput);
    }
    let go = sobel_magnitude(original);
    let gr = sobel_magnitude(restored);

    let n_o = go
        .as_slice()
        .iter()
        .filter(|&&g| g > VISIBILITY_THRESHOLD)
        .count();
    if n_o == 0 {
        return Err(Error::NoVisibleEdges);
    }

    let mut n_r = 0usize;
    let mut log_sum = 0.0;
    for (&r, &o) in gr.as_slice().iter().zip(go.as_slice()) {
        if r > VISIBILITY_THRESHOLD {
            n_r += 1;
            log_sum += (r / o.max(RATIO_EPS)).ln();
        }
    }
    let r_bar = if n_r == 0 {
        0.0
    } else {
        (log_sum / n_r as f64).exp()
    };

    let newly_saturated = original
        .as_slice()
        .iter()
        .zip(restored.as_slice())
        .filter(|&(&o, &r)| saturated(r) && !saturated(o))
        .count();

    Ok(BlindAssessment {
        e: (n_r as f64 - n_o as f64) / n_o as f64,
        sigma_sat: 100.0 * newly_saturated as f64 / original.len() as f64,
        r_bar,
    })
}
