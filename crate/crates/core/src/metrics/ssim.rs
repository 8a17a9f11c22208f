use crate::error::{Error, Result};
use crate::plane::Plane;

pub const WINDOW: usize = 8;
const K1: f64 = 0.01;
const K2: f64 = 0.03;
/// Dynamic range of `[0, 1]` samples.
const RANGE: f64 = 1.0;

/// Mean SSIM over every `8x8` window (stride 1) with uniform weights.
pub fn ssim(i: &Plane, f: &Plane) -> Result<f64> {
    i.ensure_same_dims(f)?;
    let (w, h) = i.dims();
    if w < WINDOW || h < WINDOW {
        return Err(Error::TooSmall {
            min: (WINDOW, WINDOW),
            found: (w, h),
        });
    }
    let c1 = (K1 * RANGE).powi(2);
    let c2 = (K2 * RANGE).powi(2);
    let n = (WINDOW * WINDOW) as f64;

    let x = i.as_slice();
    let y = f.as_slice();
    let sx = window_sums(w, h, |k| x[k]);
    let sy = window_sums(w, h, |k| y[k]);
    let sxx = window_sums(w, h, |k| x[k] * x[k]);
    let syy = window_sums(w, h, |k| y[k] * y[k]);
    let sxy = window_sums(w, h, |k| x[k] * y[k]);

    let mut total = 0.0;
    for k in 0..sx.len() {
        let mx = sx[k] / n;
        let my = sy[k] / n;
        let vx = sxx[k] / n - mx * mx;
        let vy = syy[k] / n - my * my;
        let cov = sxy[k] / n - mx * my;
        total += ((2.0 * mx * my + c1) * (2.0 * cov + c2))
            / ((mx * mx + my * my + c1) * (vx + vy + c2));
    }
    Ok(total / sx.len() as f64)
}

/// Sums of `value(k)` over every `WINDOW x WINDOW` window, row-major over
/// window origins. Each sum is formed directly, without running subtraction.
fn window_sums(w: usize, h: usize, value: impl Fn(usize) -> f64) -> Vec<f64> {
    let ow = w - WINDOW + 1;
    let oh = h - WINDOW + 1;
    let mut rows = vec![0.0; ow * h];
    for y in 0..h {
        for x in 0..ow {
            let base = y * w + x;
            rows[y * ow + x] = (0..WINDOW).map(|d| value(base + d)).sum();
        }
    }
    let mut out = vec![0.0; ow * oh];
    for y in 0..oh {
        for x in 0..ow {
            out[y * ow + x] = (0..WINDOW).map(|d| rows[(y + d) * ow + x]).sum();
        }
    }
    out
}
