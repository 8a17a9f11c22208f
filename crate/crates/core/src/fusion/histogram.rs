use crate::error::{Error, Result};
use crate::plane::Plane;

/// Equal-width histogram over a plane's own `[min, max]`, stored as a
/// normalized cumulative distribution.
struct Cdf {
    lo: f64,
    width: f64,
    cumulative: Vec<f64>,
}

impl Cdf {
    /// `None` when the plane is constant.
    fn build(plane: &Plane, bins: usize) -> Option<Cdf> {
        let (lo, hi) = plane.min_max();
        if hi <= lo {
            return None;
        }
        let width = (hi - lo) / bins as f64;
        let mut counts = vec![0usize; bins];
        for &v in plane.as_slice() {
            counts[bin_of(v, lo, width, bins).0] += 1;
        }
        let total = plane.len() as f64;
        let mut acc = 0usize;
        let cumulative = counts
            .iter()
            .map(|&c| {
                acc += c;
                acc as f64 / total
            })
            .collect();
        Some(Cdf {
            lo,
            width,
            cumulative,
        })
    }

    fn bins(&self) -> usize {
        self.cumulative.len()
    }

    fn below(&self, bin: usize) -> f64 {
        if bin == 0 {
            0.0
        } else {
            self.cumulative[bin - 1]
        }
    }

    /// Piecewise-linear CDF evaluated at `v`.
    fn eval(&self, v: f64) -> f64 {
        let (bin, frac) = bin_of(v, self.lo, self.width, self.bins());
        let below = self.below(bin);
        below + (self.cumulative[bin] - below) * frac
    }

    /// Smallest value whose piecewise-linear CDF reaches `u`.
    fn inverse(&self, u: f64) -> f64 {
        let bins = self.bins();
        let bin = self
            .cumulative
            .partition_point(|&c| c < u)
            .min(bins - 1);
        let below = self.below(bin);
        let mass = self.cumulative[bin] - below;
        let frac = if mass > 0.0 {
            ((u - below) / mass).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let hi = self.lo + self.width * bins as f64;
        (self.lo + self.width * (bin as f64 + frac)).clamp(self.lo, hi)
    }
}

/// Bin index and position within the bin, the top edge folded into the last bin.
#[inline]
fn bin_of(v: f64, lo: f64, width: f64, bins: usize) -> (usize, f64) {
    let t = ((v - lo) / width).max(0.0);
    let bin = (t.floor() as usize).min(bins - 1);
    (bin, (t - bin as f64).clamp(0.0, 1.0))
}

/// Remaps `source` so its value distribution follows `reference`.
///
/// Both planes are binned into `bins` equal-width bins over their own range.
/// Each source value goes through the source CDF and then through the inverse
/// of the reference CDF, both interpolated linearly inside a bin. Outputs stay
/// within `[min(reference), max(reference)]`. A constant reference yields that
/// constant; a constant source carries all its mass at CDF 1 and maps to the
/// top of the reference range.
pub fn histogram_match(source: &Plane, reference: &Plane, bins: usize) -> Result<Plane> {
    if bins < 2 {
        return Err(Error::InvalidConfig(format!(
            "histogram needs at least 2 bins, got {bins}"
        )));
    }
    if source.is_empty() || reference.is_empty() {
        return Err(Error::EmptyInput);
    }
    let Some(target) = Cdf::build(reference, bins) else {
        let (value, _) = reference.min_max();
        return Ok(Plane::filled(source.width(), source.height(), value));
    };
    let Some(own) = Cdf::build(source, bins) else {
        return Ok(Plane::filled(
            source.width(),
            source.height(),
            target.inverse(1.0),
        ));
    };
    Ok(source.map(|v| target.inverse(own.eval(v))))
}
