//! Deterministic inputs for the benchmarks.

use hazefuse::{ImagePair, NirImage, Plane, RgbImage};

/// A smooth, textured plane in `[0, 1]`; `phase` varies the pattern.
pub fn textured_plane(width: usize, height: usize, phase: f64) -> Plane {
    Plane::from_fn(width, height, |x, y| {
        let (fx, fy) = (x as f64, y as f64);
        let v = 0.5
            + 0.25 * (0.031 * fx + phase).sin() * (0.017 * fy).cos()
            + 0.15 * (0.21 * fx + 0.13 * fy + 2.0 * phase).sin();
        v.clamp(0.0, 1.0)
    })
}

pub fn textured_pair(width: usize, height: usize) -> ImagePair {
    let rgb = RgbImage::new(
        textured_plane(width, height, 0.0),
        textured_plane(width, height, 0.7),
        textured_plane(width, height, 1.3),
    )
    .expect("planes share dimensions");
    let nir = NirImage::new(textured_plane(width, height, 2.1)).expect("plane in range");
    ImagePair::new(rgb, nir).expect("registered")
}
