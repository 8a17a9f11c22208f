//! Synthetic hazy RGB + NIR pairs for when no real dataset is available.
//!
//! A clear scene (sky, a ridge line, textured terrain with objects) is
//! rendered with depth-dependent haze whose density falls with wavelength:
//! blue is veiled most, NIR least.

use std::path::{Path, PathBuf};

use hazefuse::image_io::save_plane;
use hazefuse::{save_image, BitDepth, Plane, RgbImage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Extinction per unit depth for R, G, B, NIR.
const EXTINCTION: [f64; 4] = [1.1, 1.5, 2.1, 0.2];
const AIRLIGHT: f64 = 0.88;

pub struct Scene {
    pub rgb: RgbImage,
    pub nir: Plane,
}

struct Blob {
    cx: f64,
    cy: f64,
    rx: f64,
    ry: f64,
    color: [f64; 3],
    nir: f64,
}

pub fn hazy_scene(width: usize, height: usize, seed: u64) -> Scene {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (w, h) = (width as f64, height as f64);
    let horizon = h * rng.gen_range(0.25..0.4);
    let ridge_amp = h * rng.gen_range(0.04..0.1);
    let ridge_freq = rng.gen_range(2.0..5.0) * std::f64::consts::TAU / w;
    let ridge_phase = rng.gen_range(0.0..6.0);
    let ground = [
        rng.gen_range(0.15..0.35),
        rng.gen_range(0.25..0.45),
        rng.gen_range(0.1..0.25),
    ];
    let blobs: Vec<Blob> = (0..40)
        .map(|_| Blob {
            cx: rng.gen_range(0.0..w),
            cy: rng.gen_range(horizon..h),
            rx: rng.gen_range(0.01..0.06) * w,
            ry: rng.gen_range(0.01..0.05) * h,
            color: [rng.gen_range(0.05..0.8), rng.gen_range(0.05..0.8), rng.gen_range(0.05..0.8)],
            nir: rng.gen_range(0.2..0.9),
        })
        .collect();
    let tex: [(f64, f64, f64); 3] = std::array::from_fn(|_| {
        (rng.gen_range(0.05..0.5), rng.gen_range(0.05..0.5), rng.gen_range(0.0..6.0))
    });
    let grain: Vec<f64> = (0..width * height).map(|_| rng.gen_range(-0.03..0.03)).collect();

    let mut planes: [Vec<f64>; 4] = std::array::from_fn(|_| Vec::with_capacity(width * height));
    for y in 0..height {
        for x in 0..width {
            let (fx, fy) = (x as f64, y as f64);
            let ridge = horizon + ridge_amp * (ridge_freq * fx + ridge_phase).sin();
            let (clear, clear_nir, depth) = if fy < ridge {
                // Sky: bright, flat, very far.
                let t = fy / ridge.max(1.0);
                ([0.55 + 0.1 * t, 0.65 + 0.1 * t, 0.85], 0.35, 2.0)
            } else {
                let along = (fy - ridge) / (h - ridge).max(1.0);
                let depth = 1.6 * (1.0 - along).powf(1.5) + 0.05;
                let texture: f64 = tex
                    .iter()
                    .map(|&(a, b, p)| (a * fx + b * fy + p).sin())
                    .sum::<f64>()
                    * 0.06;
                let mut c = ground;
                let mut n = 0.55;
                for blob in &blobs {
                    let dx = (fx - blob.cx) / blob.rx;
                    let dy = (fy - blob.cy) / blob.ry;
                    if dx * dx + dy * dy <= 1.0 {
                        c = blob.color;
                        n = blob.nir;
                    }
                }
                let g = grain[y * width + x];
                (
                    [c[0] + texture + g, c[1] + texture + g, c[2] + texture + g],
                    n + texture + g,
                    depth,
                )
            };
            for (c, &value) in clear.iter().enumerate() {
                let t = (-EXTINCTION[c] * depth).exp();
                planes[c].push((value * t + AIRLIGHT * (1.0 - t)).clamp(0.02, 0.98));
            }
            let t = (-EXTINCTION[3] * depth).exp();
            planes[3].push((clear_nir * t + AIRLIGHT * (1.0 - t)).clamp(0.02, 0.98));
        }
    }
    let [r, g, b, n] = planes.map(|data| Plane::new(width, height, data).unwrap());
    Scene {
        rgb: RgbImage::new(r, g, b).unwrap(),
        nir: n,
    }
}

pub struct PairFiles {
    pub label: String,
    pub rgb: PathBuf,
    pub nir: PathBuf,
}

/// Renders `count` scenes into `dir` as 8-bit PNGs.
pub fn write_scenes(dir: &Path, count: usize, width: usize, height: usize) -> Vec<PairFiles> {
    (0..count)
        .map(|i| {
            let scene = hazy_scene(width, height, 1000 + i as u64);
            let label = format!("synthetic/{i:04}");
            let rgb = dir.join(format!("{i:04}_rgb.png"));
            let nir = dir.join(format!("{i:04}_nir.png"));
            save_image(&scene.rgb, &rgb, BitDepth::Eight).unwrap();
            save_plane(&scene.nir, &nir, BitDepth::Eight).unwrap();
            PairFiles { label, rgb, nir }
        })
        .collect()
}

/// Writes a batch manifest for `pairs`, outputs going to `out_dir`.
pub fn write_manifest(path: &Path, pairs: &[PairFiles], out_dir: &Path) {
    let mut text = String::from("rgb,nir,out,label\n");
    for (i, p) in pairs.iter().enumerate() {
        text.push_str(&format!(
            "{},{},{},{}\n",
            p.rgb.display(),
            p.nir.display(),
            out_dir.join(format!("{i:04}_out.png")).display(),
            p.label
        ));
    }
    std::fs::write(path, text).unwrap();
}
