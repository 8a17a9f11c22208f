//! End-to-end properties of `dehaze` on small synthetic pairs.

use hazefuse::colorspace::compute_haze_map;
use hazefuse::fusion::fuse_pyramid_levels;
use hazefuse::image_io::requantize;
use hazefuse::{
    decompose, dehaze, dehaze_with_map, dehaze_ycbcr, rgb_to_ycbcr, BitDepth, FusionConfig,
    HazeMapMode, HazeWeightMap, ImagePair, NirImage, Plane, RgbImage,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn smooth_plane(w: usize, h: usize, rng: &mut ChaCha8Rng) -> Plane {
    let (fx, fy, ph) = (rng.gen_range(0.05..0.4), rng.gen_range(0.05..0.4), rng.gen_range(0.0..6.0));
    let noise: Vec<f64> = (0..w * h).map(|_| rng.gen_range(-0.05..0.05)).collect();
    Plane::from_fn(w, h, |x, y| {
        (0.5 + 0.35 * (fx * x as f64 + ph).sin() * (fy * y as f64).cos() + noise[y * w + x])
            .clamp(0.0, 1.0)
    })
}

fn pair(w: usize, h: usize, seed: u64) -> ImagePair {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = |p: Plane| requantize(&p, BitDepth::Eight);
    let rgb = RgbImage::new(
        q(smooth_plane(w, h, &mut rng)),
        q(smooth_plane(w, h, &mut rng)),
        q(smooth_plane(w, h, &mut rng)),
    )
    .unwrap();
    let nir = NirImage::new(q(smooth_plane(w, h, &mut rng))).unwrap();
    ImagePair::new(rgb, nir).unwrap()
}

fn with_nir_equal_to_luma(p: &ImagePair) -> ImagePair {
    let luma = rgb_to_ycbcr(p.rgb()).y().clone();
    ImagePair::new(p.rgb().clone(), NirImage::new(luma.clamp01()).unwrap()).unwrap()
}

#[test]
fn zero_weights_are_bit_exact_after_quantization() {
    for seed in 0..4 {
        let p = pair(45, 31, seed);
        let zero = HazeWeightMap::uniform(45, 31, 0.0).unwrap();
        let out = dehaze_with_map(&p, &zero, &FusionConfig::default()).unwrap();
        for (a, b) in [(out.r(), p.rgb().r()), (out.g(), p.rgb().g()), (out.b(), p.rgb().b())] {
            assert_eq!(&requantize(a, BitDepth::Eight), b);
        }
    }
}

#[test]
fn self_fusion_stays_within_a_bin() {
    for (seed, levels) in [(10, 1), (11, 2), (12, 3)] {
        let p = with_nir_equal_to_luma(&pair(64, 48, seed));
        let cfg = FusionConfig {
            n_levels: levels,
            ..FusionConfig::default()
        };
        let map = compute_haze_map(p.rgb(), HazeMapMode::Scale);
        let input = rgb_to_ycbcr(p.rgb());
        let out = dehaze_ycbcr(&p, &map, &cfg).unwrap();
        assert!(out.y().max_abs_diff(input.y()).unwrap() <= 1.0 / 256.0);
        assert_eq!(out.cb(), input.cb());
        assert_eq!(out.cr(), input.cr());
    }
}

#[test]
fn fusing_a_pyramid_with_itself_tracks_reconstruction() {
    let p = pair(40, 40, 20);
    let luma = rgb_to_ycbcr(p.rgb()).y().clone();
    let pyr = decompose(&luma, 2).unwrap();
    let cfg = FusionConfig::default();
    // With p = 0 everywhere the approximation is pure luma too.
    let zero = HazeWeightMap::uniform(40, 40, 0.0).unwrap();
    let trace = fuse_pyramid_levels(&pyr, &pyr, &zero, &cfg).unwrap();
    let (lo, hi) = luma.min_max();
    assert!(trace[1].z.max_abs_diff(&luma).unwrap() <= (hi - lo) / 256.0 * 2.0);
}

#[test]
fn outputs_stay_in_unit_range_for_every_mode() {
    for mode in [HazeMapMode::Scale, HazeMapMode::MinMax] {
        for levels in 1..=3 {
            let p = pair(50, 34, 30 + levels as u64);
            let cfg = FusionConfig::new(levels, mode, 64).unwrap();
            let out = dehaze(&p, &cfg).unwrap();
            for plane in [out.r(), out.g(), out.b()] {
                assert!(plane.as_slice().iter().all(|v| (0.0..=1.0).contains(v)));
            }
        }
    }
}

#[test]
fn dehaze_is_deterministic() {
    let p = pair(33, 47, 40);
    let cfg = FusionConfig::default();
    assert_eq!(dehaze(&p, &cfg).unwrap(), dehaze(&p, &cfg).unwrap());
}
