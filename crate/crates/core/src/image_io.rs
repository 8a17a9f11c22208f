//! Decoding, normalization and encoding of image files.
//!
//! Every sample is scaled into `[0, 1]` by `1 / (2^bitdepth - 1)` on load, so
//! the rest of the pipeline never sees a bit depth. Output is always PNG.

use std::path::Path;

use image::{DynamicImage, ImageBuffer, ImageFormat, ImageReader, Luma, Rgb};

use crate::error::{Error, Result};
use crate::plane::Plane;

/// A color image with three planes of identical dimensions, samples in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RgbImage {
    r: Plane,
    g: Plane,
    b: Plane,
}

impl RgbImage {
    pub fn new(r: Plane, g: Plane, b: Plane) -> Result<Self> {
        if r.is_empty() {
            return Err(Error::EmptyInput);
        }
        r.ensure_same_dims(&g)?;
        r.ensure_same_dims(&b)?;
        for plane in [&r, &g, &b] {
            check_unit_range(plane)?;
        }
        Ok(Self { r, g, b })
    }

    pub fn r(&self) -> &Plane {
        &self.r
    }

    pub fn g(&self) -> &Plane {
        &self.g
    }

    pub fn b(&self) -> &Plane {
        &self.b
    }

    pub fn width(&self) -> usize {
        self.r.width()
    }

    pub fn height(&self) -> usize {
        self.r.height()
    }

    pub fn dims(&self) -> (usize, usize) {
        self.r.dims()
    }

    pub fn into_planes(self) -> (Plane, Plane, Plane) {
        (self.r, self.g, self.b)
    }
}

/// A single-plane NIR image, samples in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct NirImage {
    plane: Plane,
}

impl NirImage {
    pub fn new(plane: Plane) -> Result<Self> {
        if plane.is_empty() {
            return Err(Error::EmptyInput);
        }
        check_unit_range(&plane)?;
        Ok(Self { plane })
    }

    pub fn plane(&self) -> &Plane {
        &self.plane
    }

    pub fn dims(&self) -> (usize, usize) {
        self.plane.dims()
    }
}

/// A registered RGB + NIR pair. Both images have the same dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct ImagePair {
    rgb: RgbImage,
    nir: NirImage,
}

impl ImagePair {
    pub fn new(rgb: RgbImage, nir: NirImage) -> Result<Self> {
        if rgb.dims() != nir.dims() {
            return Err(Error::DimensionMismatch {
                expected: rgb.dims(),
                found: nir.dims(),
            });
        }
        Ok(Self { rgb, nir })
    }

    pub fn rgb(&self) -> &RgbImage {
        &self.rgb
    }

    pub fn nir(&self) -> &NirImage {
        &self.nir
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BitDepth {
    #[default]
    Eight,
    Sixteen,
}

impl BitDepth {
    pub fn max_value(self) -> f64 {
        match self {
            BitDepth::Eight => 255.0,
            BitDepth::Sixteen => 65535.0,
        }
    }

    pub fn bits(self) -> u32 {
        match self {
            BitDepth::Eight => 8,
            BitDepth::Sixteen => 16,
        }
    }
}

impl TryFrom<u32> for BitDepth {
    type Error = Error;

    fn try_from(bits: u32) -> Result<Self> {
        match bits {
            8 => Ok(BitDepth::Eight),
            16 => Ok(BitDepth::Sixteen),
            other => Err(Error::InvalidConfig(format!(
                "bit depth must be 8 or 16, got {other}"
            ))),
        }
    }
}

/// Clamp to `[0, 1]`, then round half up to an integer code.
#[inline]
pub fn quantize(sample: f64, depth: BitDepth) -> u16 {
    let max = depth.max_value();
    (sample.clamp(0.0, 1.0) * max + 0.5).floor().min(max) as u16
}

/// The value a sample takes after a save/load cycle at `depth`.
pub fn requantize(plane: &Plane, depth: BitDepth) -> Plane {
    let max = depth.max_value();
    plane.map(|v| f64::from(quantize(v, depth)) / max)
}

pub fn load_pair(rgb_path: impl AsRef<Path>, nir_path: impl AsRef<Path>) -> Result<ImagePair> {
    let rgb = load_rgb(rgb_path)?;
    let nir = load_nir(nir_path)?;
    ImagePair::new(rgb, nir)
}

/// Loads a color image. Grayscale files are replicated into all three planes.
pub fn load_rgb(path: impl AsRef<Path>) -> Result<RgbImage> {
    let mut planes = decode_planes(path.as_ref())?;
    if planes.len() == 1 {
        let p = planes.pop().unwrap();
        return RgbImage::new(p.clone(), p.clone(), p);
    }
    let b = planes.pop().unwrap();
    let g = planes.pop().unwrap();
    let r = planes.pop().unwrap();
    RgbImage::new(r, g, b)
}

/// Loads a NIR image. Three-channel files are reduced by averaging channels.
pub fn load_nir(path: impl AsRef<Path>) -> Result<NirImage> {
    let planes = decode_planes(path.as_ref())?;
    let plane = if planes.len() == 1 {
        planes.into_iter().next().unwrap()
    } else {
        let (w, h) = planes[0].dims();
        let data = (0..w * h)
            .map(|i| (planes[0].as_slice()[i] + planes[1].as_slice()[i] + planes[2].as_slice()[i]) / 3.0)
            .collect();
        Plane::new(w, h, data)?
    };
    NirImage::new(plane)
}

pub fn save_image(img: &RgbImage, path: impl AsRef<Path>, depth: BitDepth) -> Result<()> {
    let path = path.as_ref();
    let (w, h) = img.dims();
    let interleaved = img
        .r
        .as_slice()
        .iter()
        .zip(img.g.as_slice())
        .zip(img.b.as_slice())
        .flat_map(|((&r, &g), &b)| [r, g, b]);
    let dynamic = match depth {
        BitDepth::Eight => {
            let raw: Vec<u8> = interleaved.map(|v| quantize(v, depth) as u8).collect();
            DynamicImage::ImageRgb8(ImageBuffer::<Rgb<u8>, _>::from_raw(w as u32, h as u32, raw).unwrap())
        }
        BitDepth::Sixteen => {
            let raw: Vec<u16> = interleaved.map(|v| quantize(v, depth)).collect();
            DynamicImage::ImageRgb16(ImageBuffer::<Rgb<u16>, _>::from_raw(w as u32, h as u32, raw).unwrap())
        }
    };
    write_png(&dynamic, path)
}

/// Writes a single plane as a grayscale PNG.
pub fn save_plane(plane: &Plane, path: impl AsRef<Path>, depth: BitDepth) -> Result<()> {
    let (w, h) = plane.dims();
    let dynamic = match depth {
        BitDepth::Eight => {
            let raw: Vec<u8> = plane.as_slice().iter().map(|&v| quantize(v, depth) as u8).collect();
            DynamicImage::ImageLuma8(ImageBuffer::<Luma<u8>, _>::from_raw(w as u32, h as u32, raw).unwrap())
        }
        BitDepth::Sixteen => {
            let raw: Vec<u16> = plane.as_slice().iter().map(|&v| quantize(v, depth)).collect();
            DynamicImage::ImageLuma16(ImageBuffer::<Luma<u16>, _>::from_raw(w as u32, h as u32, raw).unwrap())
        }
    };
    write_png(&dynamic, path.as_ref())
}

fn write_png(img: &DynamicImage, path: &Path) -> Result<()> {
    img.save_with_format(path, ImageFormat::Png).map_err(|e| match e {
        image::ImageError::IoError(source) => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        other => Error::Io {
            path: path.to_path_buf(),
            source: std::io::Error::other(other.to_string()),
        },
    })
}

fn check_unit_range(plane: &Plane) -> Result<()> {
    match plane
        .as_slice()
        .iter()
        .position(|v| !(0.0..=1.0).contains(v))
    {
        Some(index) => Err(Error::OutOfRange {
            index,
            value: plane.as_slice()[index],
        }),
        None => Ok(()),
    }
}

/// Decodes a PNG or TIFF file into one (gray) or three (color) normalized planes.
/// Alpha is dropped.
fn decode_planes(path: &Path) -> Result<Vec<Plane>> {
    let decode_err = |reason: String| Error::Decode {
        path: path.to_path_buf(),
        reason,
    };
    let reader = ImageReader::open(path)
        .map_err(|e| decode_err(e.to_string()))?
        .with_guessed_format()
        .map_err(|e| decode_err(e.to_string()))?;
    match reader.format() {
        Some(ImageFormat::Png) | Some(ImageFormat::Tiff) => {}
        Some(other) => {
            return Err(Error::UnsupportedFormat {
                path: path.to_path_buf(),
                reason: format!("{other:?} container; expected PNG or TIFF"),
            })
        }
        None => return Err(decode_err("unrecognized container".into())),
    }
    let img = reader.decode().map_err(|e| match e {
        image::ImageError::Unsupported(u) => Error::UnsupportedFormat {
            path: path.to_path_buf(),
            reason: u.to_string(),
        },
        other => decode_err(other.to_string()),
    })?;

    let (w, h) = (img.width() as usize, img.height() as usize);
    let planes = match &img {
        DynamicImage::ImageLuma8(b) => split_channels(b.as_raw(), w, h, 1, 1, 255.0),
        DynamicImage::ImageLumaA8(b) => split_channels(b.as_raw(), w, h, 2, 1, 255.0),
        DynamicImage::ImageRgb8(b) => split_channels(b.as_raw(), w, h, 3, 3, 255.0),
        DynamicImage::ImageRgba8(b) => split_channels(b.as_raw(), w, h, 4, 3, 255.0),
        DynamicImage::ImageLuma16(b) => split_channels(b.as_raw(), w, h, 1, 1, 65535.0),
        DynamicImage::ImageLumaA16(b) => split_channels(b.as_raw(), w, h, 2, 1, 65535.0),
        DynamicImage::ImageRgb16(b) => split_channels(b.as_raw(), w, h, 3, 3, 65535.0),
        DynamicImage::ImageRgba16(b) => split_channels(b.as_raw(), w, h, 4, 3, 65535.0),
        other => {
            return Err(Error::UnsupportedFormat {
                path: path.to_path_buf(),
                reason: format!("sample type {:?}; expected 8- or 16-bit integer", other.color()),
            })
        }
    };
    if planes[0].is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(planes)
}

fn split_channels<T: Copy + Into<f64>>(
    raw: &[T],
    width: usize,
    height: usize,
    stride: usize,
    channels: usize,
    max: f64,
) -> Vec<Plane> {
    (0..channels)
        .map(|c| {
            let data = raw
                .chunks_exact(stride)
                .map(|px| px[c].into() / max)
                .collect();
            Plane::new(width, height, data).expect("decoder returned a consistent buffer")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantize_rounds_half_up_and_clamps() {
        assert_eq!(quantize(1.0, BitDepth::Eight), 255);
        assert_eq!(quantize(0.0, BitDepth::Eight), 0);
        assert_eq!(quantize(0.5, BitDepth::Eight), 128);
        assert_eq!(quantize(1.2, BitDepth::Eight), 255);
        assert_eq!(quantize(-0.3, BitDepth::Eight), 0);
        assert_eq!(quantize(1.0, BitDepth::Sixteen), 65535);
        assert_eq!(quantize(0.5, BitDepth::Sixteen), 32768);
    }

    #[test]
    fn rgb_rejects_out_of_range_and_mismatched_planes() {
        let ok = Plane::filled(2, 2, 0.5);
        let bad = Plane::filled(2, 2, 1.5);
        assert!(matches!(
            RgbImage::new(ok.clone(), ok.clone(), bad),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            RgbImage::new(ok.clone(), ok, Plane::filled(3, 2, 0.5)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn pair_requires_equal_dims() {
        let p = Plane::filled(1024, 680, 0.2);
        let rgb = RgbImage::new(p.clone(), p.clone(), p).unwrap();
        let nir = NirImage::new(Plane::filled(512, 340, 0.2)).unwrap();
        assert!(matches!(
            ImagePair::new(rgb, nir),
            Err(Error::DimensionMismatch {
                expected: (1024, 680),
                found: (512, 340)
            })
        ));
    }

    #[test]
    fn bitdepth_from_bits() {
        assert_eq!(BitDepth::try_from(8).unwrap(), BitDepth::Eight);
        assert_eq!(BitDepth::try_from(16).unwrap(), BitDepth::Sixteen);
        assert!(BitDepth::try_from(12).is_err());
    }
}
