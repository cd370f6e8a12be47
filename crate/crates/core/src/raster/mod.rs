//! Grayscale images, real-valued maps and their on-disk formats.
//!
//! Coordinates are `x` rightward and `y` downward with the origin at the
//! top-left pixel center. Samples are stored row-major.

mod pfm;
pub mod pnm;

use std::fs;
use std::path::Path;

use crate::{Error, Result};

pub use pfm::{decode_pfm, encode_pfm, load_float_map, save_float_map};

/// BT.601 luma weights.
pub const LUMA_WEIGHTS: [f32; 3] = [0.299, 0.587, 0.114];

/// A single-channel image with luminance samples in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    samples: Vec<f32>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, samples: Vec<f32>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid("image must be at least 1x1"));
        }
        if samples.len() != width * height {
            return Err(Error::invalid(format!(
                "expected {} samples for a {width}x{height} image, got {}",
                width * height,
                samples.len()
            )));
        }
        if let Some(i) = samples.iter().position(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::invalid(format!(
                "sample at ({}, {}) is outside [0, 1]",
                i % width,
                i / width
            )));
        }
        Ok(GrayImage {
            width,
            height,
            samples,
        })
    }

    /// Builds an image by evaluating `f(x, y)` at every pixel; values are
    /// clamped into `[0, 1]`.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f32) -> Self {
        assert!(width > 0 && height > 0, "image must be at least 1x1");
        let mut samples = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                samples.push(f(x, y).clamp(0.0, 1.0));
            }
        }
        GrayImage {
            width,
            height,
            samples,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn samples(&self) -> &[f32] {
        &self.samples
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f32 {
        self.samples[y * self.width + x]
    }

    /// Sample with coordinates clamped to the image (edge replication).
    #[inline]
    pub fn get_clamped(&self, x: isize, y: isize) -> f32 {
        let x = x.clamp(0, self.width as isize - 1) as usize;
        let y = y.clamp(0, self.height as isize - 1) as usize;
        self.get(x, y)
    }

    /// Bilinear interpolation at a real-valued position inside the image.
    pub fn sample_bilinear(&self, x: f64, y: f64) -> f64 {
        let max_x = (self.width - 1) as f64;
        let max_y = (self.height - 1) as f64;
        let x = x.clamp(0.0, max_x);
        let y = y.clamp(0.0, max_y);
        let x0 = x.floor() as usize;
        let y0 = y.floor() as usize;
        let x1 = (x0 + 1).min(self.width - 1);
        let y1 = (y0 + 1).min(self.height - 1);
        let fx = x - x0 as f64;
        let fy = y - y0 as f64;
        let top = self.get(x0, y0) as f64 * (1.0 - fx) + self.get(x1, y0) as f64 * fx;
        let bottom = self.get(x0, y1) as f64 * (1.0 - fx) + self.get(x1, y1) as f64 * fx;
        top * (1.0 - fy) + bottom * fy
    }

    /// Contrast inversion `1 - I`.
    pub fn inverted(&self) -> Self {
        GrayImage {
            width: self.width,
            height: self.height,
            samples: self.samples.iter().map(|v| 1.0 - v).collect(),
        }
    }

    /// Converts to 8-bit samples with rounding.
    pub fn to_u8(&self) -> Vec<u8> {
        self.samples
            .iter()
            .map(|v| (v * 255.0).round().clamp(0.0, 255.0) as u8)
            .collect()
    }
}

/// A real-valued map with the dimensions of the image it was derived from.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatMap {
    width: usize,
    height: usize,
    data: Vec<f32>,
}

impl FloatMap {
    pub fn zeros(width: usize, height: usize) -> Self {
        FloatMap {
            width,
            height,
            data: vec![0.0; width * height],
        }
    }

    pub fn from_vec(width: usize, height: usize, data: Vec<f32>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid("map must be at least 1x1"));
        }
        if data.len() != width * height {
            return Err(Error::invalid(format!(
                "expected {} samples for a {width}x{height} map, got {}",
                width * height,
                data.len()
            )));
        }
        Ok(FloatMap {
            width,
            height,
            data,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f32) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        FloatMap {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f32] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f32> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f32 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: f32) {
        self.data[y * self.width + x] = v;
    }

    /// Returns the first non-finite sample as an error.
    pub fn check_finite(&self) -> Result<()> {
        match self.data.iter().position(|v| !v.is_finite()) {
            Some(i) => Err(Error::NonFinite {
                x: i % self.width,
                y: i / self.width,
            }),
            None => Ok(()),
        }
    }

    pub fn ensure_dims(&self, dims: (usize, usize)) -> Result<()> {
        if self.dims() != dims {
            return Err(Error::DimensionMismatch {
                expected: dims,
                found: self.dims(),
            });
        }
        Ok(())
    }

    pub fn min_max(&self) -> (f32, f32) {
        self.data
            .iter()
            .fold((f32::INFINITY, f32::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    pub fn max_abs(&self) -> f32 {
        self.data.iter().fold(0.0f32, |m, v| m.max(v.abs()))
    }

    /// Affinely rescales the samples onto `[0, 1]`. A constant map becomes zero.
    pub fn normalized(&self) -> FloatMap {
        let (lo, hi) = self.min_max();
        let range = hi - lo;
        let data = if range > 0.0 {
            self.data.iter().map(|v| (v - lo) / range).collect()
        } else {
            vec![0.0; self.data.len()]
        };
        FloatMap {
            width: self.width,
            height: self.height,
            data,
        }
    }

    pub fn map(&self, f: impl Fn(f32) -> f32) -> FloatMap {
        FloatMap {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// 8-bit rendering of a map already in `[0, 1]`.
    pub fn to_u8(&self) -> Vec<u8> {
        self.data
            .iter()
            .map(|v| (v * 255.0).round().clamp(0.0, 255.0) as u8)
            .collect()
    }
}

impl From<&GrayImage> for FloatMap {
    fn from(img: &GrayImage) -> Self {
        FloatMap {
            width: img.width,
            height: img.height,
            data: img.samples.clone(),
        }
    }
}

/// Loads a PNG or binary PGM (P5, 8-bit) as luminance in `[0, 1]`.
pub fn load_image(path: impl AsRef<Path>) -> Result<GrayImage> {
    let bytes = fs::read(path.as_ref())?;
    decode_image(&bytes)
}

/// Decodes PNG or P5 PGM bytes.
pub fn decode_image(bytes: &[u8]) -> Result<GrayImage> {
    if bytes.starts_with(b"P5") {
        let pgm = pnm::decode_pgm(bytes)?;
        let samples = pgm.samples.iter().map(|&v| v as f32 / 255.0).collect();
        return GrayImage::new(pgm.width, pgm.height, samples);
    }
    if bytes.starts_with(b"\x89PNG\r\n\x1a\n") {
        return decode_png(bytes);
    }
    Err(Error::UnsupportedFormat(
        "expected a PNG or binary PGM (P5) file".into(),
    ))
}

fn decode_png(bytes: &[u8]) -> Result<GrayImage> {
    use image::DynamicImage;

    let img = image::load_from_memory_with_format(bytes, image::ImageFormat::Png)
        .map_err(|e| Error::malformed("PNG", e.to_string()))?;
    let (width, height) = (img.width() as usize, img.height() as usize);
    if width == 0 || height == 0 {
        return Err(Error::invalid("zero-sized image"));
    }
    let samples: Vec<f32> = match img {
        DynamicImage::ImageLuma8(buf) => buf.into_raw().iter().map(|&v| v as f32 / 255.0).collect(),
        DynamicImage::ImageLumaA8(buf) => buf
            .into_raw()
            .chunks_exact(2)
            .map(|p| p[0] as f32 / 255.0)
            .collect(),
        DynamicImage::ImageLuma16(buf) => buf
            .into_raw()
            .iter()
            .map(|&v| v as f32 / 65535.0)
            .collect(),
        other => other
            .to_rgb32f()
            .into_raw()
            .chunks_exact(3)
            .map(|p| {
                (LUMA_WEIGHTS[0] * p[0] + LUMA_WEIGHTS[1] * p[1] + LUMA_WEIGHTS[2] * p[2])
                    .clamp(0.0, 1.0)
            })
            .collect(),
    };
    GrayImage::new(width, height, samples)
}

/// Block-mean downsampling; partial blocks at the right and bottom edges are
/// averaged over the pixels they contain.
pub fn downsample(img: &GrayImage, factor: usize) -> Result<GrayImage> {
    if factor == 0 {
        return Err(Error::invalid("downsample factor must be at least 1"));
    }
    if factor == 1 {
        return Ok(img.clone());
    }
    let out_w = img.width.div_ceil(factor);
    let out_h = img.height.div_ceil(factor);
    let mut samples = Vec::with_capacity(out_w * out_h);
    for oy in 0..out_h {
        let y0 = oy * factor;
        let y1 = (y0 + factor).min(img.height);
        for ox in 0..out_w {
            let x0 = ox * factor;
            let x1 = (x0 + factor).min(img.width);
            let mut sum = 0.0f64;
            for y in y0..y1 {
                for x in x0..x1 {
                    sum += img.get(x, y) as f64;
                }
            }
            let n = ((y1 - y0) * (x1 - x0)) as f64;
            samples.push(((sum / n) as f32).clamp(0.0, 1.0));
        }
    }
    Ok(GrayImage {
        width: out_w,
        height: out_h,
        samples,
    })
}

/// Writes an image as 8-bit PNG.
pub fn save_png(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    save_gray_png(img.width, img.height, &img.to_u8(), path)
}

pub(crate) fn save_gray_png(
    width: usize,
    height: usize,
    bytes: &[u8],
    path: impl AsRef<Path>,
) -> Result<()> {
    let buf = image::GrayImage::from_raw(width as u32, height as u32, bytes.to_vec())
        .ok_or_else(|| Error::invalid("buffer size does not match dimensions"))?;
    buf.save_with_format(path.as_ref(), image::ImageFormat::Png)
        .map_err(|e| match e {
            image::ImageError::IoError(io) => Error::Io(io),
            other => Error::UnsupportedFormat(other.to_string()),
        })
}
