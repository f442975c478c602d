//! Rasterization and the pixel container shared by every image stage.

mod fill;
mod render;
mod resample;

use std::fs;
use std::io::Cursor;
use std::path::Path;

use image::codecs::png::{CompressionType, FilterType, PngEncoder};
use image::{ImageEncoder, RgbImage};

use crate::error::{Error, Result};

pub use fill::{fill_coverage, flatten_outline, Polyline};
pub use render::{render_text, Layout, PreTransforms, Rendering};
pub use resample::{gaussian_blur, lanczos_resize, reduce_integer, ResizePlan};

/// Row-major interleaved pixels.
///
/// `scale` is the full-scale value: 1 for coverage masks and binary images,
/// 255 for 8-bit color and grayscale. Resampling clamps to `[0, scale]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Raster {
    width: usize,
    height: usize,
    channels: usize,
    scale: f64,
    data: Vec<f64>,
}

/// A single-channel coverage raster with values in `[0, 1]`.
pub type CoverageBitmap = Raster;

/// Half-up rounding used wherever values are quantized.
pub fn round_half_up(v: f64) -> f64 {
    (v + 0.5).floor()
}

impl Raster {
    pub fn new(width: usize, height: usize, channels: usize, scale: f64, fill: f64) -> Self {
        assert!(channels == 1 || channels == 3, "rasters have 1 or 3 channels");
        Self {
            width,
            height,
            channels,
            scale,
            data: vec![fill; width * height * channels],
        }
    }

    pub fn from_data(width: usize, height: usize, channels: usize, scale: f64, data: Vec<f64>) -> Self {
        assert!(channels == 1 || channels == 3, "rasters have 1 or 3 channels");
        assert_eq!(data.len(), width * height * channels, "raster data length");
        Self {
            width,
            height,
            channels,
            scale,
            data,
        }
    }

    /// All-zero coverage mask.
    pub fn mask(width: usize, height: usize) -> Self {
        Self::new(width, height, 1, 1.0, 0.0)
    }

    /// 8-bit RGB image filled with `color`.
    pub fn rgb(width: usize, height: usize, color: [f64; 3]) -> Self {
        let mut data = Vec::with_capacity(width * height * 3);
        for _ in 0..width * height {
            data.extend_from_slice(&color);
        }
        Self::from_data(width, height, 3, 255.0, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn same_shape(&self, other: &Raster) -> bool {
        self.width == other.width && self.height == other.height
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize, c: usize) -> usize {
        (y * self.width + x) * self.channels + c
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, c: usize) -> f64 {
        self.data[self.index(x, y, c)]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, c: usize, v: f64) {
        let i = self.index(x, y, c);
        self.data[i] = v;
    }

    pub fn pixel(&self, x: usize, y: usize) -> &[f64] {
        let i = self.index(x, y, 0);
        &self.data[i..i + self.channels]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Raster {
        Raster {
            data: self.data.iter().map(|&v| f(v)).collect(),
            ..self.clone()
        }
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn channel(&self, c: usize) -> Raster {
        let data = self.data.iter().skip(c).step_by(self.channels).copied().collect();
        Raster::from_data(self.width, self.height, 1, self.scale, data)
    }

    /// Interleaves single-channel rasters of equal shape.
    pub fn from_channels(planes: &[Raster]) -> Raster {
        let first = &planes[0];
        let n = first.width * first.height;
        let mut data = Vec::with_capacity(n * planes.len());
        for i in 0..n {
            for p in planes {
                data.push(p.data[i]);
            }
        }
        Raster::from_data(first.width, first.height, planes.len(), first.scale, data)
    }

    /// Single-channel input replicated to three 8-bit channels.
    pub fn to_rgb(&self) -> Raster {
        if self.channels == 3 {
            return self.clone();
        }
        let k = 255.0 / self.scale;
        let data = self.data.iter().flat_map(|&v| [v * k; 3]).collect();
        Raster::from_data(self.width, self.height, 3, 255.0, data)
    }

    /// Tight bounds `(x0, y0, x1, y1)`, exclusive maxima, of pixels with any
    /// channel above `threshold`.
    pub fn ink_bounds(&self, threshold: f64) -> Option<(usize, usize, usize, usize)> {
        let mut b: Option<(usize, usize, usize, usize)> = None;
        for y in 0..self.height {
            for x in 0..self.width {
                if self.pixel(x, y).iter().any(|&v| v > threshold) {
                    b = Some(match b {
                        None => (x, y, x + 1, y + 1),
                        Some((x0, y0, x1, y1)) => (x0.min(x), y0.min(y), x1.max(x + 1), y1.max(y + 1)),
                    });
                }
            }
        }
        b
    }

    /// Quantizes to 8-bit RGB, replicating single-channel data.
    pub fn to_rgb8(&self) -> RgbImage {
        let rgb = self.to_rgb();
        let bytes = rgb
            .data
            .iter()
            .map(|&v| round_half_up(v).clamp(0.0, 255.0) as u8)
            .collect();
        RgbImage::from_raw(self.width as u32, self.height as u32, bytes).expect("buffer size")
    }

    pub fn from_rgb8(img: &RgbImage) -> Raster {
        let data = img.as_raw().iter().map(|&b| b as f64).collect();
        Raster::from_data(img.width() as usize, img.height() as usize, 3, 255.0, data)
    }

    /// 8-bit RGB, non-interlaced, fixed compression and filter.
    pub fn encode_png(&self) -> Result<Vec<u8>> {
        let img = self.to_rgb8();
        let mut out = Cursor::new(Vec::new());
        PngEncoder::new_with_quality(&mut out, CompressionType::Default, FilterType::Adaptive).write_image(
            img.as_raw(),
            img.width(),
            img.height(),
            image::ExtendedColorType::Rgb8,
        )?;
        Ok(out.into_inner())
    }

    pub fn write_png(&self, path: &Path) -> Result<()> {
        let bytes = self.encode_png()?;
        fs::write(path, bytes).map_err(|e| Error::io(path, e))
    }

    pub fn read_png(path: &Path) -> Result<Raster> {
        let img = image::open(path)?.to_rgb8();
        Ok(Raster::from_rgb8(&img))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn png_round_trip() {
        let mut r = Raster::rgb(3, 2, [10.0, 20.0, 30.0]);
        r.set(2, 1, 0, 254.6);
        let bytes = r.encode_png().unwrap();
        let back = Raster::from_rgb8(&image::load_from_memory(&bytes).unwrap().to_rgb8());
        assert_eq!(back.get(2, 1, 0), 255.0);
        assert_eq!(back.get(0, 0, 2), 30.0);
        assert_eq!(bytes, r.encode_png().unwrap());
    }

    #[test]
    fn mask_replicates_to_rgb() {
        let mut m = Raster::mask(2, 1);
        m.set(1, 0, 0, 0.5);
        let rgb = m.to_rgb();
        assert_eq!(rgb.pixel(1, 0), &[127.5, 127.5, 127.5]);
        assert_eq!(m.ink_bounds(0.0), Some((1, 0, 2, 1)));
    }
}
