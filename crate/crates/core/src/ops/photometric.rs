use serde::{Deserialize, Serialize};

use super::RasterLayer;
use crate::raster::Raster;

/// Enhancement factors; 1 leaves the image unchanged, 0 yields the baseline.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhotometricFactors {
    pub contrast: f64,
    pub brightness: f64,
    pub color: f64,
    pub sharpness: f64,
}

impl Default for PhotometricFactors {
    fn default() -> Self {
        Self {
            contrast: 1.0,
            brightness: 1.0,
            color: 1.0,
            sharpness: 1.0,
        }
    }
}

impl PhotometricFactors {
    pub fn is_identity(&self) -> bool {
        *self == Self::default()
    }
}

pub fn luminance(rgb: &[f64]) -> f64 {
    0.299 * rgb[0] + 0.587 * rgb[1] + 0.114 * rgb[2]
}

fn blend(baseline: &Raster, img: &Raster, f: f64) -> Raster {
    let data = baseline
        .data()
        .iter()
        .zip(img.data())
        .map(|(b, v)| (b + f * (v - b)).clamp(0.0, 255.0))
        .collect();
    Raster::from_data(img.width(), img.height(), 3, img.scale(), data)
}

fn grayscale(img: &Raster) -> Raster {
    let data = (0..img.width() * img.height())
        .flat_map(|i| {
            let l = luminance(&img.data()[i * 3..i * 3 + 3]);
            [l; 3]
        })
        .collect();
    Raster::from_data(img.width(), img.height(), 3, img.scale(), data)
}

/// 3×3 smoothing with center weight 5; border pixels are kept.
fn smooth(img: &Raster) -> Raster {
    let (w, h) = (img.width(), img.height());
    let mut out = img.clone();
    if w < 3 || h < 3 {
        return out;
    }
    for y in 1..h - 1 {
        for x in 1..w - 1 {
            for c in 0..3 {
                let mut s = 0.0;
                for dy in 0..3 {
                    for dx in 0..3 {
                        let wt = if dx == 1 && dy == 1 { 5.0 } else { 1.0 };
                        s += wt * img.get(x + dx - 1, y + dy - 1, c);
                    }
                }
                out.set(x, y, c, s / 13.0);
            }
        }
    }
    out
}

/// Contrast, brightness, color and sharpness, in that order, on an 8-bit RGB raster.
pub fn adjust_image(img: &Raster, f: &PhotometricFactors) -> Raster {
    assert_eq!(img.channels(), 3, "photometric adjustments need RGB input");
    let mut out = img.clone();
    if f.contrast != 1.0 {
        let n = (out.width() * out.height()).max(1) as f64;
        let mean = (0..out.width() * out.height())
            .map(|i| luminance(&out.data()[i * 3..i * 3 + 3]))
            .sum::<f64>()
            / n;
        out = blend(&Raster::rgb(out.width(), out.height(), [mean; 3]), &out, f.contrast);
    }
    if f.brightness != 1.0 {
        out = blend(&Raster::rgb(out.width(), out.height(), [0.0; 3]), &out, f.brightness);
    }
    if f.color != 1.0 {
        out = blend(&grayscale(&out), &out, f.color);
    }
    if f.sharpness != 1.0 {
        out = blend(&smooth(&out), &out, f.sharpness);
    }
    out
}

/// Photometric changes leave the mask untouched.
pub fn adjust(layer: &RasterLayer, f: &PhotometricFactors) -> RasterLayer {
    RasterLayer {
        image: adjust_image(&layer.image, f),
        mask: layer.mask.clone(),
    }
}
