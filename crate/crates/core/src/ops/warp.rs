use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{Homography, RasterLayer};
use crate::raster::{gaussian_blur, Raster};
use crate::seed::stream;

/// Bilinear sample at index-space `(sx, sy)`; neighbours outside the image
/// read as `fill`.
fn sample(img: &Raster, sx: f64, sy: f64, fill: &[f64], out: &mut [f64]) {
    let (w, h) = (img.width() as i64, img.height() as i64);
    let (x0, y0) = (sx.floor(), sy.floor());
    let (fx, fy) = (sx - x0, sy - y0);
    let (x0, y0) = (x0 as i64, y0 as i64);
    out.iter_mut().for_each(|v| *v = 0.0);
    for (dy, wy) in [(0, 1.0 - fy), (1, fy)] {
        for (dx, wx) in [(0, 1.0 - fx), (1, fx)] {
            let wt = wx * wy;
            if wt == 0.0 {
                continue;
            }
            let (x, y) = (x0 + dx, y0 + dy);
            if x < 0 || y < 0 || x >= w || y >= h {
                for (o, f) in out.iter_mut().zip(fill) {
                    *o += wt * f;
                }
            } else {
                for (o, v) in out.iter_mut().zip(img.pixel(x as usize, y as usize)) {
                    *o += wt * v;
                }
            }
        }
    }
}

/// Inverse-maps every output pixel through `src_of` and samples image and
/// mask at the same point.
pub(crate) fn warp_with(layer: &RasterLayer, fill: [f64; 3], src_of: impl Fn(usize, usize) -> (f64, f64)) -> RasterLayer {
    let (w, h) = (layer.image.width(), layer.image.height());
    let mut image = layer.image.clone();
    let mut mask = layer.mask.clone();
    let mut px = [0.0; 3];
    let mut m = [0.0; 1];
    for y in 0..h {
        for x in 0..w {
            let (sx, sy) = src_of(x, y);
            if !(sx.is_finite() && sy.is_finite()) {
                for c in 0..3 {
                    image.set(x, y, c, fill[c]);
                }
                mask.set(x, y, 0, 0.0);
                continue;
            }
            sample(&layer.image, sx, sy, &fill, &mut px);
            for c in 0..3 {
                image.set(x, y, c, px[c]);
            }
            sample(&layer.mask, sx, sy, &[0.0], &mut m);
            mask.set(x, y, 0, m[0]);
        }
    }
    RasterLayer { image, mask }
}

/// Warps image and mask by `h` (pixel centers at half-integers). Uncovered
/// pixels take `fill` in the image and 0 in the mask.
pub fn warp_perspective(layer: &RasterLayer, h: &Homography, fill: [f64; 3]) -> RasterLayer {
    let inv = h.inverse().expect("homography invariant: invertible");
    warp_with(layer, fill, |x, y| {
        let (sx, sy) = inv.apply(x as f64 + 0.5, y as f64 + 0.5);
        (sx - 0.5, sy - 0.5)
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldNoise {
    /// Uniform on `[-1, 1)`.
    #[default]
    Uniform,
    /// Normal with standard deviation 1/3, clipped to `[-1, 1]`.
    Gaussian,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DisplacementField {
    pub width: usize,
    pub height: usize,
    pub dx: Vec<f64>,
    pub dy: Vec<f64>,
    pub smoothing_sigma: f64,
    pub amplitude: f64,
}

impl DisplacementField {
    /// `amplitude × blur(noise, smoothing_sigma)` per axis.
    pub fn generate(width: usize, height: usize, seed: u64, amplitude: f64, smoothing_sigma: f64, noise: FieldNoise) -> Self {
        let mut rng = stream(seed, "displacement_field");
        let normal: Normal<f64> = Normal::new(0.0, 1.0 / 3.0).expect("valid normal");
        let mut plane = || {
            let data = (0..width * height)
                .map(|_| match noise {
                    FieldNoise::Uniform => rng.gen_range(-1.0..1.0),
                    FieldNoise::Gaussian => normal.sample(&mut rng).clamp(-1.0, 1.0),
                })
                .collect();
            let blurred = gaussian_blur(&Raster::from_data(width, height, 1, 1.0, data), smoothing_sigma);
            blurred.data().iter().map(|v| v * amplitude).collect::<Vec<f64>>()
        };
        let dx = plane();
        let dy = plane();
        Self {
            width,
            height,
            dx,
            dy,
            smoothing_sigma,
            amplitude,
        }
    }

    pub fn max_displacement(&self) -> f64 {
        self.dx.iter().chain(&self.dy).fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Moves pixels by the field; output `(x, y)` reads input `(x + dx, y + dy)`.
pub fn elastic_field_warp(layer: &RasterLayer, field: &DisplacementField, fill: [f64; 3]) -> RasterLayer {
    assert!(field.width == layer.image.width() && field.height == layer.image.height());
    if field.amplitude == 0.0 {
        return layer.clone();
    }
    warp_with(layer, fill, |x, y| {
        let i = y * field.width + x;
        (x as f64 + field.dx[i], y as f64 + field.dy[i])
    })
}
