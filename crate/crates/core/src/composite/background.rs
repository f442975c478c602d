use std::f64::consts::PI;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{RgbColor, TextureSet};
use crate::error::{Error, Result};
use crate::raster::{fill_coverage, Raster, ResizePlan};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BackgroundSpec {
    PlainWhite,
    Uniform {
        color: RgbColor,
    },
    /// Uniform color with one regular polygon on top.
    Polygon {
        color: RgbColor,
        polygon_color: RgbColor,
        sides: u32,
        center_x: f64,
        center_y: f64,
        radius: f64,
        rotation_deg: f64,
    },
    /// Crop of a natural image, resized to the canvas.
    Image {
        name: String,
        x: usize,
        y: usize,
        width: usize,
        height: usize,
    },
}

impl BackgroundSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            BackgroundSpec::PlainWhite => "plain_white",
            BackgroundSpec::Uniform { .. } => "uniform",
            BackgroundSpec::Polygon { .. } => "polygon",
            BackgroundSpec::Image { .. } => "image",
        }
    }

    /// Dominant color used as the fill of uncovered warp regions.
    pub fn base_color(&self) -> Option<RgbColor> {
        match self {
            BackgroundSpec::PlainWhite => Some(RgbColor::WHITE),
            BackgroundSpec::Uniform { color } | BackgroundSpec::Polygon { color, .. } => Some(*color),
            BackgroundSpec::Image { .. } => None,
        }
    }

    pub fn polygon_vertices(&self) -> Option<Vec<(f64, f64)>> {
        match *self {
            BackgroundSpec::Polygon {
                sides,
                center_x,
                center_y,
                radius,
                rotation_deg,
                ..
            } => Some(
                (0..sides)
                    .map(|i| {
                        let t = rotation_deg.to_radians() + 2.0 * PI * i as f64 / sides as f64;
                        (center_x + radius * t.cos(), center_y + radius * t.sin())
                    })
                    .collect(),
            ),
            _ => None,
        }
    }

    /// Random regular polygon with 3 to 8 sides fully inside a `w×h` canvas.
    pub fn sample_polygon(rng: &mut impl Rng, w: usize, h: usize, color: RgbColor, polygon_color: RgbColor) -> Self {
        let short = w.min(h) as f64;
        let radius = rng.gen_range(0.15 * short..=0.45 * short);
        BackgroundSpec::Polygon {
            color,
            polygon_color,
            sides: rng.gen_range(3..=8),
            center_x: rng.gen_range(radius..=w as f64 - radius),
            center_y: rng.gen_range(radius..=h as f64 - radius),
            radius,
            rotation_deg: rng.gen_range(0.0..360.0),
        }
    }

    /// Uniformly chosen image and crop window. The window has the canvas's
    /// aspect ratio and is between 1× and the largest fitting multiple of it.
    pub fn sample_image(rng: &mut impl Rng, textures: &TextureSet, w: usize, h: usize) -> Result<Self> {
        let names: Vec<&str> = textures.names().collect();
        if names.is_empty() {
            return Err(Error::UnknownTexture("no background images available".into()));
        }
        let name = names[rng.gen_range(0..names.len())];
        let tex = textures.get(name)?;
        let max_scale = (tex.width() as f64 / w as f64).min(tex.height() as f64 / h as f64);
        if max_scale < 1.0 {
            return Err(Error::TextureTooSmall {
                name: name.to_string(),
                tex_w: tex.width(),
                tex_h: tex.height(),
                x: 0,
                y: 0,
                crop_w: w,
                crop_h: h,
            });
        }
        let s = rng.gen_range(1.0..=max_scale);
        let cw = ((w as f64 * s).floor() as usize).clamp(w, tex.width());
        let ch = ((h as f64 * s).floor() as usize).clamp(h, tex.height());
        Ok(BackgroundSpec::Image {
            name: name.to_string(),
            x: rng.gen_range(0..=tex.width() - cw),
            y: rng.gen_range(0..=tex.height() - ch),
            width: cw,
            height: ch,
        })
    }
}

impl fmt::Display for BackgroundSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BackgroundSpec::PlainWhite => write!(f, "plain_white"),
            BackgroundSpec::Uniform { color } => write!(f, "uniform:{color}"),
            BackgroundSpec::Polygon { color, sides, .. } => write!(f, "polygon:{color}:{sides}"),
            BackgroundSpec::Image { name, .. } => write!(f, "image:{name}"),
        }
    }
}

/// Renders the background; deterministic in `spec`.
pub fn make_background(spec: &BackgroundSpec, w: usize, h: usize, textures: &TextureSet) -> Result<Raster> {
    match spec {
        BackgroundSpec::PlainWhite => Ok(Raster::rgb(w, h, [255.0; 3])),
        BackgroundSpec::Uniform { color } => Ok(Raster::rgb(w, h, color.to_f64())),
        BackgroundSpec::Polygon { color, polygon_color, .. } => {
            let verts = spec.polygon_vertices().unwrap_or_default();
            let cov = fill_coverage(&[verts], w, h);
            let (base, top) = (color.to_f64(), polygon_color.to_f64());
            let mut img = Raster::rgb(w, h, base);
            for y in 0..h {
                for x in 0..w {
                    let a = cov.get(x, y, 0);
                    for c in 0..3 {
                        img.set(x, y, c, base[c] + a * (top[c] - base[c]));
                    }
                }
            }
            Ok(img)
        }
        BackgroundSpec::Image {
            name,
            x,
            y,
            width,
            height,
        } => {
            let crop = textures.crop(name, *x, *y, *width, *height)?;
            Ok(ResizePlan::new(*width, *height, w, h).apply(&crop))
        }
    }
}
