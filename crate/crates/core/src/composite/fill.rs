use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::RgbColor;
use crate::error::{Error, Result};
use crate::ops::{morphology, KernelShape, MorphKernel, MorphOp, RasterLayer};
use crate::raster::Raster;

/// Natural images and textures by file name.
#[derive(Clone, Debug, Default)]
pub struct TextureSet {
    images: BTreeMap<String, Raster>,
}

impl TextureSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reads every PNG or JPEG in `dir`. Unreadable files are skipped with a warning.
    pub fn load_dir(dir: &Path) -> Result<Self> {
        let mut set = Self::new();
        let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
        let mut paths: Vec<_> = entries.filter_map(|e| e.ok().map(|e| e.path())).collect();
        paths.sort();
        for path in paths {
            let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
            if !matches!(ext.as_deref(), Some("png" | "jpg" | "jpeg")) {
                continue;
            }
            match Raster::read_png(&path) {
                Ok(img) => {
                    let name = path.file_name().unwrap().to_string_lossy().into_owned();
                    set.insert(name, img);
                }
                Err(e) => log::warn!("skipping texture {}: {e}", path.display()),
            }
        }
        Ok(set)
    }

    pub fn insert(&mut self, name: impl Into<String>, img: Raster) {
        self.images.insert(name.into(), img.to_rgb());
    }

    pub fn get(&self, name: &str) -> Result<&Raster> {
        self.images.get(name).ok_or_else(|| Error::UnknownTexture(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.images.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// The `w×h` window at `(x, y)`.
    pub fn crop(&self, name: &str, x: usize, y: usize, w: usize, h: usize) -> Result<Raster> {
        let tex = self.get(name)?;
        if x + w > tex.width() || y + h > tex.height() {
            return Err(Error::TextureTooSmall {
                name: name.to_string(),
                tex_w: tex.width(),
                tex_h: tex.height(),
                x,
                y,
                crop_w: w,
                crop_h: h,
            });
        }
        let mut out = Raster::rgb(w, h, [0.0; 3]);
        for j in 0..h {
            for i in 0..w {
                for c in 0..3 {
                    out.set(i, j, c, tex.get(x + i, y + j, c));
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FillSpec {
    Uniform { color: RgbColor },
    Texture { name: String, x: usize, y: usize },
}

impl FillSpec {
    pub fn uniform(color: RgbColor) -> Self {
        FillSpec::Uniform { color }
    }

    fn paint(&self, w: usize, h: usize, textures: &TextureSet) -> Result<Raster> {
        match self {
            FillSpec::Uniform { color } => Ok(Raster::rgb(w, h, color.to_f64())),
            FillSpec::Texture { name, x, y } => textures.crop(name, *x, *y, w, h),
        }
    }
}

impl fmt::Display for FillSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FillSpec::Uniform { color } => write!(f, "{color}"),
            FillSpec::Texture { name, x, y } => write!(f, "texture:{name}@{x},{y}"),
        }
    }
}

fn over(base: &Raster, paint: &Raster, alpha: &Raster) -> Raster {
    let mut out = base.clone();
    for y in 0..base.height() {
        for x in 0..base.width() {
            let a = alpha.get(x, y, 0);
            for c in 0..3 {
                let v = base.get(x, y, c);
                out.set(x, y, c, v + a * (paint.get(x, y, c) - v));
            }
        }
    }
    out
}

/// Paints the fill through the coverage onto white.
pub fn fill_foreground(mask: &Raster, spec: &FillSpec, textures: &TextureSet) -> Result<RasterLayer> {
    let (w, h) = (mask.width(), mask.height());
    let paint = spec.paint(w, h, textures)?;
    let image = over(&Raster::rgb(w, h, [255.0; 3]), &paint, mask);
    Ok(RasterLayer::new(image, mask.clone()))
}

/// Ring of `width` pixels around the mask, painted with `spec` and added to the mask.
pub fn add_outline(layer: &RasterLayer, width: usize, spec: &FillSpec, textures: &TextureSet) -> Result<RasterLayer> {
    if width == 0 {
        return Err(Error::ConfigRange("outline width must be at least 1".into()));
    }
    let side = 2 * width + 1;
    let kernel = MorphKernel::new(KernelShape::Ellipse, side, side)?;
    let grown = morphology(&layer.mask, MorphOp::Dilation, &kernel);
    let ring = grown
        .data()
        .iter()
        .zip(layer.mask.data())
        .map(|(g, m)| (g - m).max(0.0))
        .collect();
    let ring = Raster::from_data(layer.width(), layer.height(), 1, 1.0, ring);
    let paint = spec.paint(layer.width(), layer.height(), textures)?;
    let image = over(&layer.image, &paint, &ring);
    let mask = layer.mask.data().iter().zip(ring.data()).map(|(m, r)| (m + r).min(1.0)).collect();
    Ok(RasterLayer::new(
        image,
        Raster::from_data(layer.width(), layer.height(), 1, 1.0, mask),
    ))
}
