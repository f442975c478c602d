//! Per-image synthesis: sample the nuisance factors, render the label under
//! them and record every applied value.

mod config;
mod record;
mod sample;
mod synth;

use std::path::Path;

pub use config::{
    BackgroundMode, BlendMode, FontSelection, ForegroundMode, ImageMode, Interval, OutlineColor, PipelineConfig,
    CONFIG_KEYS, PRESETS,
};
pub use record::{font_weight, ImageRecord, LabelSpec, LABEL_COLUMNS, MANDATORY_COLUMNS, Z_COLUMNS};
pub use sample::{sample_nuisance, Margins, MorphStep, NuisanceParams, OutlineSpec, PostElastic};
pub use synth::{image_mode, synthesize, Synthesis, OVERSAMPLE};

use crate::composite::TextureSet;
use crate::error::Result;
use crate::font::FontRegistry;

/// Read-only inputs shared by all images: fonts and textures by file name.
#[derive(Clone, Debug, Default)]
pub struct Assets {
    pub fonts: FontRegistry,
    pub textures: TextureSet,
}

impl Assets {
    pub fn new(fonts: FontRegistry, textures: TextureSet) -> Self {
        Self { fonts, textures }
    }

    /// Loads fonts from `fonts_dir` and, when given, textures from `textures_dir`.
    pub fn load(fonts_dir: &Path, textures_dir: Option<&Path>) -> Result<Self> {
        let fonts = FontRegistry::load_dir(fonts_dir)?;
        let textures = match textures_dir {
            Some(d) => TextureSet::load_dir(d)?,
            None => TextureSet::new(),
        };
        Ok(Self { fonts, textures })
    }
}
