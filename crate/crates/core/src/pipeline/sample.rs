use rand::Rng;

use super::config::{
    BackgroundMode, BlendMode, FontSelection, ForegroundMode, ImageMode, Interval, OutlineColor, PipelineConfig,
};
use super::Assets;
use crate::composite::{delta_e_2000, rgb_to_lab, sample_color_pair, BackgroundSpec, FillSpec, RgbColor, MAX_COLOR_ATTEMPTS};
use crate::error::{Error, Result};
use crate::ops::{FieldNoise, MorphKernel, MorphOp, PhotometricFactors};
use crate::seed::{image_seed, stream};
use crate::transform::{ElasticParams, LinearTransformParams, ProportionParams};

/// Margins as fractions of the output side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Margins {
    pub top: f64,
    pub left: f64,
    pub right: f64,
    pub bottom: f64,
}

impl Margins {
    pub const ZERO: Margins = Margins {
        top: 0.0,
        left: 0.0,
        right: 0.0,
        bottom: 0.0,
    };

    pub fn uniform(m: f64) -> Self {
        Margins {
            top: m,
            left: m,
            right: m,
            bottom: m,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for v in [self.top, self.left, self.right, self.bottom] {
            if !(0.0..0.5).contains(&v) {
                return Err(Error::ConfigRange(format!("margin {v} outside [0, 0.5)")));
            }
        }
        Ok(())
    }

    /// Pixel box `(x, y, w, h)` left for the character on a `size` square.
    pub fn content_box(&self, size: usize) -> (usize, usize, usize, usize) {
        let px = |f: f64| (f * size as f64 + 0.5).floor() as usize;
        let (l, t) = (px(self.left), px(self.top));
        let w = size.saturating_sub(l + px(self.right)).max(1);
        let h = size.saturating_sub(t + px(self.bottom)).max(1);
        (l, t, w, h)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MorphStep {
    pub op: MorphOp,
    pub kernel: MorphKernel,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PostElastic {
    /// Render pixels.
    pub amplitude: f64,
    pub sigma: f64,
    pub noise: FieldNoise,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutlineSpec {
    /// Output pixels.
    pub width: usize,
    pub fill: FillSpec,
}

/// One realization of every nuisance factor of an image.
#[derive(Clone, Debug, PartialEq)]
pub struct NuisanceParams {
    pub seed: u64,
    pub font_file: String,
    pub linear: LinearTransformParams,
    /// Magnitude in font units; the displacement stream derives from `seed`.
    pub elastic: Option<ElasticParams>,
    /// Font units.
    pub proportion: Option<ProportionParams>,
    /// Destination corners (top-left, top-right, bottom-right, bottom-left)
    /// as fractions of the render layer size.
    pub perspective_corners: Option<[(f64, f64); 4]>,
    pub morphology_ops: Vec<MorphStep>,
    pub post_elastic: Option<PostElastic>,
    /// Output pixels; 0 disables.
    pub blur_sigma: f64,
    pub photometric: PhotometricFactors,
    pub foreground: FillSpec,
    pub outline: Option<OutlineSpec>,
    pub background: BackgroundSpec,
    pub blend: BlendMode,
    pub margins: Margins,
    pub image_mode: ImageMode,
}

impl NuisanceParams {
    /// Black on white, no transforms, no margins.
    pub fn plain(font_file: impl Into<String>, seed: u64) -> Self {
        NuisanceParams {
            seed,
            font_file: font_file.into(),
            linear: LinearTransformParams::default(),
            elastic: None,
            proportion: None,
            perspective_corners: None,
            morphology_ops: Vec::new(),
            post_elastic: None,
            blur_sigma: 0.0,
            photometric: PhotometricFactors::default(),
            foreground: FillSpec::uniform(RgbColor::BLACK),
            outline: None,
            background: BackgroundSpec::PlainWhite,
            blend: BlendMode::Naive,
            margins: Margins::ZERO,
            image_mode: ImageMode::Rgb,
        }
    }
}

fn draw(seed: u64, name: &str, i: Interval) -> f64 {
    i.sample(&mut stream(seed, name))
}

fn pick<T: Copy>(rng: &mut impl Rng, items: &[T]) -> T {
    items[rng.gen_range(0..items.len())]
}

/// Random color at least `threshold` away from `against`.
fn distinct_color(rng: &mut impl Rng, against: Option<RgbColor>, threshold: f64) -> Result<RgbColor> {
    let Some(other) = against else {
        return Ok(RgbColor::random(rng));
    };
    let lab = rgb_to_lab(other);
    for _ in 0..MAX_COLOR_ATTEMPTS {
        let c = RgbColor::random(rng);
        if delta_e_2000(rgb_to_lab(c), lab) >= threshold {
            return Ok(c);
        }
    }
    Err(Error::SamplingExhausted {
        threshold,
        attempts: MAX_COLOR_ATTEMPTS,
    })
}

/// Draws Z for image `(class_index, instance_index)`. `candidates` are the
/// font files allowed for the class, sorted. Every stage draws from its own
/// stream derived from the image seed.
pub fn sample_nuisance(
    config: &PipelineConfig,
    assets: &Assets,
    candidates: &[String],
    class_index: u64,
    instance_index: u64,
    master_seed: u64,
) -> Result<NuisanceParams> {
    config.validate()?;
    let seed = image_seed(master_seed, class_index, instance_index);
    let size = config.size;

    if candidates.is_empty() {
        return Err(Error::ConfigRange("no font covers this class".into()));
    }
    let font_file = match config.font_sampling {
        FontSelection::Fixed => match &config.fixed_font {
            Some(f) if candidates.contains(f) => f.clone(),
            Some(f) => return Err(Error::ConfigRange(format!("fixed font {f} does not cover this class"))),
            None => candidates[0].clone(),
        },
        FontSelection::Sampled => candidates[stream(seed, "font").gen_range(0..candidates.len())].clone(),
    };
    let face = assets
        .fonts
        .get(&font_file)
        .ok_or_else(|| Error::ConfigRange(format!("font {font_file} is not loaded")))?;
    let upem = face.units_per_em() as f64;

    let elastic = config.elastic.then(|| ElasticParams {
        law: config.elastic_law,
        magnitude_k: config
            .elastic_k
            .unwrap_or_else(|| ElasticParams::default_magnitude(face.units_per_em())),
        seed,
    });
    let proportion = config.proportion.then(|| {
        let mut rng = stream(seed, "proportion");
        let a = (config.ascender_delta.sample(&mut rng) * upem).round();
        let d = (config.descender_delta.sample(&mut rng) * upem).round();
        ProportionParams::with_face_thresholds(face.ascender(), face.descender(), a, d)
    });

    let mut linear = LinearTransformParams::default();
    if config.rotation {
        linear.theta = draw(seed, "rotation", config.rotation_range);
    }
    if config.shear_x {
        linear.shear_x = draw(seed, "shear_x", config.shear_x_range);
    }
    if config.shear_y {
        linear.shear_y = draw(seed, "shear_y", config.shear_y_range);
    }
    if config.stretch {
        let mut rng = stream(seed, "stretch");
        linear.scale_x = config.scale_x_range.sample(&mut rng);
        linear.scale_y = config.scale_y_range.sample(&mut rng);
    }

    let perspective_corners = config.perspective.then(|| {
        let mut rng = stream(seed, "perspective");
        let j = config.perspective_jitter;
        let mut jitter = || if j > 0.0 { rng.gen_range(0.0..j) } else { 0.0 };
        // Corners move inward only, so the warped layer stays on its canvas.
        let mut c = [(0.0, 0.0); 4];
        for (i, (sx, sy)) in [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)].into_iter().enumerate() {
            let (u, v) = (jitter(), jitter());
            c[i] = (
                if sx == 0.0 { u } else { 1.0 - u },
                if sy == 0.0 { v } else { 1.0 - v },
            );
        }
        c
    });

    let morphology_ops = if config.morphology {
        let mut rng = stream(seed, "morphology");
        let op = pick(&mut rng, &config.morphology_ops);
        let shape = pick(&mut rng, &config.morphology_shapes);
        let side = pick(&mut rng, &config.morphology_sizes);
        vec![MorphStep {
            op,
            kernel: MorphKernel::new(shape, side, side)?,
        }]
    } else {
        Vec::new()
    };

    let post_elastic = config.post_elastic.then(|| PostElastic {
        amplitude: draw(seed, "post_elastic", config.post_elastic_amplitude),
        sigma: config.post_elastic_sigma,
        noise: config.post_elastic_noise,
    });
    let blur_sigma = if config.blur {
        draw(seed, "blur", config.blur_sigma)
    } else {
        0.0
    };
    let factor = |on: bool, name: &str, i: Interval| if on { draw(seed, name, i) } else { 1.0 };
    let photometric = PhotometricFactors {
        contrast: factor(config.contrast, "contrast", config.contrast_range),
        brightness: factor(config.brightness, "brightness", config.brightness_range),
        color: factor(config.color_enhance, "color_enhance", config.color_enhance_range),
        sharpness: factor(config.sharpness, "sharpness", config.sharpness_range),
    };

    // Colors: foreground and uniform background are gated by delta E when both are colors.
    let thr = config.delta_e_threshold;
    let mut rng = stream(seed, "colors");
    let uniform_bg = matches!(config.background, BackgroundMode::Color | BackgroundMode::Polygon);
    let (fg_color, bg_color) = match (config.foreground, config.background) {
        (ForegroundMode::Color, BackgroundMode::Color | BackgroundMode::Polygon) => {
            let (f, b) = sample_color_pair(&mut rng, thr)?;
            (Some(f), Some(b))
        }
        (ForegroundMode::Color, BackgroundMode::White) => (Some(distinct_color(&mut rng, Some(RgbColor::WHITE), thr)?), None),
        (ForegroundMode::Color, BackgroundMode::Image) => (Some(RgbColor::random(&mut rng)), None),
        (ForegroundMode::Black, _) if uniform_bg => (Some(RgbColor::BLACK), Some(distinct_color(&mut rng, Some(RgbColor::BLACK), thr)?)),
        (ForegroundMode::Black, _) => (Some(RgbColor::BLACK), None),
        (ForegroundMode::Texture, _) if uniform_bg => (None, Some(RgbColor::random(&mut rng))),
        (ForegroundMode::Texture, _) => (None, None),
    };

    let foreground = match fg_color {
        Some(c) => FillSpec::uniform(c),
        None => texture_fill(&mut stream(seed, "foreground_texture"), assets, size)?,
    };

    let mut rng = stream(seed, "background");
    let background = match config.background {
        BackgroundMode::White => BackgroundSpec::PlainWhite,
        BackgroundMode::Color => BackgroundSpec::Uniform {
            color: bg_color.expect("sampled above"),
        },
        BackgroundMode::Polygon => {
            let poly = distinct_color(&mut rng, fg_color, thr)?;
            BackgroundSpec::sample_polygon(&mut rng, size, size, bg_color.expect("sampled above"), poly)
        }
        BackgroundMode::Image => BackgroundSpec::sample_image(&mut rng, &assets.textures, size, size)?,
    };

    let outline = if config.outline {
        let mut rng = stream(seed, "outline");
        let width = pick(&mut rng, &config.outline_widths);
        let color = match config.outline_color {
            OutlineColor::Black => RgbColor::BLACK,
            OutlineColor::Color => distinct_color(&mut rng, background.base_color(), thr)?,
        };
        Some(OutlineSpec {
            width,
            fill: FillSpec::uniform(color),
        })
    } else {
        None
    };

    let mut rng = stream(seed, "margins");
    let margins = Margins {
        top: config.margin_top.sample(&mut rng),
        left: config.margin_left.sample(&mut rng),
        right: config.margin_right.sample(&mut rng),
        bottom: config.margin_bottom.sample(&mut rng),
    };

    Ok(NuisanceParams {
        seed,
        font_file,
        linear,
        elastic,
        proportion,
        perspective_corners,
        morphology_ops,
        post_elastic,
        blur_sigma,
        photometric,
        foreground,
        outline,
        background,
        blend: config.blend,
        margins,
        image_mode: config.image_mode,
    })
}

fn texture_fill(rng: &mut impl Rng, assets: &Assets, size: usize) -> Result<FillSpec> {
    let names: Vec<&str> = assets.textures.names().collect();
    if names.is_empty() {
        return Err(Error::UnknownTexture("no foreground textures available".into()));
    }
    let name = names[rng.gen_range(0..names.len())];
    let tex = assets.textures.get(name)?;
    if tex.width() < size || tex.height() < size {
        return Err(Error::TextureTooSmall {
            name: name.to_string(),
            tex_w: tex.width(),
            tex_h: tex.height(),
            x: 0,
            y: 0,
            crop_w: size,
            crop_h: size,
        });
    }
    Ok(FillSpec::Texture {
        name: name.to_string(),
        x: rng.gen_range(0..=tex.width() - size),
        y: rng.gen_range(0..=tex.height() - size),
    })
}
