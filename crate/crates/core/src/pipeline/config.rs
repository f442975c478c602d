use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::ops::{FieldNoise, KernelShape, MorphOp};
use crate::transform::ElasticLaw;

/// Closed interval `[lo, hi]`; `lo == hi` is a fixed value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        let i = Interval { lo, hi };
        i.validate("interval")?;
        Ok(i)
    }

    pub const fn point(v: f64) -> Self {
        Interval { lo: v, hi: v }
    }

    pub fn validate(&self, what: &str) -> Result<()> {
        if !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(Error::ConfigRange(format!("{what}: bounds must be finite")));
        }
        if self.lo > self.hi {
            return Err(Error::ConfigRange(format!("{what}: inverted interval {self}")));
        }
        Ok(())
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn sample(&self, rng: &mut impl Rng) -> f64 {
        if self.lo == self.hi {
            self.lo
        } else {
            rng.gen_range(self.lo..=self.hi)
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{},{}", self.lo, self.hi)
        }
    }
}

impl FromStr for Interval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::ConfigRange(format!("not a number: {t:?}")))
        };
        match s.split_once(',') {
            Some((a, b)) => Interval::new(num(a)?, num(b)?),
            None => {
                let v = num(s)?;
                Interval::new(v, v)
            }
        }
    }
}

macro_rules! keyword_enum {
    ($(#[$m:meta])* $name:ident { $($variant:ident => $kw:literal),+ $(,)? }) => {
        $(#[$m])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub fn name(self) -> &'static str {
                match self {
                    $($name::$variant => $kw),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }

        impl FromStr for $name {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s.trim() {
                    $($kw => Ok($name::$variant),)+
                    other => Err(Error::ConfigRange(format!(
                        "{other:?} is not one of: {}",
                        [$($kw),+].join(", ")
                    ))),
                }
            }
        }
    };
}

keyword_enum!(
    /// How the font of each image is chosen among those covering its super-class.
    FontSelection { Fixed => "fixed", Sampled => "sampled" }
);
keyword_enum!(ForegroundMode { Black => "black", Color => "color", Texture => "texture" });
keyword_enum!(BackgroundMode { White => "white", Color => "color", Polygon => "polygon", Image => "image" });
keyword_enum!(OutlineColor { Black => "black", Color => "color" });
keyword_enum!(BlendMode { Naive => "naive", Poisson => "poisson" });
keyword_enum!(ImageMode { Rgb => "rgb", Grayscale => "grayscale", Binary => "binary" });

fn parse_bool(s: &str) -> Result<bool> {
    match s.trim() {
        "true" | "on" | "yes" | "1" => Ok(true),
        "false" | "off" | "no" | "0" => Ok(false),
        other => Err(Error::ConfigRange(format!("{other:?} is not a boolean"))),
    }
}

fn parse_num<T: FromStr>(s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::ConfigRange(format!("not a number: {s:?}")))
}

fn parse_list<T: FromStr<Err = Error>>(s: &str) -> Result<Vec<T>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(|t| t.trim().parse()).collect()
}

fn show_list<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

/// One value per dimension of the nuisance space. Each optional stage has an
/// enable flag plus its ranges or choice lists.
#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    /// Output side in pixels. Rendering happens at 8× this.
    pub size: usize,
    pub font_sampling: FontSelection,
    /// Font file used with `font_sampling = fixed`; the first covering font when unset.
    pub fixed_font: Option<String>,

    pub elastic: bool,
    /// Font units; `None` is 2% of the em.
    pub elastic_k: Option<f64>,
    pub elastic_law: ElasticLaw,

    pub proportion: bool,
    /// Fractions of the em, converted to font units per face.
    pub ascender_delta: Interval,
    pub descender_delta: Interval,

    pub rotation: bool,
    /// Degrees, counter-clockwise.
    pub rotation_range: Interval,
    pub shear_x: bool,
    pub shear_x_range: Interval,
    pub shear_y: bool,
    pub shear_y_range: Interval,
    pub stretch: bool,
    pub scale_x_range: Interval,
    pub scale_y_range: Interval,

    pub perspective: bool,
    /// Corner jitter as a fraction of the layer size.
    pub perspective_jitter: f64,

    pub morphology: bool,
    pub morphology_ops: Vec<MorphOp>,
    pub morphology_shapes: Vec<KernelShape>,
    /// Odd kernel sides in render pixels.
    pub morphology_sizes: Vec<usize>,

    pub post_elastic: bool,
    /// Render pixels.
    pub post_elastic_amplitude: Interval,
    pub post_elastic_sigma: f64,
    pub post_elastic_noise: FieldNoise,

    pub blur: bool,
    /// Output pixels.
    pub blur_sigma: Interval,

    pub contrast: bool,
    pub contrast_range: Interval,
    pub brightness: bool,
    pub brightness_range: Interval,
    pub color_enhance: bool,
    pub color_enhance_range: Interval,
    pub sharpness: bool,
    pub sharpness_range: Interval,

    pub foreground: ForegroundMode,
    /// Minimum CIEDE2000 distance between sampled colors that must contrast.
    pub delta_e_threshold: f64,
    pub outline: bool,
    /// Output pixels; one is picked per image.
    pub outline_widths: Vec<usize>,
    pub outline_color: OutlineColor,
    pub background: BackgroundMode,
    pub blend: BlendMode,

    /// Fractions of the output side.
    pub margin_top: Interval,
    pub margin_left: Interval,
    pub margin_right: Interval,
    pub margin_bottom: Interval,

    pub image_mode: ImageMode,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            size: 32,
            font_sampling: FontSelection::Fixed,
            fixed_font: None,
            elastic: false,
            elastic_k: None,
            elastic_law: ElasticLaw::IntegerUniform,
            proportion: false,
            ascender_delta: Interval { lo: -0.05, hi: 0.05 },
            descender_delta: Interval { lo: -0.05, hi: 0.05 },
            rotation: false,
            rotation_range: Interval { lo: -30.0, hi: 30.0 },
            shear_x: false,
            shear_x_range: Interval { lo: -0.5, hi: 0.5 },
            shear_y: false,
            shear_y_range: Interval { lo: -0.2, hi: 0.2 },
            stretch: false,
            scale_x_range: Interval { lo: 0.8, hi: 1.2 },
            scale_y_range: Interval { lo: 0.8, hi: 1.2 },
            perspective: false,
            perspective_jitter: 0.15,
            morphology: false,
            morphology_ops: vec![MorphOp::Erosion, MorphOp::Dilation],
            morphology_shapes: vec![KernelShape::Ellipse],
            morphology_sizes: vec![5, 9],
            post_elastic: false,
            post_elastic_amplitude: Interval { lo: 4.0, hi: 12.0 },
            post_elastic_sigma: 16.0,
            post_elastic_noise: FieldNoise::Uniform,
            blur: false,
            blur_sigma: Interval { lo: 0.0, hi: 1.0 },
            contrast: false,
            contrast_range: Interval { lo: 0.7, hi: 1.3 },
            brightness: false,
            brightness_range: Interval { lo: 0.7, hi: 1.3 },
            color_enhance: false,
            color_enhance_range: Interval { lo: 0.5, hi: 1.5 },
            sharpness: false,
            sharpness_range: Interval { lo: 0.5, hi: 2.0 },
            foreground: ForegroundMode::Black,
            delta_e_threshold: 30.0,
            outline: false,
            outline_widths: vec![1],
            outline_color: OutlineColor::Black,
            background: BackgroundMode::White,
            blend: BlendMode::Naive,
            margin_top: Interval { lo: 0.05, hi: 0.1 },
            margin_left: Interval { lo: 0.05, hi: 0.1 },
            margin_right: Interval { lo: 0.05, hi: 0.1 },
            margin_bottom: Interval { lo: 0.05, hi: 0.1 },
            image_mode: ImageMode::Rgb,
        }
    }
}

/// Every configuration key, in file order.
pub const CONFIG_KEYS: &[&str] = &[
    "size",
    "font_sampling",
    "fixed_font",
    "elastic",
    "elastic_k",
    "elastic_law",
    "proportion",
    "ascender_delta",
    "descender_delta",
    "rotation",
    "rotation_range",
    "shear_x",
    "shear_x_range",
    "shear_y",
    "shear_y_range",
    "stretch",
    "scale_x_range",
    "scale_y_range",
    "perspective",
    "perspective_jitter",
    "morphology",
    "morphology_ops",
    "morphology_shapes",
    "morphology_sizes",
    "post_elastic",
    "post_elastic_amplitude",
    "post_elastic_sigma",
    "post_elastic_noise",
    "blur",
    "blur_sigma",
    "contrast",
    "contrast_range",
    "brightness",
    "brightness_range",
    "color_enhance",
    "color_enhance_range",
    "sharpness",
    "sharpness_range",
    "foreground",
    "delta_e_threshold",
    "outline",
    "outline_widths",
    "outline_color",
    "background",
    "blend",
    "margin_top",
    "margin_left",
    "margin_right",
    "margin_bottom",
    "image_mode",
];

pub const PRESETS: &[&str] = &[
    "meta1",
    "meta2",
    "meta3",
    "meta4",
    "meta5",
    "shear-regression",
    "rotation-regression",
];

fn law_name(l: ElasticLaw) -> &'static str {
    match l {
        ElasticLaw::IntegerUniform => "integer",
        ElasticLaw::Uniform => "uniform",
    }
}

fn noise_name(n: FieldNoise) -> &'static str {
    match n {
        FieldNoise::Uniform => "uniform",
        FieldNoise::Gaussian => "gaussian",
    }
}

impl PipelineConfig {
    pub fn preset(name: &str) -> Result<Self> {
        let mut c = PipelineConfig {
            elastic: true,
            ..Default::default()
        };
        match name {
            "meta1" => {}
            "meta2" => c.font_sampling = FontSelection::Sampled,
            "meta3" | "meta4" | "meta5" => {
                c.font_sampling = FontSelection::Sampled;
                c.rotation = true;
                c.rotation_range = Interval { lo: -30.0, hi: 30.0 };
                c.shear_x = true;
                c.shear_x_range = Interval { lo: -0.5, hi: 0.5 };
                c.perspective = true;
                if name != "meta3" {
                    c.foreground = ForegroundMode::Color;
                    c.background = BackgroundMode::Color;
                }
                if name == "meta5" {
                    c.background = BackgroundMode::Image;
                    c.blend = BlendMode::Poisson;
                }
            }
            "shear-regression" => {
                c.font_sampling = FontSelection::Sampled;
                c.shear_x = true;
                c.shear_x_range = Interval { lo: -0.8, hi: 0.8 };
            }
            "rotation-regression" => {
                c.font_sampling = FontSelection::Sampled;
                c.rotation = true;
                c.rotation_range = Interval { lo: -60.0, hi: 60.0 };
            }
            other => return Err(Error::UnknownPreset(other.to_string())),
        }
        Ok(c)
    }

    /// Names of the enabled transform axes.
    pub fn enabled_axes(&self) -> BTreeSet<&'static str> {
        let flags = [
            ("elastic", self.elastic),
            ("sampled_fonts", self.font_sampling == FontSelection::Sampled),
            ("proportion", self.proportion),
            ("rotation", self.rotation),
            ("shear_x", self.shear_x),
            ("shear_y", self.shear_y),
            ("stretch", self.stretch),
            ("perspective", self.perspective),
            ("morphology", self.morphology),
            ("post_elastic", self.post_elastic),
            ("blur", self.blur),
            ("contrast", self.contrast),
            ("brightness", self.brightness),
            ("color_enhance", self.color_enhance),
            ("sharpness", self.sharpness),
            ("colored_foreground", self.foreground != ForegroundMode::Black),
            ("colored_background", matches!(self.background, BackgroundMode::Color | BackgroundMode::Polygon)),
            ("textured_background", self.background == BackgroundMode::Image),
            ("outline", self.outline),
            ("poisson", self.blend == BlendMode::Poisson),
        ];
        flags.into_iter().filter(|f| f.1).map(|f| f.0).collect()
    }

    pub fn get(&self, key: &str) -> Result<String> {
        Ok(match key {
            "size" => self.size.to_string(),
            "font_sampling" => self.font_sampling.to_string(),
            "fixed_font" => self.fixed_font.clone().unwrap_or_default(),
            "elastic" => self.elastic.to_string(),
            "elastic_k" => self.elastic_k.map_or("auto".into(), |k| k.to_string()),
            "elastic_law" => law_name(self.elastic_law).into(),
            "proportion" => self.proportion.to_string(),
            "ascender_delta" => self.ascender_delta.to_string(),
            "descender_delta" => self.descender_delta.to_string(),
            "rotation" => self.rotation.to_string(),
            "rotation_range" => self.rotation_range.to_string(),
            "shear_x" => self.shear_x.to_string(),
            "shear_x_range" => self.shear_x_range.to_string(),
            "shear_y" => self.shear_y.to_string(),
            "shear_y_range" => self.shear_y_range.to_string(),
            "stretch" => self.stretch.to_string(),
            "scale_x_range" => self.scale_x_range.to_string(),
            "scale_y_range" => self.scale_y_range.to_string(),
            "perspective" => self.perspective.to_string(),
            "perspective_jitter" => self.perspective_jitter.to_string(),
            "morphology" => self.morphology.to_string(),
            "morphology_ops" => show_list(&self.morphology_ops.iter().map(|o| o.name()).collect::<Vec<_>>()),
            "morphology_shapes" => show_list(&self.morphology_shapes.iter().map(|s| s.name()).collect::<Vec<_>>()),
            "morphology_sizes" => show_list(&self.morphology_sizes),
            "post_elastic" => self.post_elastic.to_string(),
            "post_elastic_amplitude" => self.post_elastic_amplitude.to_string(),
            "post_elastic_sigma" => self.post_elastic_sigma.to_string(),
            "post_elastic_noise" => noise_name(self.post_elastic_noise).into(),
            "blur" => self.blur.to_string(),
            "blur_sigma" => self.blur_sigma.to_string(),
            "contrast" => self.contrast.to_string(),
            "contrast_range" => self.contrast_range.to_string(),
            "brightness" => self.brightness.to_string(),
            "brightness_range" => self.brightness_range.to_string(),
            "color_enhance" => self.color_enhance.to_string(),
            "color_enhance_range" => self.color_enhance_range.to_string(),
            "sharpness" => self.sharpness.to_string(),
            "sharpness_range" => self.sharpness_range.to_string(),
            "foreground" => self.foreground.to_string(),
            "delta_e_threshold" => self.delta_e_threshold.to_string(),
            "outline" => self.outline.to_string(),
            "outline_widths" => show_list(&self.outline_widths),
            "outline_color" => self.outline_color.to_string(),
            "background" => self.background.to_string(),
            "blend" => self.blend.to_string(),
            "margin_top" => self.margin_top.to_string(),
            "margin_left" => self.margin_left.to_string(),
            "margin_right" => self.margin_right.to_string(),
            "margin_bottom" => self.margin_bottom.to_string(),
            "image_mode" => self.image_mode.to_string(),
            other => return Err(Error::ConfigRange(format!("unknown key {other:?}"))),
        })
    }

    /// Sets one key from its text form. The value is checked in isolation;
    /// cross-key constraints are left to [`validate`](Self::validate).
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        let wrap = |e: Error| match e {
            Error::ConfigRange(m) => Error::ConfigRange(format!("{key}: {m}")),
            other => other,
        };
        (|| -> Result<()> {
            match key {
                "size" => self.size = parse_num(v)?,
                "font_sampling" => self.font_sampling = v.parse()?,
                "fixed_font" => self.fixed_font = (!v.is_empty()).then(|| v.to_string()),
                "elastic" => self.elastic = parse_bool(v)?,
                "elastic_k" => self.elastic_k = if v == "auto" { None } else { Some(parse_num(v)?) },
                "elastic_law" => {
                    self.elastic_law = match v {
                        "integer" => ElasticLaw::IntegerUniform,
                        "uniform" => ElasticLaw::Uniform,
                        _ => return Err(Error::ConfigRange(format!("{v:?} is not one of: integer, uniform"))),
                    }
                }
                "proportion" => self.proportion = parse_bool(v)?,
                "ascender_delta" => self.ascender_delta = v.parse()?,
                "descender_delta" => self.descender_delta = v.parse()?,
                "rotation" => self.rotation = parse_bool(v)?,
                "rotation_range" => self.rotation_range = v.parse()?,
                "shear_x" => self.shear_x = parse_bool(v)?,
                "shear_x_range" => self.shear_x_range = v.parse()?,
                "shear_y" => self.shear_y = parse_bool(v)?,
                "shear_y_range" => self.shear_y_range = v.parse()?,
                "stretch" => self.stretch = parse_bool(v)?,
                "scale_x_range" => self.scale_x_range = v.parse()?,
                "scale_y_range" => self.scale_y_range = v.parse()?,
                "perspective" => self.perspective = parse_bool(v)?,
                "perspective_jitter" => self.perspective_jitter = parse_num(v)?,
                "morphology" => self.morphology = parse_bool(v)?,
                "morphology_ops" => self.morphology_ops = parse_list(v)?,
                "morphology_shapes" => self.morphology_shapes = parse_list(v)?,
                "morphology_sizes" => {
                    self.morphology_sizes = v.split(',').map(parse_num).collect::<Result<_>>()?;
                }
                "post_elastic" => self.post_elastic = parse_bool(v)?,
                "post_elastic_amplitude" => self.post_elastic_amplitude = v.parse()?,
                "post_elastic_sigma" => self.post_elastic_sigma = parse_num(v)?,
                "post_elastic_noise" => {
                    self.post_elastic_noise = match v {
                        "uniform" => FieldNoise::Uniform,
                        "gaussian" => FieldNoise::Gaussian,
                        _ => return Err(Error::ConfigRange(format!("{v:?} is not one of: uniform, gaussian"))),
                    }
                }
                "blur" => self.blur = parse_bool(v)?,
                "blur_sigma" => self.blur_sigma = v.parse()?,
                "contrast" => self.contrast = parse_bool(v)?,
                "contrast_range" => self.contrast_range = v.parse()?,
                "brightness" => self.brightness = parse_bool(v)?,
                "brightness_range" => self.brightness_range = v.parse()?,
                "color_enhance" => self.color_enhance = parse_bool(v)?,
                "color_enhance_range" => self.color_enhance_range = v.parse()?,
                "sharpness" => self.sharpness = parse_bool(v)?,
                "sharpness_range" => self.sharpness_range = v.parse()?,
                "foreground" => self.foreground = v.parse()?,
                "delta_e_threshold" => self.delta_e_threshold = parse_num(v)?,
                "outline" => self.outline = parse_bool(v)?,
                "outline_widths" => self.outline_widths = v.split(',').map(parse_num).collect::<Result<_>>()?,
                "outline_color" => self.outline_color = v.parse()?,
                "background" => self.background = v.parse()?,
                "blend" => self.blend = v.parse()?,
                "margin_top" => self.margin_top = v.parse()?,
                "margin_left" => self.margin_left = v.parse()?,
                "margin_right" => self.margin_right = v.parse()?,
                "margin_bottom" => self.margin_bottom = v.parse()?,
                "image_mode" => self.image_mode = v.parse()?,
                other => return Err(Error::ConfigRange(format!("unknown key {other:?}"))),
            }
            Ok(())
        })()
        .map_err(wrap)
    }

    /// Parses `key = value` lines; `#` starts a comment. A `preset` line
    /// replaces everything set so far with that preset.
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = PipelineConfig::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::ConfigRange(format!("line {}: expected key = value", n + 1)))?;
            let k = k.trim();
            if k == "preset" {
                c = PipelineConfig::preset(v.trim())?;
            } else {
                c.set(k, v).map_err(|e| match e {
                    Error::ConfigRange(m) => Error::ConfigRange(format!("line {}: {m}", n + 1)),
                    other => other,
                })?;
            }
        }
        c.validate()?;
        Ok(c)
    }

    pub fn to_text(&self) -> String {
        CONFIG_KEYS
            .iter()
            .map(|k| format!("{k} = {}\n", self.get(k).expect("listed key")))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::ConfigRange(m));
        if self.size < 2 {
            return bad(format!("size must be at least 2, got {}", self.size));
        }
        let intervals = [
            ("ascender_delta", self.ascender_delta),
            ("descender_delta", self.descender_delta),
            ("rotation_range", self.rotation_range),
            ("shear_x_range", self.shear_x_range),
            ("shear_y_range", self.shear_y_range),
            ("scale_x_range", self.scale_x_range),
            ("scale_y_range", self.scale_y_range),
            ("post_elastic_amplitude", self.post_elastic_amplitude),
            ("blur_sigma", self.blur_sigma),
            ("contrast_range", self.contrast_range),
            ("brightness_range", self.brightness_range),
            ("color_enhance_range", self.color_enhance_range),
            ("sharpness_range", self.sharpness_range),
            ("margin_top", self.margin_top),
            ("margin_left", self.margin_left),
            ("margin_right", self.margin_right),
            ("margin_bottom", self.margin_bottom),
        ];
        for (k, i) in intervals {
            i.validate(k)?;
        }
        for (k, i) in [
            ("margin_top", self.margin_top),
            ("margin_left", self.margin_left),
            ("margin_right", self.margin_right),
            ("margin_bottom", self.margin_bottom),
        ] {
            if i.lo < 0.0 || i.hi >= 0.5 {
                return bad(format!("{k} must lie in [0, 0.5), got {i}"));
            }
        }
        if self.scale_x_range.lo <= 0.0 || self.scale_y_range.lo <= 0.0 {
            return bad("scale ranges must be positive".into());
        }
        for (k, i) in [
            ("blur_sigma", self.blur_sigma),
            ("post_elastic_amplitude", self.post_elastic_amplitude),
            ("contrast_range", self.contrast_range),
            ("brightness_range", self.brightness_range),
            ("color_enhance_range", self.color_enhance_range),
            ("sharpness_range", self.sharpness_range),
        ] {
            if i.lo < 0.0 {
                return bad(format!("{k} must be non-negative, got {i}"));
            }
        }
        if let Some(k) = self.elastic_k {
            if !(k.is_finite() && k >= 0.0) {
                return bad(format!("elastic_k must be a non-negative number, got {k}"));
            }
        }
        if !(0.0..0.5).contains(&self.perspective_jitter) {
            return bad(format!("perspective_jitter must lie in [0, 0.5), got {}", self.perspective_jitter));
        }
        if !(self.post_elastic_sigma.is_finite() && self.post_elastic_sigma >= 0.0) {
            return bad("post_elastic_sigma must be non-negative".into());
        }
        if !(self.delta_e_threshold.is_finite() && self.delta_e_threshold >= 0.0) {
            return bad("delta_e_threshold must be non-negative".into());
        }
        if self.morphology {
            if self.morphology_ops.is_empty() || self.morphology_shapes.is_empty() || self.morphology_sizes.is_empty() {
                return bad("morphology needs at least one op, shape and size".into());
            }
            if let Some(s) = self.morphology_sizes.iter().find(|s| **s % 2 == 0) {
                return bad(format!("morphology sizes must be odd, got {s}"));
            }
        }
        if self.outline && (self.outline_widths.is_empty() || self.outline_widths.contains(&0)) {
            return bad("outline_widths must list positive widths".into());
        }
        Ok(())
    }
}
