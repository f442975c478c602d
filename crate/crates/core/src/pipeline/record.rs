use unicode_normalization::UnicodeNormalization;

use super::sample::NuisanceParams;
use crate::error::{Error, Result};
use crate::font::Codepoint;

/// The class of an image: its code points and alphabet partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelSpec {
    pub codepoints: Vec<Codepoint>,
    /// NFC realization of `codepoints`.
    pub text: String,
    pub super_class: String,
}

impl LabelSpec {
    pub fn new(codepoints: Vec<Codepoint>, super_class: impl Into<String>) -> Result<Self> {
        if codepoints.is_empty() {
            return Err(Error::ConfigRange("a label needs at least one code point".into()));
        }
        let raw: String = codepoints.iter().map(|c| c.as_char()).collect();
        let text: String = raw.nfc().collect();
        if text != raw {
            return Err(Error::ConfigRange(format!("label {raw:?} is not in NFC")));
        }
        Ok(Self {
            codepoints,
            text,
            super_class: super_class.into(),
        })
    }

    pub fn single(cp: Codepoint, super_class: impl Into<String>) -> Self {
        Self::new(vec![cp], super_class).expect("a single NFC code point is a valid label")
    }

    /// `u0041`, or `u0041-u0042` for sequences; used in file names.
    pub fn slug(&self) -> String {
        self.codepoints
            .iter()
            .map(|c| format!("u{:04x}", c.value()))
            .collect::<Vec<_>>()
            .join("-")
    }
}

/// Columns every dataset CSV carries, in order.
pub const MANDATORY_COLUMNS: [&str; 12] = [
    "image_name",
    "text",
    "unicode_code_point",
    "font_file",
    "background",
    "font_weight",
    "margin_bottom",
    "margin_left",
    "margin_right",
    "margin_top",
    "family_name",
    "style_name",
];

/// Label columns after the mandatory ones.
pub const LABEL_COLUMNS: [&str; 3] = ["super_class", "class_index", "instance_index"];

/// Optional per-stage columns, in CSV order. A column is written when at
/// least one record applied that stage.
pub const Z_COLUMNS: [&str; 30] = [
    "z_seed",
    "z_elastic_k",
    "z_elastic_law",
    "z_proportion_ascender_delta",
    "z_proportion_descender_delta",
    "z_linear_rotation",
    "z_linear_shear_x",
    "z_linear_shear_y",
    "z_linear_alpha",
    "z_linear_beta",
    "z_linear_gamma",
    "z_linear_delta",
    "z_linear_scale_x",
    "z_linear_scale_y",
    "z_perspective_corners",
    "z_morphology_ops",
    "z_post_elastic_amplitude",
    "z_post_elastic_sigma",
    "z_post_elastic_noise",
    "z_blur_sigma",
    "z_photometric_contrast",
    "z_photometric_brightness",
    "z_photometric_color",
    "z_photometric_sharpness",
    "z_foreground_fill",
    "z_outline_width",
    "z_outline_fill",
    "z_background_spec",
    "z_blend_mode",
    "z_image_mode",
];

#[derive(Clone, Debug, PartialEq)]
pub struct ImageRecord {
    pub image_name: String,
    pub class_index: usize,
    pub instance_index: usize,
    pub label: LabelSpec,
    pub z: NuisanceParams,
    pub family_name: String,
    pub style_name: String,
}

/// Stroke-weight description: the morphology steps, or `regular`.
pub fn font_weight(z: &NuisanceParams) -> String {
    if z.morphology_ops.is_empty() {
        "regular".into()
    } else {
        z.morphology_ops
            .iter()
            .map(|s| format!("{}:{}", s.op.name(), s.kernel))
            .collect::<Vec<_>>()
            .join(";")
    }
}

pub(crate) fn corners_text(c: &[(f64, f64); 4]) -> String {
    c.iter().map(|(x, y)| format!("{x} {y}")).collect::<Vec<_>>().join(" ")
}

impl ImageRecord {
    /// `(column, value)` pairs: the mandatory columns, the label columns,
    /// then the applied `z_` columns in [`Z_COLUMNS`] order.
    pub fn columns(&self) -> Vec<(&'static str, String)> {
        let z = &self.z;
        let cps = self
            .label
            .codepoints
            .iter()
            .map(|c| c.value().to_string())
            .collect::<Vec<_>>()
            .join(" ");
        let mut out = vec![
            ("image_name", self.image_name.clone()),
            ("text", self.label.text.clone()),
            ("unicode_code_point", cps),
            ("font_file", z.font_file.clone()),
            ("background", z.background.to_string()),
            ("font_weight", font_weight(z)),
            ("margin_bottom", z.margins.bottom.to_string()),
            ("margin_left", z.margins.left.to_string()),
            ("margin_right", z.margins.right.to_string()),
            ("margin_top", z.margins.top.to_string()),
            ("family_name", self.family_name.clone()),
            ("style_name", self.style_name.clone()),
            ("super_class", self.label.super_class.clone()),
            ("class_index", self.class_index.to_string()),
            ("instance_index", self.instance_index.to_string()),
            ("z_seed", z.seed.to_string()),
        ];
        if let Some(e) = &z.elastic {
            out.push(("z_elastic_k", e.magnitude_k.to_string()));
            out.push((
                "z_elastic_law",
                match e.law {
                    crate::transform::ElasticLaw::IntegerUniform => "integer",
                    crate::transform::ElasticLaw::Uniform => "uniform",
                }
                .into(),
            ));
        }
        if let Some(p) = &z.proportion {
            out.push(("z_proportion_ascender_delta", p.ascender_delta.to_string()));
            out.push(("z_proportion_descender_delta", p.descender_delta.to_string()));
        }
        let l = &z.linear;
        out.extend([
            ("z_linear_rotation", l.theta.to_string()),
            ("z_linear_shear_x", l.shear_x.to_string()),
            ("z_linear_shear_y", l.shear_y.to_string()),
            ("z_linear_alpha", l.alpha.to_string()),
            ("z_linear_beta", l.beta.to_string()),
            ("z_linear_gamma", l.gamma.to_string()),
            ("z_linear_delta", l.delta.to_string()),
            ("z_linear_scale_x", l.scale_x.to_string()),
            ("z_linear_scale_y", l.scale_y.to_string()),
        ]);
        if let Some(c) = &z.perspective_corners {
            out.push(("z_perspective_corners", corners_text(c)));
        }
        if !z.morphology_ops.is_empty() {
            out.push(("z_morphology_ops", font_weight(z)));
        }
        if let Some(p) = &z.post_elastic {
            out.push(("z_post_elastic_amplitude", p.amplitude.to_string()));
            out.push(("z_post_elastic_sigma", p.sigma.to_string()));
            out.push((
                "z_post_elastic_noise",
                match p.noise {
                    crate::ops::FieldNoise::Uniform => "uniform",
                    crate::ops::FieldNoise::Gaussian => "gaussian",
                }
                .into(),
            ));
        }
        if z.blur_sigma > 0.0 {
            out.push(("z_blur_sigma", z.blur_sigma.to_string()));
        }
        if !z.photometric.is_identity() {
            let f = &z.photometric;
            out.push(("z_photometric_contrast", f.contrast.to_string()));
            out.push(("z_photometric_brightness", f.brightness.to_string()));
            out.push(("z_photometric_color", f.color.to_string()));
            out.push(("z_photometric_sharpness", f.sharpness.to_string()));
        }
        out.push(("z_foreground_fill", z.foreground.to_string()));
        if let Some(o) = &z.outline {
            out.push(("z_outline_width", o.width.to_string()));
            out.push(("z_outline_fill", o.fill.to_string()));
        }
        out.push((
            "z_background_spec",
            serde_json::to_string(&z.background).expect("background specs serialize"),
        ));
        out.push(("z_blend_mode", z.blend.to_string()));
        out.push(("z_image_mode", z.image_mode.to_string()));
        out
    }
}
