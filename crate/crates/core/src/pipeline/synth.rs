use super::config::{BlendMode, ImageMode};
use super::record::{corners_text, font_weight, LabelSpec};
use super::sample::NuisanceParams;
use super::Assets;
use crate::composite::{add_outline, blend_naive, blend_poisson, fill_foreground, make_background, DEFAULT_POISSON_TOL};
use crate::error::{Error, Result, StageExt};
use crate::ops::{
    adjust_image, elastic_field_warp, luminance, morphology, solve_homography, warp_perspective, DisplacementField,
    RasterLayer,
};
use crate::raster::{gaussian_blur, render_text, round_half_up, PreTransforms, Raster, ResizePlan};
use crate::transform::{compose_linear, ElasticLaw};

/// Rendering resolution relative to the output size.
pub const OVERSAMPLE: usize = 8;

/// Blank border around the rendered glyphs, in em. Leaves room for dilation
/// and displacement before the ink is cropped.
const RENDER_PADDING: f64 = 0.1;

/// Output of [`synthesize`].
#[derive(Clone, Debug)]
pub struct Synthesis {
    /// 8-bit values; RGB, or one channel for grayscale and binary modes.
    pub image: Raster,
    pub family_name: String,
    pub style_name: String,
    /// `(column, value)` for every value a stage consumed, in stage order.
    pub applied: Vec<(&'static str, String)>,
}

/// Applies an output mode to a quantized RGB image. Grayscale uses the
/// 0.299/0.587/0.114 luminance rounded half-up; binary is `gray >= 128`.
pub fn image_mode(img: &Raster, mode: ImageMode) -> Raster {
    assert_eq!(img.channels(), 3, "image modes apply to RGB input");
    let n = img.width() * img.height();
    let gray = || (0..n).map(|i| round_half_up(luminance(&img.data()[i * 3..i * 3 + 3])).clamp(0.0, 255.0));
    match mode {
        ImageMode::Rgb => img.clone(),
        ImageMode::Grayscale => Raster::from_data(img.width(), img.height(), 1, 255.0, gray().collect()),
        ImageMode::Binary => Raster::from_data(
            img.width(),
            img.height(),
            1,
            1.0,
            gray().map(|g| if g >= 128.0 { 1.0 } else { 0.0 }).collect(),
        ),
    }
}

fn crop(img: &Raster, x0: usize, y0: usize, x1: usize, y1: usize) -> Raster {
    let (w, h, ch) = (x1 - x0, y1 - y0, img.channels());
    let mut data = Vec::with_capacity(w * h * ch);
    for y in y0..y1 {
        for x in x0..x1 {
            data.extend_from_slice(img.pixel(x, y));
        }
    }
    Raster::from_data(w, h, ch, img.scale(), data)
}

/// Renders `label` under `z` as a `size`×`size` image.
///
/// Stage order: glyph load, elastic, proportion, grid scaling, linear,
/// fill; perspective, morphology and displacement at render resolution;
/// crop to ink and resize into the margin box; foreground fill and
/// outline; background; blend; photometric factors; blur; quantization;
/// image mode.
pub fn synthesize(assets: &Assets, label: &LabelSpec, z: &NuisanceParams, size: usize) -> Result<Synthesis> {
    let mut applied: Vec<(&'static str, String)> = Vec::new();
    z.margins.validate().stage("margins")?;

    let face = assets
        .fonts
        .get(&z.font_file)
        .ok_or_else(|| Error::ConfigRange(format!("font {} is not loaded", z.font_file)))
        .stage("font")?;
    applied.push(("font_file", z.font_file.clone()));
    applied.push(("family_name", face.family_name().to_string()));
    applied.push(("style_name", face.style_name().to_string()));

    z.linear.validate().stage("linear")?;
    let pre = PreTransforms {
        elastic: z.elastic,
        proportion: z.proportion,
        linear: (!z.linear.is_identity()).then(|| compose_linear(&z.linear)),
        padding: RENDER_PADDING,
    };
    if let Some(e) = &pre.elastic {
        applied.push(("z_elastic_k", e.magnitude_k.to_string()));
        let law = match e.law {
            ElasticLaw::IntegerUniform => "integer",
            ElasticLaw::Uniform => "uniform",
        };
        applied.push(("z_elastic_law", law.into()));
    }
    if let Some(p) = &pre.proportion {
        applied.push(("z_proportion_ascender_delta", p.ascender_delta.to_string()));
        applied.push(("z_proportion_descender_delta", p.descender_delta.to_string()));
    }
    let l = &z.linear;
    applied.extend([
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
    let em_px = (OVERSAMPLE * size) as f64;
    let rendering = render_text(face, &label.codepoints, &pre, em_px).stage("render")?;
    let (w, h) = (rendering.coverage.width(), rendering.coverage.height());
    let mut layer = RasterLayer::new(Raster::rgb(w, h, [255.0; 3]), rendering.coverage);

    if let Some(corners) = &z.perspective_corners {
        let (fw, fh) = (w as f64, h as f64);
        let src = [(0.0, 0.0), (fw, 0.0), (fw, fh), (0.0, fh)];
        let dst = corners.map(|(u, v)| (u * fw, v * fh));
        let hm = solve_homography(&src, &dst).stage("perspective")?;
        layer = warp_perspective(&layer, &hm, [255.0; 3]);
        applied.push(("z_perspective_corners", corners_text(corners)));
    }
    for step in &z.morphology_ops {
        layer.mask = morphology(&layer.mask, step.op, &step.kernel);
    }
    applied.push(("font_weight", font_weight(z)));
    if !z.morphology_ops.is_empty() {
        applied.push(("z_morphology_ops", font_weight(z)));
    }
    if let Some(p) = &z.post_elastic {
        let field = DisplacementField::generate(w, h, z.seed, p.amplitude, p.sigma, p.noise);
        layer = elastic_field_warp(&layer, &field, [255.0; 3]);
        applied.push(("z_post_elastic_amplitude", field.amplitude.to_string()));
        applied.push(("z_post_elastic_sigma", field.smoothing_sigma.to_string()));
        let noise = match p.noise {
            crate::ops::FieldNoise::Uniform => "uniform",
            crate::ops::FieldNoise::Gaussian => "gaussian",
        };
        applied.push(("z_post_elastic_noise", noise.into()));
    }

    // Tight crop, then the resize chain into the margin box.
    let (x0, y0, x1, y1) = layer.mask.ink_bounds(0.0).ok_or(Error::EmptyRendering).stage("crop")?;
    let ink = crop(&layer.mask, x0, y0, x1, y1);
    let (bx, by, bw, bh) = z.margins.content_box(size);
    applied.extend([
        ("margin_top", z.margins.top.to_string()),
        ("margin_left", z.margins.left.to_string()),
        ("margin_right", z.margins.right.to_string()),
        ("margin_bottom", z.margins.bottom.to_string()),
    ]);
    let small = ResizePlan::new(ink.width(), ink.height(), bw, bh).apply(&ink);
    let mut mask = Raster::mask(size, size);
    for y in 0..bh {
        for x in 0..bw {
            mask.set(bx + x, by + y, 0, small.get(x, y, 0).clamp(0.0, 1.0));
        }
    }

    let mut fg = fill_foreground(&mask, &z.foreground, &assets.textures).stage("foreground")?;
    applied.push(("z_foreground_fill", z.foreground.to_string()));
    if let Some(o) = &z.outline {
        fg = add_outline(&fg, o.width, &o.fill, &assets.textures).stage("outline")?;
        applied.push(("z_outline_width", o.width.to_string()));
        applied.push(("z_outline_fill", o.fill.to_string()));
    }
    let bg = make_background(&z.background, size, size, &assets.textures).stage("background")?;
    applied.push(("background", z.background.to_string()));
    applied.push(("z_background_spec", serde_json::to_string(&z.background)?));

    let mut img = match z.blend {
        BlendMode::Naive => blend_naive(&fg, &bg, (0, 0)),
        BlendMode::Poisson => blend_poisson(&fg, &bg, (0, 0), DEFAULT_POISSON_TOL, None).and_then(|o| o.into_result()),
    }
    .stage("blend")?;
    applied.push(("z_blend_mode", z.blend.to_string()));

    if !z.photometric.is_identity() {
        img = adjust_image(&img, &z.photometric);
        let f = &z.photometric;
        applied.extend([
            ("z_photometric_contrast", f.contrast.to_string()),
            ("z_photometric_brightness", f.brightness.to_string()),
            ("z_photometric_color", f.color.to_string()),
            ("z_photometric_sharpness", f.sharpness.to_string()),
        ]);
    }
    if z.blur_sigma > 0.0 {
        img = gaussian_blur(&img, z.blur_sigma);
        applied.push(("z_blur_sigma", z.blur_sigma.to_string()));
    }
    let img = img.map(|v| round_half_up(v).clamp(0.0, 255.0));
    let image = image_mode(&img, z.image_mode);
    applied.push(("z_image_mode", z.image_mode.to_string()));

    Ok(Synthesis {
        image,
        family_name: face.family_name().to_string(),
        style_name: face.style_name().to_string(),
        applied,
    })
}
