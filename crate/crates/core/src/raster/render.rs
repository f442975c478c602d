use crate::error::{Error, Result};
use crate::font::{Bounds, Codepoint, FontFace, GlyphOutline};
use crate::transform::{
    apply_linear_centered, scale_to_grid, vary_proportion, ElasticCache, ElasticParams, Matrix2,
    ProportionParams,
};

use super::{fill_coverage, flatten_outline, CoverageBitmap, Polyline};

const FLATTEN_TOLERANCE: f64 = 0.05;

/// Vector-space stages applied before filling, in this order: elastic,
/// proportion, grid scaling, linear.
#[derive(Clone, Debug, PartialEq)]
pub struct PreTransforms {
    pub elastic: Option<ElasticParams>,
    pub proportion: Option<ProportionParams>,
    /// Applied about each glyph's bounding-box center.
    pub linear: Option<Matrix2>,
    /// Blank border around the ink bounds, as a fraction of the em.
    pub padding: f64,
}

impl Default for PreTransforms {
    fn default() -> Self {
        Self {
            elastic: None,
            proportion: None,
            linear: None,
            padding: 0.05,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Layout {
    /// Pen x of each glyph in grid pixels, first glyph at 0.
    pub pen_positions: Vec<f64>,
    /// Control-point bounds of the placed outlines, grid pixels, y up.
    pub outline_bounds: Bounds,
    /// Grid point mapped to the canvas's top-left corner.
    pub origin: (f64, f64),
    /// Tight bounds `(x0, y0, x1, y1)` of nonzero coverage, exclusive maxima.
    pub ink_bounds: (usize, usize, usize, usize),
}

#[derive(Clone, Debug)]
pub struct Rendering {
    pub coverage: CoverageBitmap,
    pub layout: Layout,
    pub elastic: Option<ElasticCache>,
}

/// Loads, transforms, lays out and fills a code point sequence.
pub fn render_text(face: &FontFace, cps: &[Codepoint], pre: &PreTransforms, em_px: f64) -> Result<Rendering> {
    let mut glyphs = cps.iter().map(|&cp| face.glyph_for(cp)).collect::<Result<Vec<_>>>()?;

    let elastic = pre.elastic.as_ref().map(|p| ElasticCache::draw(&glyphs, p));
    if let Some(cache) = &elastic {
        glyphs = cache.apply(&glyphs);
    }
    if let Some(p) = &pre.proportion {
        glyphs = glyphs.iter().map(|g| vary_proportion(g, p)).collect::<Result<_>>()?;
    }
    let upem = face.units_per_em();
    let mut glyphs: Vec<GlyphOutline> = glyphs.iter().map(|g| scale_to_grid(g, upem, em_px)).collect();
    if let Some(l) = &pre.linear {
        glyphs = glyphs.iter().map(|g| apply_linear_centered(g, l)).collect();
    }

    let mut pen = 0.0;
    let mut pen_positions = Vec::with_capacity(glyphs.len());
    let mut placed = Vec::with_capacity(glyphs.len());
    for g in &glyphs {
        pen_positions.push(pen);
        placed.push(g.translate(pen, 0.0));
        pen += g.advance_width;
    }

    // First pass: bounding box of the whole sequence.
    let bounds = placed
        .iter()
        .filter_map(GlyphOutline::bounds)
        .reduce(Bounds::union)
        .ok_or(Error::EmptyRendering)?;
    if !(bounds.width().is_finite() && bounds.height().is_finite()) {
        return Err(Error::DegenerateOutline("non-finite coordinates after transforms".into()));
    }
    let pad = (pre.padding.max(0.0) * em_px).ceil();
    let ox = bounds.x_min.floor() - pad;
    let oy = bounds.y_max.ceil() + pad;
    let width = (bounds.x_max.ceil() - bounds.x_min.floor() + 2.0 * pad).max(1.0) as usize;
    let height = (bounds.y_max.ceil() - bounds.y_min.floor() + 2.0 * pad).max(1.0) as usize;

    // Second pass: fill on the canvas.
    let polylines: Vec<Polyline> = placed
        .iter()
        .flat_map(|g| flatten_outline(&g.map_points(|x, y| (x - ox, oy - y)), FLATTEN_TOLERANCE))
        .collect();
    let coverage = fill_coverage(&polylines, width, height);
    let ink_bounds = coverage.ink_bounds(0.0).ok_or(Error::EmptyRendering)?;

    Ok(Rendering {
        coverage,
        layout: Layout {
            pen_positions,
            outline_bounds: bounds,
            origin: (ox, oy),
            ink_bounds,
        },
        elastic,
    })
}
