//! Pre-rasterization transforms on anchor points.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::font::GlyphOutline;
use crate::seed::stream;

/// Parameters of the composed linear map
/// `L = R(theta) · [[1, shear_x], [shear_y, 1]] · [[alpha, beta], [gamma, delta]] · diag(scale_x, scale_y)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearTransformParams {
    /// Counter-clockwise rotation in degrees.
    pub theta: f64,
    /// Horizontal shear.
    pub shear_x: f64,
    /// Vertical shear.
    pub shear_y: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub scale_x: f64,
    pub scale_y: f64,
}

impl Default for LinearTransformParams {
    fn default() -> Self {
        Self {
            theta: 0.0,
            shear_x: 0.0,
            shear_y: 0.0,
            alpha: 1.0,
            beta: 0.0,
            gamma: 0.0,
            delta: 1.0,
            scale_x: 1.0,
            scale_y: 1.0,
        }
    }
}

impl LinearTransformParams {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.theta,
            self.shear_x,
            self.shear_y,
            self.alpha,
            self.beta,
            self.gamma,
            self.delta,
            self.scale_x,
            self.scale_y,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::ConfigRange("linear transform parameters must be finite".into()));
        }
        if self.scale_x <= 0.0 || self.scale_y <= 0.0 {
            return Err(Error::ConfigRange("scale factors must be positive".into()));
        }
        Ok(())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::default()
    }
}

/// Row-major 2×2 matrix `[[a, b], [d, e]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Matrix2 {
    pub a: f64,
    pub b: f64,
    pub d: f64,
    pub e: f64,
}

impl Matrix2 {
    pub const IDENTITY: Matrix2 = Matrix2 {
        a: 1.0,
        b: 0.0,
        d: 0.0,
        e: 1.0,
    };

    pub fn new(a: f64, b: f64, d: f64, e: f64) -> Self {
        Self { a, b, d, e }
    }

    pub fn scale(s: f64) -> Self {
        Self::new(s, 0.0, 0.0, s)
    }

    /// `self · rhs`
    pub fn mul(&self, rhs: &Matrix2) -> Matrix2 {
        Matrix2 {
            a: self.a * rhs.a + self.b * rhs.d,
            b: self.a * rhs.b + self.b * rhs.e,
            d: self.d * rhs.a + self.e * rhs.d,
            e: self.d * rhs.b + self.e * rhs.e,
        }
    }

    pub fn apply(&self, x: f64, y: f64) -> (f64, f64) {
        (self.a * x + self.b * y, self.d * x + self.e * y)
    }

    pub fn det(&self) -> f64 {
        self.a * self.e - self.b * self.d
    }

    pub fn is_finite(&self) -> bool {
        [self.a, self.b, self.d, self.e].iter().all(|v| v.is_finite())
    }

    pub fn is_symmetric(&self) -> bool {
        self.b == self.d
    }
}

/// Closed form of the rotation · shear · inserted-map · scale product.
pub fn compose_linear(p: &LinearTransformParams) -> Matrix2 {
    let (sin, cos) = p.theta.to_radians().sin_cos();
    let (l1, l2) = (p.shear_x, p.shear_y);
    let (al, be, ga, de) = (p.alpha, p.beta, p.gamma, p.delta);
    let u = al + ga * l1;
    let v = al * l2 + ga;
    let w = be + de * l1;
    let z = be * l2 + de;
    Matrix2 {
        a: p.scale_x * (u * cos - v * sin),
        b: p.scale_y * (w * cos - z * sin),
        d: p.scale_x * (u * sin + v * cos),
        e: p.scale_y * (w * sin + z * cos),
    }
}

/// Maps every point through `l` about the origin.
///
/// The advance becomes the transformed ink width plus the original side
/// bearings scaled by the length of the transformed x axis.
pub fn apply_linear(g: &GlyphOutline, l: &Matrix2) -> GlyphOutline {
    let mut out = g.map_points(|x, y| l.apply(x, y));
    let sx = l.a.hypot(l.d);
    out.advance_width = match (g.bounds(), out.bounds()) {
        (Some(before), Some(after)) => {
            let bearings = before.x_min + (g.advance_width - before.x_max);
            after.width() + bearings * sx
        }
        _ => g.advance_width * sx,
    };
    out
}

/// [`apply_linear`] about the outline's bounding-box center.
pub fn apply_linear_centered(g: &GlyphOutline, l: &Matrix2) -> GlyphOutline {
    let Some(b) = g.bounds() else {
        return apply_linear(g, l);
    };
    let (cx, cy) = b.center();
    let moved = apply_linear(&g.translate(-cx, -cy), l);
    let adv = moved.advance_width;
    let mut back = moved.translate(cx, cy);
    back.advance_width = adv;
    back
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElasticLaw {
    /// Integers uniform on `[-k, k]`.
    #[default]
    IntegerUniform,
    /// Reals uniform on `[-k, k)`.
    Uniform,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElasticParams {
    pub law: ElasticLaw,
    /// Font units.
    pub magnitude_k: f64,
    pub seed: u64,
}

impl ElasticParams {
    /// Default magnitude: 2% of the em, rounded to whole font units.
    pub fn default_magnitude(units_per_em: u16) -> f64 {
        (0.02 * units_per_em as f64).round()
    }
}

/// Per-point displacements indexed by `[glyph][point]`, points in contour order.
#[derive(Clone, Debug, PartialEq)]
pub struct ElasticCache {
    deltas: Vec<Vec<(f64, f64)>>,
}

impl ElasticCache {
    /// Draws `(xdelta, ydelta)` for every point of every glyph, in sequence
    /// order, from a stream seeded by `p.seed`.
    pub fn draw(gs: &[GlyphOutline], p: &ElasticParams) -> ElasticCache {
        let mut rng = stream(p.seed, "elastic");
        let k = p.magnitude_k.max(0.0);
        let deltas = gs
            .iter()
            .map(|g| {
                (0..g.point_count())
                    .map(|_| {
                        if k == 0.0 {
                            return (0.0, 0.0);
                        }
                        match p.law {
                            ElasticLaw::IntegerUniform => {
                                let ki = k.round() as i64;
                                (rng.gen_range(-ki..=ki) as f64, rng.gen_range(-ki..=ki) as f64)
                            }
                            ElasticLaw::Uniform => (rng.gen_range(-k..k), rng.gen_range(-k..k)),
                        }
                    })
                    .collect()
            })
            .collect();
        ElasticCache { deltas }
    }

    pub fn get(&self, glyph: usize, point: usize) -> Option<(f64, f64)> {
        self.deltas.get(glyph)?.get(point).copied()
    }

    /// Applies the cached displacements. Outlines must be the ones the cache
    /// was drawn for.
    pub fn apply(&self, gs: &[GlyphOutline]) -> Vec<GlyphOutline> {
        gs.iter()
            .zip(&self.deltas)
            .map(|(g, d)| {
                let mut i = 0;
                g.map_points(|x, y| {
                    let (dx, dy) = d[i];
                    i += 1;
                    (x + dx, y + dy)
                })
            })
            .collect()
    }
}

/// Independently displaces every anchor point.
pub fn elastic_perturb(gs: &[GlyphOutline], p: &ElasticParams) -> Vec<GlyphOutline> {
    ElasticCache::draw(gs, p).apply(gs)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ProportionParams {
    pub ascender_delta: f64,
    pub descender_delta: f64,
    /// Points with `y` above this move by `ascender_delta`.
    pub ascender_threshold: f64,
    /// Points with `y` below this move by `descender_delta`.
    pub descender_threshold: f64,
}

impl ProportionParams {
    /// Thresholds at 80% of the face's ascender and descender.
    pub fn with_face_thresholds(ascender: i16, descender: i16, ascender_delta: f64, descender_delta: f64) -> Self {
        Self {
            ascender_delta,
            descender_delta,
            ascender_threshold: ascender as f64 * 0.8,
            descender_threshold: descender as f64 * 0.8,
        }
    }
}

fn contour_area(c: &[crate::font::AnchorPoint]) -> f64 {
    let n = c.len();
    (0..n)
        .map(|i| {
            let (p, q) = (c[i], c[(i + 1) % n]);
            p.x * q.y - q.x * p.y
        })
        .sum::<f64>()
        * 0.5
}

/// Lengthens or shortens ascenders and descenders.
pub fn vary_proportion(g: &GlyphOutline, p: &ProportionParams) -> Result<GlyphOutline> {
    if p.ascender_threshold < 0.0 || p.descender_threshold > 0.0 {
        return Err(Error::ConfigRange(
            "proportion thresholds must satisfy ascender >= 0 >= descender".into(),
        ));
    }
    let out = g.map_points(|x, y| {
        if y > p.ascender_threshold {
            (x, y + p.ascender_delta)
        } else if y < p.descender_threshold {
            (x, y + p.descender_delta)
        } else {
            (x, y)
        }
    });
    for (i, (before, after)) in g.contours.iter().zip(&out.contours).enumerate() {
        if contour_area(before).abs() > 1e-9 && contour_area(after).abs() <= 1e-9 {
            return Err(Error::DegenerateOutline(format!(
                "contour {i} collapses under ascender/descender shift"
            )));
        }
    }
    Ok(out)
}

/// Scales font units to pixels (`em_px / units_per_em`), without rounding.
pub fn scale_to_grid(g: &GlyphOutline, units_per_em: u16, em_px: f64) -> GlyphOutline {
    let s = em_px / units_per_em as f64;
    let mut out = g.map_points(|x, y| (x * s, y * s));
    out.advance_width = g.advance_width * s;
    out
}
