use serde::{Deserialize, Serialize};

/// An outline control point. Units depend on the stage: font units straight
/// out of the parser, pixels after grid scaling.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnchorPoint {
    pub x: f64,
    pub y: f64,
    pub on_curve: bool,
}

impl AnchorPoint {
    pub fn on(x: f64, y: f64) -> Self {
        Self { x, y, on_curve: true }
    }

    pub fn off(x: f64, y: f64) -> Self {
        Self { x, y, on_curve: false }
    }
}

/// Axis-aligned bounds, `min` inclusive and `max` inclusive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bounds {
    pub x_min: f64,
    pub y_min: f64,
    pub x_max: f64,
    pub y_max: f64,
}

impl Bounds {
    pub fn of_point(x: f64, y: f64) -> Self {
        Self {
            x_min: x,
            y_min: y,
            x_max: x,
            y_max: y,
        }
    }

    pub fn include(&mut self, x: f64, y: f64) {
        self.x_min = self.x_min.min(x);
        self.y_min = self.y_min.min(y);
        self.x_max = self.x_max.max(x);
        self.y_max = self.y_max.max(y);
    }

    pub fn union(self, other: Bounds) -> Bounds {
        let mut b = self;
        b.include(other.x_min, other.y_min);
        b.include(other.x_max, other.y_max);
        b
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn center(&self) -> (f64, f64) {
        (
            (self.x_min + self.x_max) * 0.5,
            (self.y_min + self.y_max) * 0.5,
        )
    }
}

/// Contours of anchor points with TrueType quadratic semantics.
///
/// Outlines produced by the parser are normalized: every contour has at least
/// two points, starts on-curve, and never has two off-curve points in a row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlyphOutline {
    pub contours: Vec<Vec<AnchorPoint>>,
    pub advance_width: f64,
}

impl GlyphOutline {
    pub fn empty(advance_width: f64) -> Self {
        Self {
            contours: Vec::new(),
            advance_width,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.contours.is_empty()
    }

    pub fn point_count(&self) -> usize {
        self.contours.iter().map(Vec::len).sum()
    }

    pub fn points(&self) -> impl Iterator<Item = &AnchorPoint> {
        self.contours.iter().flatten()
    }

    /// Control-point bounds; these contain the curve.
    pub fn bounds(&self) -> Option<Bounds> {
        let mut it = self.points();
        let first = it.next()?;
        let mut b = Bounds::of_point(first.x, first.y);
        for p in it {
            b.include(p.x, p.y);
        }
        Some(b)
    }

    /// Applies `f` to every point's coordinates; flags and topology are kept.
    pub fn map_points(&self, mut f: impl FnMut(f64, f64) -> (f64, f64)) -> GlyphOutline {
        GlyphOutline {
            contours: self
                .contours
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|p| {
                            let (x, y) = f(p.x, p.y);
                            AnchorPoint {
                                x,
                                y,
                                on_curve: p.on_curve,
                            }
                        })
                        .collect()
                })
                .collect(),
            advance_width: self.advance_width,
        }
    }

    pub fn translate(&self, dx: f64, dy: f64) -> GlyphOutline {
        self.map_points(|x, y| (x + dx, y + dy))
    }

    pub fn is_finite(&self) -> bool {
        self.advance_width.is_finite() && self.points().all(|p| p.x.is_finite() && p.y.is_finite())
    }

    /// True when no contour has two consecutive off-curve points (cyclically).
    pub fn is_normalized(&self) -> bool {
        self.contours.iter().all(|c| {
            c.len() >= 2
                && (0..c.len()).all(|i| c[i].on_curve || c[(i + 1) % c.len()].on_curve)
        })
    }
}

/// Inserts the implied on-curve midpoint between consecutive off-curve points
/// and rotates the contour to start on-curve. Contours with fewer than two
/// points are dropped.
pub(crate) fn normalize_contour(raw: &[AnchorPoint]) -> Option<Vec<AnchorPoint>> {
    if raw.len() < 2 {
        return None;
    }
    let n = raw.len();
    let mut out = Vec::with_capacity(n * 2);
    for i in 0..n {
        let p = raw[i];
        let q = raw[(i + 1) % n];
        out.push(p);
        if !p.on_curve && !q.on_curve {
            out.push(AnchorPoint::on((p.x + q.x) * 0.5, (p.y + q.y) * 0.5));
        }
    }
    let start = out.iter().position(|p| p.on_curve)?;
    out.rotate_left(start);
    Some(out)
}
