//! A procedural stroke font used to build fixture faces.
//!
//! Every glyph is a union of thick strokes (lines, quadratic arcs, rings). Each
//! stroke becomes its own closed contour; all outer contours share one
//! orientation so overlaps stay inked under the nonzero rule.

use crate::writer::{CmapFormat, Component, ComponentTransform, FontBuilder, Glyph, Point};

#[derive(Clone, Copy, Debug)]
enum Stroke {
    Line(f64, f64, f64, f64),
    Curve(f64, f64, f64, f64, f64, f64),
    /// Ellipse drawn with four off-curve points per side (implied on-curve
    /// midpoints only).
    Ring(f64, f64, f64, f64),
}

use Stroke::{Curve as C, Line as L, Ring as R};

fn design(c: char) -> Option<Vec<Stroke>> {
    let strokes = match c {
        '0' => vec![R(250.0, 350.0, 170.0, 330.0), L(180.0, 200.0, 320.0, 500.0)],
        '1' => vec![L(250.0, 0.0, 250.0, 700.0), L(250.0, 700.0, 130.0, 590.0), L(130.0, 0.0, 370.0, 0.0)],
        '2' => vec![C(90.0, 540.0, 250.0, 820.0, 410.0, 540.0), L(410.0, 540.0, 80.0, 0.0), L(80.0, 0.0, 430.0, 0.0)],
        '3' => vec![C(90.0, 650.0, 420.0, 760.0, 260.0, 380.0), C(260.0, 380.0, 470.0, 10.0, 90.0, 60.0)],
        '4' => vec![L(320.0, 0.0, 320.0, 700.0), L(320.0, 700.0, 60.0, 230.0), L(60.0, 230.0, 440.0, 230.0)],
        '5' => vec![
            L(410.0, 700.0, 110.0, 700.0),
            L(110.0, 700.0, 100.0, 410.0),
            C(100.0, 410.0, 500.0, 500.0, 400.0, 150.0),
            C(400.0, 150.0, 330.0, -40.0, 90.0, 60.0),
        ],
        '6' => vec![C(380.0, 690.0, 60.0, 620.0, 90.0, 250.0), R(255.0, 210.0, 165.0, 210.0)],
        '7' => vec![L(80.0, 700.0, 430.0, 700.0), L(430.0, 700.0, 180.0, 0.0)],
        '8' => vec![R(250.0, 530.0, 150.0, 170.0), R(250.0, 190.0, 180.0, 190.0)],
        '9' => vec![R(245.0, 490.0, 165.0, 210.0), C(410.0, 450.0, 440.0, 80.0, 120.0, 10.0)],
        'A' => vec![L(40.0, 0.0, 250.0, 700.0), L(250.0, 700.0, 460.0, 0.0), L(130.0, 260.0, 370.0, 260.0)],
        'B' => vec![
            L(90.0, 0.0, 90.0, 700.0),
            C(90.0, 700.0, 560.0, 535.0, 90.0, 370.0),
            C(90.0, 370.0, 620.0, 185.0, 90.0, 0.0),
        ],
        'C' => vec![C(430.0, 620.0, 40.0, 850.0, 60.0, 350.0), C(60.0, 350.0, 40.0, -150.0, 430.0, 80.0)],
        'D' => vec![L(90.0, 0.0, 90.0, 700.0), C(90.0, 700.0, 640.0, 350.0, 90.0, 0.0)],
        'E' => vec![
            L(90.0, 0.0, 90.0, 700.0),
            L(90.0, 700.0, 420.0, 700.0),
            L(90.0, 350.0, 360.0, 350.0),
            L(90.0, 0.0, 420.0, 0.0),
        ],
        'F' => vec![L(90.0, 0.0, 90.0, 700.0), L(90.0, 700.0, 420.0, 700.0), L(90.0, 350.0, 360.0, 350.0)],
        'G' => vec![
            C(430.0, 620.0, 40.0, 850.0, 60.0, 350.0),
            C(60.0, 350.0, 40.0, -150.0, 430.0, 80.0),
            L(430.0, 80.0, 430.0, 300.0),
            L(430.0, 300.0, 280.0, 300.0),
        ],
        'H' => vec![L(80.0, 0.0, 80.0, 700.0), L(420.0, 0.0, 420.0, 700.0), L(80.0, 350.0, 420.0, 350.0)],
        'I' => vec![L(250.0, 0.0, 250.0, 700.0), L(130.0, 700.0, 370.0, 700.0), L(130.0, 0.0, 370.0, 0.0)],
        'J' => vec![L(380.0, 700.0, 380.0, 200.0), C(380.0, 200.0, 370.0, -60.0, 90.0, 90.0)],
        'K' => vec![L(90.0, 0.0, 90.0, 700.0), L(90.0, 300.0, 420.0, 700.0), L(200.0, 420.0, 430.0, 0.0)],
        'L' => vec![L(90.0, 0.0, 90.0, 700.0), L(90.0, 0.0, 420.0, 0.0)],
        'M' => vec![
            L(60.0, 0.0, 60.0, 700.0),
            L(60.0, 700.0, 250.0, 300.0),
            L(250.0, 300.0, 440.0, 700.0),
            L(440.0, 700.0, 440.0, 0.0),
        ],
        'N' => vec![L(80.0, 0.0, 80.0, 700.0), L(80.0, 700.0, 420.0, 0.0), L(420.0, 0.0, 420.0, 700.0)],
        'O' => vec![R(250.0, 350.0, 200.0, 340.0)],
        'P' => vec![L(90.0, 0.0, 90.0, 700.0), C(90.0, 700.0, 620.0, 535.0, 90.0, 370.0)],
        'Q' => vec![R(250.0, 350.0, 200.0, 340.0), L(300.0, 150.0, 460.0, -40.0)],
        'R' => vec![
            L(90.0, 0.0, 90.0, 700.0),
            C(90.0, 700.0, 620.0, 535.0, 90.0, 370.0),
            L(220.0, 370.0, 430.0, 0.0),
        ],
        'S' => vec![
            C(410.0, 620.0, 150.0, 800.0, 100.0, 560.0),
            C(100.0, 560.0, 80.0, 400.0, 250.0, 350.0),
            C(250.0, 350.0, 440.0, 290.0, 400.0, 140.0),
            C(400.0, 140.0, 330.0, -60.0, 80.0, 90.0),
        ],
        'T' => vec![L(250.0, 0.0, 250.0, 700.0), L(60.0, 700.0, 440.0, 700.0)],
        'U' => vec![
            L(80.0, 700.0, 80.0, 250.0),
            C(80.0, 250.0, 250.0, -170.0, 420.0, 250.0),
            L(420.0, 250.0, 420.0, 700.0),
        ],
        'V' => vec![L(50.0, 700.0, 250.0, 0.0), L(250.0, 0.0, 450.0, 700.0)],
        'W' => vec![
            L(30.0, 700.0, 140.0, 0.0),
            L(140.0, 0.0, 250.0, 450.0),
            L(250.0, 450.0, 360.0, 0.0),
            L(360.0, 0.0, 470.0, 700.0),
        ],
        'X' => vec![L(60.0, 0.0, 440.0, 700.0), L(60.0, 700.0, 440.0, 0.0)],
        'Y' => vec![L(50.0, 700.0, 250.0, 350.0), L(450.0, 700.0, 250.0, 350.0), L(250.0, 350.0, 250.0, 0.0)],
        'Z' => vec![L(70.0, 700.0, 430.0, 700.0), L(430.0, 700.0, 70.0, 0.0), L(70.0, 0.0, 430.0, 0.0)],
        'o' => vec![R(250.0, 250.0, 170.0, 240.0)],
        'p' => vec![R(260.0, 250.0, 170.0, 240.0), L(90.0, 500.0, 90.0, -200.0)],
        'd' => vec![R(240.0, 250.0, 170.0, 240.0), L(410.0, 0.0, 410.0, 760.0)],
        '\u{02C6}' => vec![L(150.0, 560.0, 250.0, 680.0), L(250.0, 680.0, 350.0, 560.0)],
        _ => return None,
    };
    Some(strokes)
}

/// Characters the stroke font can draw, besides the space.
pub const DESIGNED: &str = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZodp";

#[derive(Clone, Debug)]
pub struct StrokeStyle {
    pub family: &'static str,
    pub style: &'static str,
    pub half_width: f64,
    /// Horizontal shear applied to the finished outline (x += slant * y).
    pub slant: f64,
    pub units_per_em: u16,
    pub cmap_format: CmapFormat,
    pub long_loca: bool,
}

/// Builds a face covering `chars` (plus the space and, when `o` is present,
/// a composite `ô`).
pub fn stroke_font(style: &StrokeStyle, chars: &str) -> FontBuilder {
    let mut b = FontBuilder::new(style.family, style.style, style.units_per_em);
    b.cmap_format = style.cmap_format;
    b.long_loca = style.long_loca;
    let k = style.units_per_em as f64 / 1000.0;
    let advance = (600.0 * k).round() as u16;

    let space = b.add_glyph(Glyph::Empty, (300.0 * k).round() as u16);
    b.map(0x20, space);

    let mut o_glyph = None;
    for c in chars.chars() {
        let Some(strokes) = design(c) else { continue };
        let g = b.add_glyph(Glyph::Simple(outline(&strokes, style, k)), advance);
        b.map(c as u32, g);
        if c == 'o' {
            o_glyph = Some(g);
        }
    }
    if let Some(o) = o_glyph {
        let accent_strokes = design('\u{02C6}').expect("accent design");
        let accent = b.add_glyph(Glyph::Simple(outline(&accent_strokes, style, k)), advance);
        let composite = Glyph::Composite(vec![
            Component::offset(o, 0, 0),
            Component {
                glyph: accent,
                dx: 0,
                dy: (20.0 * k).round() as i16,
                transform: ComponentTransform::None,
                point_matching: false,
            },
        ]);
        let o_hat = b.add_glyph(composite, advance);
        b.map(0xF4, o_hat);
    }
    b
}

fn outline(strokes: &[Stroke], style: &StrokeStyle, k: f64) -> Vec<Vec<Point>> {
    let w = style.half_width;
    let mut contours = Vec::new();
    for s in strokes {
        match *s {
            Stroke::Line(x0, y0, x1, y1) => {
                let (dx, dy) = (x1 - x0, y1 - y0);
                let len = (dx * dx + dy * dy).sqrt();
                let (nx, ny) = (-dy / len * w, dx / len * w);
                // extend the caps a little so joints overlap
                let (ex, ey) = (dx / len * w * 0.5, dy / len * w * 0.5);
                let pts = vec![
                    (x0 + nx - ex, y0 + ny - ey, true),
                    (x1 + nx + ex, y1 + ny + ey, true),
                    (x1 - nx + ex, y1 - ny + ey, true),
                    (x0 - nx - ex, y0 - ny - ey, true),
                ];
                contours.push(orient(pts, true));
            }
            Stroke::Curve(x0, y0, cx, cy, x1, y1) => {
                let n0 = unit_normal(cx - x0, cy - y0);
                let n1 = unit_normal(x1 - cx, y1 - cy);
                let left_c = offset_control((x0, y0), (cx, cy), (x1, y1), n0, n1, w);
                let right_c = offset_control((x0, y0), (cx, cy), (x1, y1), n0, n1, -w);
                let pts = vec![
                    (x0 + n0.0 * w, y0 + n0.1 * w, true),
                    (left_c.0, left_c.1, false),
                    (x1 + n1.0 * w, y1 + n1.1 * w, true),
                    (x1 - n1.0 * w, y1 - n1.1 * w, true),
                    (right_c.0, right_c.1, false),
                    (x0 - n0.0 * w, y0 - n0.1 * w, true),
                ];
                contours.push(orient(pts, true));
            }
            Stroke::Ring(cx, cy, rx, ry) => {
                let square = |a: f64, b: f64| {
                    vec![
                        (cx - a, cy - b, false),
                        (cx - a, cy + b, false),
                        (cx + a, cy + b, false),
                        (cx + a, cy - b, false),
                    ]
                };
                contours.push(orient(square(rx + w, ry + w), true));
                contours.push(orient(square(rx - w, ry - w), false));
            }
        }
    }
    contours
        .into_iter()
        .map(|c| {
            c.into_iter()
                .map(|(x, y, on)| {
                    let x = (x + style.slant * y) * k;
                    let y = y * k;
                    Point {
                        x: x.round() as i16,
                        y: y.round() as i16,
                        on_curve: on,
                    }
                })
                .collect()
        })
        .collect()
}

fn unit_normal(dx: f64, dy: f64) -> (f64, f64) {
    let len = (dx * dx + dy * dy).sqrt();
    (-dy / len, dx / len)
}

/// Intersection of the two tangent lines offset by `w`.
fn offset_control(
    p0: (f64, f64),
    c: (f64, f64),
    p1: (f64, f64),
    n0: (f64, f64),
    n1: (f64, f64),
    w: f64,
) -> (f64, f64) {
    let a = (p0.0 + n0.0 * w, p0.1 + n0.1 * w);
    let da = (c.0 - p0.0, c.1 - p0.1);
    let b = (p1.0 + n1.0 * w, p1.1 + n1.1 * w);
    let db = (p1.0 - c.0, p1.1 - c.1);
    let denom = da.0 * db.1 - da.1 * db.0;
    if denom.abs() < 1e-9 {
        let n = ((n0.0 + n1.0) * 0.5, (n0.1 + n1.1) * 0.5);
        return (c.0 + n.0 * w, c.1 + n.1 * w);
    }
    let t = ((b.0 - a.0) * db.1 - (b.1 - a.1) * db.0) / denom;
    (a.0 + da.0 * t, a.1 + da.1 * t)
}

/// Reorders a contour so its signed area is negative (clockwise, y up) when
/// `clockwise`, positive otherwise.
fn orient(pts: Vec<(f64, f64, bool)>, clockwise: bool) -> Vec<(f64, f64, bool)> {
    let n = pts.len();
    let area: f64 = (0..n)
        .map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            a.0 * b.1 - b.0 * a.1
        })
        .sum();
    if (area < 0.0) == clockwise {
        pts
    } else {
        let mut r = pts;
        r.reverse();
        r
    }
}
