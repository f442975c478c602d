use crate::font::{AnchorPoint, GlyphOutline};

use super::CoverageBitmap;

/// A closed polyline; the closing edge from the last vertex back to the first
/// is implicit.
pub type Polyline = Vec<(f64, f64)>;

const SUBSAMPLES: usize = 4;

fn quad_pieces(p0: AnchorPoint, c: AnchorPoint, p1: AnchorPoint, tol: f64) -> usize {
    let dd = (p0.x - 2.0 * c.x + p1.x).hypot(p0.y - 2.0 * c.y + p1.y);
    (dd / (4.0 * tol)).sqrt().floor() as usize + 1
}

/// Subdivides each quadratic so that the chord error stays below `tol`.
pub fn flatten_outline(g: &GlyphOutline, tol: f64) -> Vec<Polyline> {
    assert!(tol > 0.0, "flattening tolerance must be positive");
    let mut out = Vec::with_capacity(g.contours.len());
    for c in &g.contours {
        let n = c.len();
        let Some(start) = c.iter().position(|p| p.on_curve) else {
            continue;
        };
        let at = |i: usize| c[(start + i) % n];
        let mut poly = vec![(at(0).x, at(0).y)];
        let mut prev = at(0);
        let mut j = 1;
        while j <= n {
            let q = at(j);
            if q.on_curve {
                poly.push((q.x, q.y));
                prev = q;
                j += 1;
                continue;
            }
            let next = at(j + 1);
            let end = if next.on_curve {
                next
            } else {
                AnchorPoint::on((q.x + next.x) * 0.5, (q.y + next.y) * 0.5)
            };
            let pieces = quad_pieces(prev, q, end, tol);
            for s in 1..=pieces {
                let t = s as f64 / pieces as f64;
                let u = 1.0 - t;
                poly.push((
                    u * u * prev.x + 2.0 * u * t * q.x + t * t * end.x,
                    u * u * prev.y + 2.0 * u * t * q.y + t * t * end.y,
                ));
            }
            prev = end;
            j += if next.on_curve { 2 } else { 1 };
        }
        if poly.len() > 1 && poly.first() == poly.last() {
            poly.pop();
        }
        if poly.len() >= 2 {
            out.push(poly);
        }
    }
    out
}

struct Edge {
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
    dir: i32,
}

/// Nonzero-winding scanline fill with 4×4 point samples per pixel.
/// Polyline coordinates are in pixels with `y` growing downward.
pub fn fill_coverage(polylines: &[Polyline], width: usize, height: usize) -> CoverageBitmap {
    let mut out = CoverageBitmap::mask(width, height);
    let mut edges = Vec::new();
    for poly in polylines {
        for i in 0..poly.len() {
            let (ax, ay) = poly[i];
            let (bx, by) = poly[(i + 1) % poly.len()];
            if ay == by {
                continue;
            }
            let (dir, (x0, y0), (x1, y1)) = if ay < by {
                (1, (ax, ay), (bx, by))
            } else {
                (-1, (bx, by), (ax, ay))
            };
            edges.push(Edge { x0, y0, x1, y1, dir });
        }
    }
    if edges.is_empty() {
        return out;
    }
    let sub_w = width * SUBSAMPLES;
    let weight = 1.0 / (SUBSAMPLES * SUBSAMPLES) as f64;
    let mut crossings: Vec<(f64, i32)> = Vec::new();
    let mut counts = vec![0u32; sub_w];
    for row in 0..height {
        counts.iter_mut().for_each(|c| *c = 0);
        for s in 0..SUBSAMPLES {
            let y = row as f64 + (s as f64 + 0.5) / SUBSAMPLES as f64;
            crossings.clear();
            for e in &edges {
                if y >= e.y0 && y < e.y1 {
                    let t = (y - e.y0) / (e.y1 - e.y0);
                    crossings.push((e.x0 + t * (e.x1 - e.x0), e.dir));
                }
            }
            crossings.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut winding = 0;
            for w in 0..crossings.len() {
                winding += crossings[w].1;
                if winding == 0 || w + 1 == crossings.len() {
                    continue;
                }
                let (xa, xb) = (crossings[w].0, crossings[w + 1].0);
                // Sample m sits at (m + 0.5) / 4.
                let first = (xa * SUBSAMPLES as f64 - 0.5).ceil().max(0.0);
                let last = (xb * SUBSAMPLES as f64 - 0.5).ceil().min(sub_w as f64);
                if last > first {
                    for c in &mut counts[first as usize..last as usize] {
                        *c += 1;
                    }
                }
            }
        }
        for x in 0..width {
            let n: u32 = counts[x * SUBSAMPLES..(x + 1) * SUBSAMPLES].iter().sum();
            out.set(x, row, 0, n as f64 * weight);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Polyline {
        vec![(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
    }

    #[test]
    fn exact_square() {
        let cov = fill_coverage(&[rect(2.0, 2.0, 10.0, 10.0)], 12, 12);
        for y in 0..12 {
            for x in 0..12 {
                let inside = (2..10).contains(&x) && (2..10).contains(&y);
                assert_eq!(cov.get(x, y, 0), if inside { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn opposite_windings_cancel_and_agree() {
        let mut hole = rect(4.0, 4.0, 6.0, 6.0);
        hole.reverse();
        let cov = fill_coverage(&[rect(2.0, 2.0, 10.0, 10.0), hole], 12, 12);
        assert_eq!(cov.get(5, 5, 0), 0.0);
        assert_eq!(cov.get(3, 3, 0), 1.0);
        // same direction twice: nonzero keeps it filled
        let cov = fill_coverage(&[rect(2.0, 2.0, 10.0, 10.0), rect(4.0, 4.0, 6.0, 6.0)], 12, 12);
        assert_eq!(cov.get(5, 5, 0), 1.0);
    }

    #[test]
    fn empty_input() {
        assert_eq!(fill_coverage(&[], 3, 3).sum(), 0.0);
    }
}
