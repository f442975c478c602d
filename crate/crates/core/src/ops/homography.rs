use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Projective map with `h[2][2] == 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Homography {
    h: [[f64; 3]; 3],
}

fn mul3(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut r = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            r[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    r
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

impl Homography {
    pub const IDENTITY: Homography = Homography {
        h: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    };

    /// Normalizes so that the bottom-right entry is 1.
    pub fn from_matrix(h: [[f64; 3]; 3]) -> Result<Homography> {
        let s = h[2][2];
        if s.abs() < 1e-12 || !h.iter().flatten().all(|v| v.is_finite()) {
            return Err(Error::DegenerateCorrespondence("homography not normalizable".into()));
        }
        let h = h.map(|row| row.map(|v| v / s));
        if det3(&h).abs() <= 1e-12 {
            return Err(Error::DegenerateCorrespondence("singular homography".into()));
        }
        Ok(Homography { h })
    }

    pub fn translation(tx: f64, ty: f64) -> Homography {
        Homography {
            h: [[1.0, 0.0, tx], [0.0, 1.0, ty], [0.0, 0.0, 1.0]],
        }
    }

    pub fn matrix(&self) -> [[f64; 3]; 3] {
        self.h
    }

    pub fn det(&self) -> f64 {
        det3(&self.h)
    }

    pub fn apply(&self, x: f64, y: f64) -> (f64, f64) {
        let h = &self.h;
        let w = h[2][0] * x + h[2][1] * y + h[2][2];
        (
            (h[0][0] * x + h[0][1] * y + h[0][2]) / w,
            (h[1][0] * x + h[1][1] * y + h[1][2]) / w,
        )
    }

    pub fn inverse(&self) -> Result<Homography> {
        let m = &self.h;
        let d = det3(m);
        if d.abs() <= 1e-12 {
            return Err(Error::DegenerateCorrespondence("singular homography".into()));
        }
        let cof = |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
        let adj = [
            [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
            [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
            [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
        ];
        Homography::from_matrix(adj.map(|row| row.map(|v| v / d)))
    }

    /// `self ∘ other`: applies `other` first.
    pub fn compose(&self, other: &Homography) -> Result<Homography> {
        Homography::from_matrix(mul3(&self.h, &other.h))
    }
}

fn check_no_collinear(pts: &[(f64, f64); 4], which: &str) -> Result<()> {
    let extent = pts
        .iter()
        .flat_map(|p| [p.0.abs(), p.1.abs()])
        .fold(1.0f64, f64::max);
    for (i, j, k) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
        let (a, b, c) = (pts[i], pts[j], pts[k]);
        let cross = (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0);
        if !cross.is_finite() || cross.abs() <= 1e-12 * extent * extent {
            return Err(Error::DegenerateCorrespondence(format!(
                "{which} points {i}, {j}, {k} are collinear"
            )));
        }
    }
    Ok(())
}

/// Similarity taking the centroid to the origin and the mean distance to √2.
fn conditioning(pts: &[(f64, f64); 4]) -> [[f64; 3]; 3] {
    let cx = pts.iter().map(|p| p.0).sum::<f64>() / 4.0;
    let cy = pts.iter().map(|p| p.1).sum::<f64>() / 4.0;
    let mean = pts.iter().map(|p| (p.0 - cx).hypot(p.1 - cy)).sum::<f64>() / 4.0;
    let s = std::f64::consts::SQRT_2 / mean;
    [[s, 0.0, -s * cx], [0.0, s, -s * cy], [0.0, 0.0, 1.0]]
}

fn apply_raw(m: &[[f64; 3]; 3], p: (f64, f64)) -> (f64, f64) {
    let w = m[2][0] * p.0 + m[2][1] * p.1 + m[2][2];
    (
        (m[0][0] * p.0 + m[0][1] * p.1 + m[0][2]) / w,
        (m[1][0] * p.0 + m[1][1] * p.1 + m[1][2]) / w,
    )
}

/// Gaussian elimination with partial pivoting.
fn solve8(mut a: [[f64; 9]; 8]) -> Option<[f64; 8]> {
    for col in 0..8 {
        let piv = (col..8).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        for r in col + 1..8 {
            let f = a[r][col] / a[col][col];
            for c in col..9 {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    let mut x = [0.0; 8];
    for r in (0..8).rev() {
        let s: f64 = (r + 1..8).map(|c| a[r][c] * x[c]).sum();
        x[r] = (a[r][8] - s) / a[r][r];
    }
    Some(x)
}

/// Projective map taking each `src[i]` to `dst[i]`.
pub fn solve_homography(src: &[(f64, f64); 4], dst: &[(f64, f64); 4]) -> Result<Homography> {
    check_no_collinear(src, "source")?;
    check_no_collinear(dst, "destination")?;
    let ts = conditioning(src);
    let td = conditioning(dst);
    let mut a = [[0.0; 9]; 8];
    for i in 0..4 {
        let (x, y) = apply_raw(&ts, src[i]);
        let (u, v) = apply_raw(&td, dst[i]);
        a[2 * i] = [x, y, 1.0, 0.0, 0.0, 0.0, -u * x, -u * y, u];
        a[2 * i + 1] = [0.0, 0.0, 0.0, x, y, 1.0, -v * x, -v * y, v];
    }
    let h = solve8(a).ok_or_else(|| Error::DegenerateCorrespondence("singular correspondence system".into()))?;
    let hn = [[h[0], h[1], h[2]], [h[3], h[4], h[5]], [h[6], h[7], 1.0]];
    let s = 1.0 / td[0][0];
    let td_inv = [[s, 0.0, -td[0][2] * s], [0.0, s, -td[1][2] * s], [0.0, 0.0, 1.0]];
    Homography::from_matrix(mul3(&mul3(&td_inv, &hn), &ts))
}
