use crate::error::{Error, Result};
use crate::ops::RasterLayer;
use crate::raster::{round_half_up, Raster};

fn check_fits(fg: &RasterLayer, bg: &Raster, pos: (usize, usize)) -> Result<()> {
    if pos.0 + fg.width() > bg.width() || pos.1 + fg.height() > bg.height() {
        return Err(Error::OutOfBounds(format!(
            "{}x{} layer at ({}, {}) on {}x{} background",
            fg.width(),
            fg.height(),
            pos.0,
            pos.1,
            bg.width(),
            bg.height()
        )));
    }
    Ok(())
}

/// `mask·fg + (1 − mask)·bg` over the layer's footprint, rounded half-up.
pub fn blend_naive(fg: &RasterLayer, bg: &Raster, pos: (usize, usize)) -> Result<Raster> {
    check_fits(fg, bg, pos)?;
    let mut out = bg.clone();
    for y in 0..fg.height() {
        for x in 0..fg.width() {
            let m = fg.mask.get(x, y, 0);
            for c in 0..3 {
                let b = bg.get(pos.0 + x, pos.1 + y, c);
                let v = m * fg.image.get(x, y, c) + (1.0 - m) * b;
                out.set(pos.0 + x, pos.1 + y, c, round_half_up(v).clamp(0.0, 255.0));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct PoissonOutcome {
    pub image: Raster,
    pub converged: bool,
    /// Max `|Δu − Δf|` over the solved pixels, per channel maximum, before clamping.
    pub residual: f64,
    pub iterations: usize,
}

impl PoissonOutcome {
    pub fn into_result(self) -> Result<Raster> {
        if self.converged {
            Ok(self.image)
        } else {
            Err(Error::NonConvergence {
                residual: self.residual,
                iterations: self.iterations,
            })
        }
    }
}

pub const DEFAULT_POISSON_TOL: f64 = 1e-3;

/// Seamless cloning: on the pixels where the mask is positive, solves
/// `Δu = Δf` with `u = bg` elsewhere, `f` being the foreground extended past
/// its edges by clamping. Red-black Gauss–Seidel from `u = bg`; each channel
/// is solved and then clamped to `[0, 255]`. `max_iters = None` uses ten
/// sweeps per unknown.
pub fn blend_poisson(
    fg: &RasterLayer,
    bg: &Raster,
    pos: (usize, usize),
    tol: f64,
    max_iters: Option<usize>,
) -> Result<PoissonOutcome> {
    check_fits(fg, bg, pos)?;
    let (bw, bh) = (bg.width(), bg.height());
    let (fw, fh) = (fg.width() as i64, fg.height() as i64);

    // Unknowns: masked pixels off the background border.
    let mut unknown = vec![false; bw * bh];
    let mut cells = Vec::new();
    for y in 0..fg.height() {
        for x in 0..fg.width() {
            let (gx, gy) = (pos.0 + x, pos.1 + y);
            if fg.mask.get(x, y, 0) > 0.0 && gx > 0 && gy > 0 && gx + 1 < bw && gy + 1 < bh {
                unknown[gy * bw + gx] = true;
                cells.push((gx, gy));
            }
        }
    }
    let max_iters = max_iters.unwrap_or(10 * cells.len());
    let mut out = bg.clone();
    if cells.is_empty() {
        return Ok(PoissonOutcome {
            image: out,
            converged: true,
            residual: 0.0,
            iterations: 0,
        });
    }
    let (red, black): (Vec<_>, Vec<_>) = cells.iter().partition(|(x, y)| (x + y) % 2 == 0);
    let f_at = |gx: usize, gy: usize, c: usize| {
        let x = (gx as i64 - pos.0 as i64).clamp(0, fw - 1) as usize;
        let y = (gy as i64 - pos.1 as i64).clamp(0, fh - 1) as usize;
        fg.image.get(x, y, c)
    };
    let neighbours = |x: usize, y: usize| [(x - 1, y), (x + 1, y), (x, y - 1), (x, y + 1)];

    let mut worst = 0.0f64;
    let mut worst_iters = 0;
    let mut all_converged = true;
    for c in 0..3 {
        // Guidance Laplacian per unknown: Σ_q (f_p − f_q).
        let guide: Vec<f64> = cells
            .iter()
            .map(|&(x, y)| neighbours(x, y).iter().map(|&(qx, qy)| f_at(x, y, c) - f_at(qx, qy, c)).sum())
            .collect();
        let mut g = vec![0.0; bw * bh];
        for (&(x, y), v) in cells.iter().zip(&guide) {
            g[y * bw + x] = *v;
        }
        let mut u: Vec<f64> = (0..bw * bh).map(|i| bg.data()[i * 3 + c]).collect();
        let residual = |u: &[f64]| {
            cells
                .iter()
                .map(|&(x, y)| {
                    let s: f64 = neighbours(x, y).iter().map(|&(qx, qy)| u[qy * bw + qx]).sum();
                    (4.0 * u[y * bw + x] - s - g[y * bw + x]).abs()
                })
                .fold(0.0, f64::max)
        };
        let mut r = residual(&u);
        let mut iters = 0;
        while r > tol && iters < max_iters {
            for set in [&red, &black] {
                for &&(x, y) in set.iter() {
                    let s: f64 = neighbours(x, y).iter().map(|&(qx, qy)| u[qy * bw + qx]).sum();
                    u[y * bw + x] = (s + g[y * bw + x]) / 4.0;
                }
            }
            iters += 1;
            r = residual(&u);
        }
        if r > tol {
            all_converged = false;
        }
        worst = worst.max(r);
        worst_iters = worst_iters.max(iters);
        for &(x, y) in &cells {
            out.set(x, y, c, u[y * bw + x].clamp(0.0, 255.0));
        }
    }
    if !all_converged {
        log::warn!("poisson blend stopped at residual {worst} after {worst_iters} iterations");
    }
    Ok(PoissonOutcome {
        image: out,
        converged: all_converged,
        residual: worst,
        iterations: worst_iters,
    })
}
