use std::f64::consts::PI;

use super::Raster;

fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let r = (3.0 * sigma).ceil() as i64;
    let w: Vec<f64> = (-r..=r)
        .map(|k| (-((k * k) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|v| v / s).collect()
}

/// One separable pass. `taps[i]` lists `(source index, weight)` for output `i`.
fn convolve_axis(img: &Raster, taps: &[Vec<(usize, f64)>], horizontal: bool) -> Raster {
    let c = img.channels();
    let (w, h) = if horizontal {
        (taps.len(), img.height())
    } else {
        (img.width(), taps.len())
    };
    let mut data = vec![0.0; w * h * c];
    for y in 0..h {
        for x in 0..w {
            let o = (y * w + x) * c;
            let list = if horizontal { &taps[x] } else { &taps[y] };
            for &(s, wt) in list {
                let src = if horizontal { img.index(s, y, 0) } else { img.index(x, s, 0) };
                for ch in 0..c {
                    data[o + ch] += wt * img.data()[src + ch];
                }
            }
        }
    }
    Raster::from_data(w, h, c, img.scale(), data)
}

/// Separable Gaussian, radius `ceil(3σ)`, edges clamped. `sigma = 0` is the identity.
pub fn gaussian_blur(img: &Raster, sigma: f64) -> Raster {
    if sigma <= 0.0 {
        return img.clone();
    }
    let kernel = gaussian_kernel(sigma);
    let r = (kernel.len() / 2) as i64;
    let taps = |n: usize| -> Vec<Vec<(usize, f64)>> {
        (0..n as i64)
            .map(|i| {
                kernel
                    .iter()
                    .enumerate()
                    .map(|(j, &wt)| ((i + j as i64 - r).clamp(0, n as i64 - 1) as usize, wt))
                    .collect()
            })
            .collect()
    };
    let h = convolve_axis(img, &taps(img.width()), true);
    convolve_axis(&h, &taps(img.height()), false)
}

/// Block means over `k×k` tiles; partial tiles are padded by edge clamping.
pub fn reduce_integer(img: &Raster, k: usize) -> Raster {
    assert!(k >= 1, "reduction factor must be at least 1");
    if k == 1 {
        return img.clone();
    }
    let (w, h, c) = (img.width(), img.height(), img.channels());
    let (ow, oh) = (w.div_ceil(k), h.div_ceil(k));
    let norm = 1.0 / (k * k) as f64;
    let mut out = Raster::new(ow, oh, c, img.scale(), 0.0);
    for oy in 0..oh {
        for ox in 0..ow {
            for ch in 0..c {
                let mut s = 0.0;
                for dy in 0..k {
                    let y = (oy * k + dy).min(h - 1);
                    for dx in 0..k {
                        let x = (ox * k + dx).min(w - 1);
                        s += img.get(x, y, ch);
                    }
                }
                out.set(ox, oy, ch, s * norm);
            }
        }
    }
    out
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = PI * x;
        px.sin() / px
    }
}

pub(crate) fn lanczos(x: f64, a: f64) -> f64 {
    if x.abs() < a {
        sinc(x) * sinc(x / a)
    } else {
        0.0
    }
}

/// Normalized Lanczos taps mapping `src` samples onto `dst`, support widened
/// by the downscale factor.
pub(crate) fn lanczos_taps(src: usize, dst: usize, a: f64) -> Vec<Vec<(usize, f64)>> {
    let scale = src as f64 / dst as f64;
    let filter_scale = scale.max(1.0);
    let support = a * filter_scale;
    (0..dst)
        .map(|i| {
            let center = (i as f64 + 0.5) * scale;
            let lo = ((center - support + 0.5).floor().max(0.0)) as usize;
            let hi = ((center + support + 0.5).floor() as usize).min(src);
            let mut taps: Vec<(usize, f64)> = (lo..hi)
                .map(|j| (j, lanczos((j as f64 + 0.5 - center) / filter_scale, a)))
                .collect();
            let total: f64 = taps.iter().map(|t| t.1).sum();
            if total != 0.0 {
                taps.iter_mut().for_each(|t| t.1 /= total);
            }
            taps
        })
        .collect()
}

/// Separable Lanczos-windowed sinc resampling, clamped to `[0, scale]`.
pub fn lanczos_resize(img: &Raster, target_w: usize, target_h: usize, a: usize) -> Raster {
    assert!(target_w > 0 && target_h > 0 && a >= 1);
    let a = a as f64;
    let mut out = img.clone();
    if target_w != img.width() {
        out = convolve_axis(&out, &lanczos_taps(img.width(), target_w, a), true);
    }
    if target_h != img.height() {
        out = convolve_axis(&out, &lanczos_taps(img.height(), target_h, a), false);
    }
    let hi = out.scale();
    out.map(|v| v.clamp(0.0, hi))
}

/// Blur, integer reduction, then Lanczos to the exact target.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResizePlan {
    pub target_w: usize,
    pub target_h: usize,
    pub gaussian_sigma: f64,
    pub integer_factor: usize,
    pub lanczos_a: usize,
}

impl ResizePlan {
    pub fn new(src_w: usize, src_h: usize, target_w: usize, target_h: usize) -> Self {
        let rx = src_w as f64 / target_w as f64;
        let ry = src_h as f64 / target_h as f64;
        let ratio = rx.min(ry);
        Self {
            target_w,
            target_h,
            gaussian_sigma: if ratio > 1.0 { 0.4 * ratio } else { 0.0 },
            integer_factor: ((src_w / target_w).min(src_h / target_h)).max(1),
            lanczos_a: 3,
        }
    }

    pub fn apply(&self, img: &Raster) -> Raster {
        let blurred = gaussian_blur(img, self.gaussian_sigma);
        let reduced = reduce_integer(&blurred, self.integer_factor);
        lanczos_resize(&reduced, self.target_w, self.target_h, self.lanczos_a)
    }
}
