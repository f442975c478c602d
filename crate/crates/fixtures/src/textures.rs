//! Procedural "natural" textures for background and fill fixtures.

use image::{Rgb, RgbImage};

fn hash(mut x: u32) -> u32 {
    x ^= x >> 16;
    x = x.wrapping_mul(0x7feb_352d);
    x ^= x >> 15;
    x = x.wrapping_mul(0x846c_a68b);
    x ^ (x >> 16)
}

fn lattice(ix: i32, iy: i32, seed: u32) -> f64 {
    let h = hash((ix as u32).wrapping_mul(73_856_093) ^ (iy as u32).wrapping_mul(19_349_663) ^ seed);
    h as f64 / u32::MAX as f64
}

/// Bilinearly interpolated lattice noise in [0, 1].
fn value_noise(x: f64, y: f64, seed: u32) -> f64 {
    let (x0, y0) = (x.floor(), y.floor());
    let (fx, fy) = (x - x0, y - y0);
    let (sx, sy) = (fx * fx * (3.0 - 2.0 * fx), fy * fy * (3.0 - 2.0 * fy));
    let (ix, iy) = (x0 as i32, y0 as i32);
    let a = lattice(ix, iy, seed);
    let b = lattice(ix + 1, iy, seed);
    let c = lattice(ix, iy + 1, seed);
    let d = lattice(ix + 1, iy + 1, seed);
    let top = a + (b - a) * sx;
    let bottom = c + (d - c) * sx;
    top + (bottom - top) * sy
}

fn fractal(x: f64, y: f64, seed: u32) -> f64 {
    let mut sum = 0.0;
    let mut amp = 0.5;
    let mut freq = 1.0;
    for octave in 0..4 {
        sum += amp * value_noise(x * freq, y * freq, seed.wrapping_add(octave));
        amp *= 0.5;
        freq *= 2.0;
    }
    sum / 0.9375
}

fn render(w: u32, h: u32, f: impl Fn(f64, f64) -> [f64; 3]) -> RgbImage {
    RgbImage::from_fn(w, h, |x, y| {
        let c = f(x as f64, y as f64);
        Rgb(c.map(|v| (v.clamp(0.0, 1.0) * 255.0).round() as u8))
    })
}

/// Three deterministic textures as `(file name, image)`.
pub fn fixture_textures() -> Vec<(String, RgbImage)> {
    let marble = render(128, 128, |x, y| {
        let n = fractal(x / 24.0, y / 24.0, 11);
        let v = 0.5 + 0.5 * ((x / 9.0) + 6.0 * n).sin();
        [0.55 + 0.4 * v, 0.5 + 0.35 * v, 0.45 + 0.3 * v]
    });
    let foliage = render(96, 160, |x, y| {
        let n = fractal(x / 12.0, y / 12.0, 29);
        let m = fractal(x / 40.0, y / 40.0, 31);
        [0.15 + 0.3 * m, 0.35 + 0.5 * n, 0.1 + 0.2 * n * m]
    });
    let sky = render(160, 96, |x, y| {
        let n = fractal(x / 30.0, y / 20.0, 47);
        let t = y / 96.0;
        [0.35 + 0.5 * n * t, 0.55 + 0.35 * n, 0.85 - 0.2 * t]
    });
    vec![
        ("foliage.png".to_string(), foliage),
        ("marble.png".to_string(), marble),
        ("sky.png".to_string(), sky),
    ]
}
