//! Acceptance suite. Each criterion runs against an independent oracle and
//! a wall-clock budget; one PASS/FAIL line is printed per criterion.
//!
//! Run with `cargo test -p glyphforge --test acceptance`.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use glyphforge::composite::{blend_poisson, delta_e_2000, LabColor, DEFAULT_POISSON_TOL};
use glyphforge::dataset::*;
use glyphforge::episodes::*;
use glyphforge::font::{parse_font, Codepoint, GlyphOutline};
use glyphforge::ops::*;
use glyphforge::pipeline::{Assets, PipelineConfig, MANDATORY_COLUMNS};
use glyphforge::raster::*;
use glyphforge::transform::*;
use glyphforge_fixtures as fx;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

struct Outcome {
    passed: bool,
}

fn run(name: &str, budget: Duration, f: impl FnOnce() -> Check) -> Outcome {
    let start = Instant::now();
    let result = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    });
    let elapsed = start.elapsed();
    let (passed, detail) = match result {
        Ok(d) if elapsed <= budget => (true, d),
        Ok(d) => (false, format!("{d}; over budget")),
        Err(e) => (false, e),
    };
    println!(
        "{} {name:<28} {:>9.3}s / {:>6.0}s  {detail}",
        if passed { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs_f64()
    );
    Outcome { passed }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn snapshot(root: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for e in fs::read_dir(&dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                out.insert(rel, fs::read(&p).unwrap());
            }
        }
    }
    out
}

struct Fixture {
    _dir: tempfile::TempDir,
    assets: Assets,
    alphabet: Alphabet,
}

fn fixture() -> Fixture {
    let dir = tempfile::tempdir().unwrap();
    fx::write_fixture_dir(dir.path()).unwrap();
    let assets = Assets::load(&dir.path().join("fonts"), Some(&dir.path().join("textures"))).unwrap();
    let alphabet = Alphabet::load(&dir.path().join("alphabet.txt")).unwrap();
    Fixture {
        _dir: dir,
        assets,
        alphabet,
    }
}

fn options(preset: &str, seed: u64, threads: Option<usize>) -> GenerateOptions {
    GenerateOptions {
        config: PipelineConfig::preset(preset).unwrap(),
        count: 20,
        seed,
        threads,
    }
}

// ---------------------------------------------------------------- dataset

fn check_dataset_shape(fix: &Fixture, preset: &str, out: &Path) -> Check {
    let start = Instant::now();
    generate_dataset(&fix.assets, &fix.alphabet, &options(preset, 7, None), out).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure!(elapsed < secs(120), "{preset} took {elapsed:?}");

    let summary = validate_dataset(out).map_err(|e| e.to_string())?;
    ensure!(summary.rows == 600, "{preset}: {} rows", summary.rows);
    ensure!(summary.classes == 30, "{preset}: {} classes", summary.classes);
    let table = LabelTable::read(&DatasetLayout::new(out).labels_path()).map_err(|e| e.to_string())?;
    for col in MANDATORY_COLUMNS {
        ensure!(table.column(col).is_some(), "{preset}: missing column {col}");
    }
    let pngs: Vec<_> = fs::read_dir(out.join(DATA_DIR))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "png"))
        .collect();
    ensure!(pngs.len() == 600, "{preset}: {} PNGs", pngs.len());
    for p in &pngs {
        let img = image::open(p).map_err(|e| format!("{}: {e}", p.display()))?;
        ensure!(
            img.color() == image::ColorType::Rgb8 && img.width() == 32 && img.height() == 32,
            "{}: {:?} {}x{}",
            p.display(),
            img.color(),
            img.width(),
            img.height()
        );
    }
    Ok(format!("{preset} {:.1}s", elapsed.as_secs_f64()))
}

fn dataset_shape() -> Check {
    let fix = fixture();
    let out = tempfile::tempdir().unwrap();
    let mut parts = Vec::new();
    for preset in ["meta1", "meta2", "meta3", "meta4", "meta5"] {
        parts.push(check_dataset_shape(&fix, preset, &out.path().join(preset))?);
    }
    Ok(format!("600 RGB 32x32 PNGs and rows each; {}", parts.join(", ")))
}

// ------------------------------------------------------------------ split

fn split_rule() -> Check {
    let names: Vec<String> = (0..1409).map(|i| format!("class_{i:04}")).collect();
    let (train, valid, test) = split_classes(&names).map_err(|e| e.to_string())?;
    let got = (train.len(), valid.len(), test.len());
    ensure!(got == (900, 149, 360), "got {got:?}");
    let mut all = train;
    all.extend(valid);
    all.extend(test);
    ensure!(all == names, "split does not partition the class list in order");
    Ok("(900, 149, 360)".into())
}

// ------------------------------------------------------------- linear map

type M = [[f64; 2]; 2];

fn mm(x: M, y: M) -> M {
    let mut r = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    r
}

fn four_matrix_product(p: &LinearTransformParams) -> M {
    let t = p.theta.to_radians();
    let rot = [[t.cos(), -t.sin()], [t.sin(), t.cos()]];
    let shear = [[1.0, p.shear_x], [p.shear_y, 1.0]];
    let inserted = [[p.alpha, p.beta], [p.gamma, p.delta]];
    let scale = [[p.scale_x, 0.0], [0.0, p.scale_y]];
    mm(mm(mm(rot, shear), inserted), scale)
}

fn linear_closed_form() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let p = LinearTransformParams {
            theta: rng.gen_range(-180.0..180.0),
            shear_x: rng.gen_range(-1.0..1.0),
            shear_y: rng.gen_range(-1.0..1.0),
            alpha: rng.gen_range(-2.0..2.0),
            beta: rng.gen_range(-2.0..2.0),
            gamma: rng.gen_range(-2.0..2.0),
            delta: rng.gen_range(-2.0..2.0),
            scale_x: rng.gen_range(0.1..3.0),
            scale_y: rng.gen_range(0.1..3.0),
        };
        let l = compose_linear(&p);
        let m = four_matrix_product(&p);
        for (got, want) in [(l.a, m[0][0]), (l.b, m[0][1]), (l.d, m[1][0]), (l.e, m[1][1])] {
            worst = worst.max((got - want).abs());
        }
    }
    ensure!(worst <= 1e-12, "max entry error {worst:e}");
    Ok(format!("1000 draws, max entry error {worst:.1e}"))
}

// ------------------------------------------------------------- homography

type Quad = [(f64, f64); 4];

fn jittered_quad(rng: &mut ChaCha8Rng, size: f64) -> Quad {
    let j = 0.25 * size;
    [
        (rng.gen_range(0.0..j), rng.gen_range(0.0..j)),
        (size - rng.gen_range(0.0..j), rng.gen_range(0.0..j)),
        (size - rng.gen_range(0.0..j), size - rng.gen_range(0.0..j)),
        (rng.gen_range(0.0..j), size - rng.gen_range(0.0..j)),
    ]
}

fn homography() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let size = rng.gen_range(16.0..512.0);
        let src = jittered_quad(&mut rng, size);
        let dst = jittered_quad(&mut rng, size);
        let h = solve_homography(&src, &dst).map_err(|e| e.to_string())?;
        let m = h.matrix();
        for (s, d) in src.iter().zip(&dst) {
            let v: Vec<f64> = (0..3).map(|r| m[r][0] * s.0 + m[r][1] * s.1 + m[r][2]).collect();
            worst = worst.max((v[0] / v[2] - d.0).hypot(v[1] / v[2] - d.1));
        }
    }
    ensure!(worst < 1e-6, "max residual {worst:e}");
    Ok(format!("500 quad pairs, max residual {worst:.1e}"))
}

// ------------------------------------------------------------- morphology

fn oracle_kernel(shape: KernelShape, w: i64, h: i64) -> Vec<(i64, i64)> {
    let mut k = Vec::new();
    for dy in -(h / 2)..=h / 2 {
        for dx in -(w / 2)..=w / 2 {
            let on = match shape {
                KernelShape::Rectangle => true,
                KernelShape::Cross => dx == 0 || dy == 0,
                KernelShape::Ellipse => 4 * dx * dx * h * h + 4 * dy * dy * w * w <= w * w * h * h,
            };
            if on {
                k.push((dx, dy));
            }
        }
    }
    k
}

/// Min (erode) or max (dilate) filter over the reflected/unreflected
/// footprint, with everything outside the image reading as 0.
fn filter(img: &[u8], n: i64, k: &[(i64, i64)], erode: bool) -> Vec<u8> {
    let at = |x: i64, y: i64| {
        if x < 0 || y < 0 || x >= n || y >= n {
            0
        } else {
            img[(y * n + x) as usize]
        }
    };
    let mut out = vec![0u8; (n * n) as usize];
    for y in 0..n {
        for x in 0..n {
            out[(y * n + x) as usize] = if erode {
                k.iter().map(|d| at(x + d.0, y + d.1)).min().unwrap()
            } else {
                k.iter().map(|d| at(x - d.0, y - d.1)).max().unwrap()
            };
        }
    }
    out
}

fn oracle_morph(op: MorphOp, img: &[u8], n: i64, k: &[(i64, i64)]) -> Vec<u8> {
    let e = |v: &[u8]| filter(v, n, k, true);
    let d = |v: &[u8]| filter(v, n, k, false);
    let sub = |a: &[u8], b: &[u8]| a.iter().zip(b).map(|(x, y)| x.saturating_sub(*y)).collect::<Vec<u8>>();
    match op {
        MorphOp::Erosion => e(img),
        MorphOp::Dilation => d(img),
        MorphOp::Opening => d(&e(img)),
        MorphOp::Closing => e(&d(img)),
        MorphOp::Gradient => sub(&d(img), &e(img)),
        MorphOp::TopHat => sub(img, &d(&e(img))),
        MorphOp::BlackHat => sub(&e(&d(img)), img),
    }
}

fn morphology_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let n = 16usize;
    let mut compared = 0usize;
    for _ in 0..200 {
        let p = rng.gen_range(0.2..0.8);
        let bits: Vec<u8> = (0..n * n).map(|_| rng.gen_bool(p) as u8).collect();
        let img = Raster::from_data(n, n, 1, 1.0, bits.iter().map(|&b| b as f64).collect());
        let (w, h) = [(3, 3), (5, 3), (3, 5), (5, 5)][rng.gen_range(0..4)];
        for shape in KernelShape::ALL {
            let kernel = MorphKernel::new(shape, w, h).map_err(|e| e.to_string())?;
            let k = oracle_kernel(shape, w as i64, h as i64);
            for op in MorphOp::ALL {
                let got: Vec<f64> = morphology(&img, op, &kernel).data().to_vec();
                let want: Vec<f64> = oracle_morph(op, &bits, n as i64, &k).into_iter().map(f64::from).collect();
                ensure!(got == want, "{op:?} with {shape:?} {w}x{h} differs from the min/max filter oracle");
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} op/shape/image cases exact"))
}

// --------------------------------------------------------------- CIEDE2000

/// Published CIEDE2000 test pairs with their reference differences.
const PAIRS: [([f64; 3], [f64; 3], f64); 34] = [
    ([50.0, 2.6772, -79.7751], [50.0, 0.0, -82.7485], 2.0425),
    ([50.0, 3.1571, -77.2803], [50.0, 0.0, -82.7485], 2.8615),
    ([50.0, 2.8361, -74.0200], [50.0, 0.0, -82.7485], 3.4412),
    ([50.0, -1.3802, -84.2814], [50.0, 0.0, -82.7485], 1.0000),
    ([50.0, -1.1848, -84.8006], [50.0, 0.0, -82.7485], 1.0000),
    ([50.0, -0.9009, -85.5211], [50.0, 0.0, -82.7485], 1.0000),
    ([50.0, 0.0, 0.0], [50.0, -1.0, 2.0], 2.3669),
    ([50.0, -1.0, 2.0], [50.0, 0.0, 0.0], 2.3669),
    ([50.0, 2.4900, -0.0010], [50.0, -2.4900, 0.0009], 7.1792),
    ([50.0, 2.4900, -0.0010], [50.0, -2.4900, 0.0010], 7.1792),
    ([50.0, 2.4900, -0.0010], [50.0, -2.4900, 0.0011], 7.2195),
    ([50.0, 2.4900, -0.0010], [50.0, -2.4900, 0.0012], 7.2195),
    ([50.0, -0.0010, 2.4900], [50.0, 0.0009, -2.4900], 4.8045),
    ([50.0, -0.0010, 2.4900], [50.0, 0.0010, -2.4900], 4.8045),
    ([50.0, -0.0010, 2.4900], [50.0, 0.0011, -2.4900], 4.7461),
    ([50.0, 2.5, 0.0], [50.0, 0.0, -2.5], 4.3065),
    ([50.0, 2.5, 0.0], [73.0, 25.0, -18.0], 27.1492),
    ([50.0, 2.5, 0.0], [61.0, -5.0, 29.0], 22.8977),
    ([50.0, 2.5, 0.0], [56.0, -27.0, -3.0], 31.9030),
    ([50.0, 2.5, 0.0], [58.0, 24.0, 15.0], 19.4535),
    ([50.0, 2.5, 0.0], [50.0, 3.1736, 0.5854], 1.0000),
    ([50.0, 2.5, 0.0], [50.0, 3.2972, 0.0], 1.0000),
    ([50.0, 2.5, 0.0], [50.0, 1.8634, 0.5757], 1.0000),
    ([50.0, 2.5, 0.0], [50.0, 3.2592, 0.3350], 1.0000),
    ([60.2574, -34.0099, 36.2677], [60.4626, -34.1751, 39.4387], 1.2644),
    ([63.0109, -31.0961, -5.8663], [62.8187, -29.7946, -4.0864], 1.2630),
    ([61.2901, 3.7196, -5.3901], [61.4292, 2.2480, -4.9620], 1.8731),
    ([35.0831, -44.1164, 3.7933], [35.0232, -40.0716, 1.5901], 1.8645),
    ([22.7233, 20.0904, -46.6940], [23.0331, 14.9730, -42.5619], 2.0373),
    ([36.4612, 47.8580, 18.3852], [36.2715, 50.5065, 21.2231], 1.4146),
    ([90.8027, -2.0831, 1.4410], [91.1528, -1.6435, 0.0447], 1.4441),
    ([90.9257, -0.5406, -0.9208], [88.6381, -0.8985, -0.7239], 1.5381),
    ([6.7747, -0.2908, -2.4247], [5.8714, -0.0985, -2.2286], 0.6377),
    ([2.0776, 0.0795, -1.1350], [0.9033, -0.0636, -0.5514], 0.9082),
];

fn lab(v: [f64; 3]) -> LabColor {
    LabColor::new(v[0], v[1], v[2])
}

/// Step-by-step CIEDE2000 in degrees, written separately from the library.
fn walkthrough_de2000(l1: [f64; 3], l2: [f64; 3]) -> f64 {
    let (rad, deg) = (f64::to_radians, f64::to_degrees);
    let c1 = (l1[1] * l1[1] + l1[2] * l1[2]).sqrt();
    let c2 = (l2[1] * l2[1] + l2[2] * l2[2]).sqrt();
    let cm7 = ((c1 + c2) / 2.0).powi(7);
    let g = 0.5 * (1.0 - (cm7 / (cm7 + 25f64.powi(7))).sqrt());
    let a1 = (1.0 + g) * l1[1];
    let a2 = (1.0 + g) * l2[1];
    let c1p = (a1 * a1 + l1[2] * l1[2]).sqrt();
    let c2p = (a2 * a2 + l2[2] * l2[2]).sqrt();
    let hue = |b: f64, a: f64| {
        if a == 0.0 && b == 0.0 {
            0.0
        } else {
            deg(b.atan2(a)).rem_euclid(360.0)
        }
    };
    let h1 = hue(l1[2], a1);
    let h2 = hue(l2[2], a2);

    let dl = l2[0] - l1[0];
    let dc = c2p - c1p;
    let dh = if c1p * c2p == 0.0 {
        0.0
    } else if (h2 - h1).abs() <= 180.0 {
        h2 - h1
    } else if h2 - h1 > 180.0 {
        h2 - h1 - 360.0
    } else {
        h2 - h1 + 360.0
    };
    let dhh = 2.0 * (c1p * c2p).sqrt() * rad(dh / 2.0).sin();

    let lm = (l1[0] + l2[0]) / 2.0;
    let cm = (c1p + c2p) / 2.0;
    let hm = if c1p * c2p == 0.0 {
        h1 + h2
    } else if (h1 - h2).abs() <= 180.0 {
        (h1 + h2) / 2.0
    } else if h1 + h2 < 360.0 {
        (h1 + h2 + 360.0) / 2.0
    } else {
        (h1 + h2 - 360.0) / 2.0
    };
    let t = 1.0 - 0.17 * rad(hm - 30.0).cos() + 0.24 * rad(2.0 * hm).cos() + 0.32 * rad(3.0 * hm + 6.0).cos()
        - 0.20 * rad(4.0 * hm - 63.0).cos();
    let d_theta = 30.0 * (-((hm - 275.0) / 25.0).powi(2)).exp();
    let rc = 2.0 * (cm.powi(7) / (cm.powi(7) + 25f64.powi(7))).sqrt();
    let sl = 1.0 + 0.015 * (lm - 50.0).powi(2) / (20.0 + (lm - 50.0).powi(2)).sqrt();
    let sc = 1.0 + 0.045 * cm;
    let sh = 1.0 + 0.015 * cm * t;
    let rt = -rad(2.0 * d_theta).sin() * rc;
    let (x, y, z) = (dl / sl, dc / sc, dhh / sh);
    (x * x + y * y + z * z + rt * y * z).sqrt()
}

fn ciede2000() -> Check {
    let mut worst_walk = 0.0f64;
    let mut worst_ref = 0.0f64;
    for (x, y, want) in PAIRS {
        worst_walk = worst_walk.max((walkthrough_de2000(x, y) - want).abs());
        let got = delta_e_2000(lab(x), lab(y));
        worst_ref = worst_ref.max((got - want).abs());
    }
    ensure!(worst_walk <= 1e-4, "walk-through misses the reference pairs by {worst_walk:e}");
    ensure!(worst_ref <= 1e-4, "reference pairs off by {worst_ref:e}");

    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut random = || [rng.gen_range(0.0..100.0), rng.gen_range(-128.0..128.0), rng.gen_range(-128.0..128.0)];
    let mut worst_sym = 0.0f64;
    let mut worst_agree = 0.0f64;
    for _ in 0..10_000 {
        let (rx, ry) = (random(), random());
        let (x, y) = (lab(rx), lab(ry));
        worst_agree = worst_agree.max((delta_e_2000(x, y) - walkthrough_de2000(rx, ry)).abs());
        ensure!(delta_e_2000(x, x) == 0.0, "nonzero self difference at {x:?}");
        let (xy, yx) = (delta_e_2000(x, y), delta_e_2000(y, x));
        ensure!(xy >= 0.0 && xy.is_finite(), "bad difference {xy} for {x:?} {y:?}");
        worst_sym = worst_sym.max((xy - yx).abs());
    }
    ensure!(worst_sym <= 1e-9, "asymmetry {worst_sym:e}");
    ensure!(worst_agree <= 1e-4, "library and walk-through disagree by {worst_agree:e}");
    Ok(format!(
        "34 reference pairs within {worst_ref:.1e}; 10000 random pairs zero/symmetric, walk-through gap {worst_agree:.1e}"
    ))
}

// ----------------------------------------------------------------- Poisson

fn layer(img: Raster, mask: Raster) -> RasterLayer {
    RasterLayer::new(img, mask)
}

/// `max |Δu - Δf|` over the pixels the solver was allowed to change.
fn discrete_residual(out: &Raster, bg: &Raster, fg: &RasterLayer, pos: (usize, usize)) -> f64 {
    let mut worst = 0.0f64;
    let (fw, fh) = (fg.width() as i64, fg.height() as i64);
    let f = |x: i64, y: i64, c: usize| {
        fg.image.get((x - pos.0 as i64).clamp(0, fw - 1) as usize, (y - pos.1 as i64).clamp(0, fh - 1) as usize, c)
    };
    for y in 1..bg.height() as i64 - 1 {
        for x in 1..bg.width() as i64 - 1 {
            let (lx, ly) = (x - pos.0 as i64, y - pos.1 as i64);
            if lx < 0 || ly < 0 || lx >= fw || ly >= fh || fg.mask.get(lx as usize, ly as usize, 0) <= 0.0 {
                continue;
            }
            for c in 0..3 {
                let u = |x: i64, y: i64| out.get(x as usize, y as usize, c);
                let lap_u = u(x - 1, y) + u(x + 1, y) + u(x, y - 1) + u(x, y + 1) - 4.0 * u(x, y);
                let lap_f = f(x - 1, y, c) + f(x + 1, y, c) + f(x, y - 1, c) + f(x, y + 1, c) - 4.0 * f(x, y, c);
                worst = worst.max((lap_u - lap_f).abs());
            }
        }
    }
    worst
}

fn poisson() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut worst = 0.0f64;
    for case in 0..100 {
        // mid-range smooth content so the solution never touches the clamp
        let mut bg = Raster::rgb(16, 16, [0.0; 3]);
        let base: [f64; 3] = std::array::from_fn(|_| rng.gen_range(90.0..165.0));
        let slope: [f64; 2] = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
        for y in 0..16 {
            for x in 0..16 {
                for c in 0..3 {
                    let v = base[c] + slope[0] * (x as f64 - 8.0) + slope[1] * (y as f64 - 8.0) + rng.gen_range(-3.0..3.0);
                    bg.set(x, y, c, v.round());
                }
            }
        }
        let mut fg_img = Raster::rgb(12, 12, [0.0; 3]);
        let mut mask = Raster::mask(12, 12);
        let fbase: [f64; 3] = std::array::from_fn(|_| rng.gen_range(0.0..255.0));
        let density = rng.gen_range(0.3..0.9);
        for y in 0..12 {
            for x in 0..12 {
                for c in 0..3 {
                    fg_img.set(x, y, c, (fbase[c] + rng.gen_range(-4.0..4.0)).clamp(0.0, 255.0));
                }
                if rng.gen_bool(density) {
                    mask.set(x, y, 0, 1.0);
                }
            }
        }
        let fg = layer(fg_img, mask);
        let out = blend_poisson(&fg, &bg, (2, 2), DEFAULT_POISSON_TOL, None).map_err(|e| e.to_string())?;
        ensure!(out.converged, "case {case} did not converge");
        ensure!(
            out.image.data().iter().all(|&v| v > 0.0 && v < 255.0),
            "case {case} hit the clamp; residual is not meaningful"
        );
        let r = discrete_residual(&out.image, &bg, &fg, (2, 2));
        ensure!(r <= DEFAULT_POISSON_TOL, "case {case} residual {r:e}");
        worst = worst.max(r);
    }

    // identity: foreground equal to the background underneath
    let mut identity_err = 0.0f64;
    for _ in 0..10 {
        let bg = Raster::from_data(16, 16, 3, 255.0, (0..16 * 16 * 3).map(|_| rng.gen_range(0..=255) as f64).collect());
        let mut fg_img = Raster::rgb(12, 12, [0.0; 3]);
        let mut mask = Raster::mask(12, 12);
        for y in 0..12 {
            for x in 0..12 {
                for c in 0..3 {
                    fg_img.set(x, y, c, bg.get(x + 2, y + 2, c));
                }
                if (1..11).contains(&x) && (1..11).contains(&y) {
                    mask.set(x, y, 0, 1.0);
                }
            }
        }
        let out = blend_poisson(&layer(fg_img, mask), &bg, (2, 2), DEFAULT_POISSON_TOL, None).map_err(|e| e.to_string())?;
        let e = out.image.data().iter().zip(bg.data()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        identity_err = identity_err.max(e / 255.0);
    }
    ensure!(identity_err <= 1.0 / 255.0, "identity off by {identity_err:e} (unit range)");

    // constant boundary with a flat foreground takes the boundary value
    let mut constant_err = 0.0f64;
    for _ in 0..10 {
        let value: [f64; 3] = std::array::from_fn(|_| rng.gen_range(0..=255) as f64);
        let bg = Raster::rgb(16, 16, value);
        let fill: [f64; 3] = std::array::from_fn(|_| rng.gen_range(0..=255) as f64);
        let fg = layer(Raster::rgb(12, 12, fill), Raster::new(12, 12, 1, 1.0, 1.0));
        let out = blend_poisson(&fg, &bg, (2, 2), DEFAULT_POISSON_TOL, None).map_err(|e| e.to_string())?;
        for y in 0..16 {
            for x in 0..16 {
                for c in 0..3 {
                    constant_err = constant_err.max((out.image.get(x, y, c) - value[c]).abs() / 255.0);
                }
            }
        }
    }
    ensure!(constant_err <= 1.0 / 255.0, "constant boundary off by {constant_err:e} (unit range)");
    Ok(format!(
        "100 cases, max residual {worst:.1e}; identity {identity_err:.1e}, constant {constant_err:.1e} (unit range)"
    ))
}

// --------------------------------------------------------------- elastic

fn registry_outlines() -> Vec<GlyphOutline> {
    let mut out = Vec::new();
    for (_, bytes) in fx::registry_fonts() {
        let face = parse_font(&bytes).unwrap();
        for &cp in face.codepoint_map().keys() {
            out.push(face.glyph_for(Codepoint::from_u32(cp).unwrap()).unwrap());
        }
    }
    out
}

fn elastic_contract() -> Check {
    let fonts = fx::registry_fonts();
    let mut renders = 0;
    for (name, bytes) in &fonts {
        let face = parse_font(bytes).map_err(|e| e.to_string())?;
        let cps: Vec<Codepoint> = face.codepoint_map().keys().map(|&c| Codepoint::from_u32(c).unwrap()).collect();
        for chunk in cps.chunks(3) {
            let plain = render_text(&face, chunk, &PreTransforms::default(), 48.0).map_err(|e| e.to_string())?;
            for law in [ElasticLaw::IntegerUniform, ElasticLaw::Uniform] {
                for seed in [0, 9] {
                    let zero = PreTransforms {
                        elastic: Some(ElasticParams {
                            law,
                            magnitude_k: 0.0,
                            seed,
                        }),
                        ..PreTransforms::default()
                    };
                    let r = render_text(&face, chunk, &zero, 48.0).map_err(|e| e.to_string())?;
                    ensure!(r.coverage == plain.coverage, "{name}: k=0 render differs ({law:?})");
                    renders += 1;
                }
            }
        }
    }

    let gs = registry_outlines();
    let anchors: usize = gs.iter().map(|g| g.points().count()).sum();
    let mut moved = 0usize;
    let mut worst = 0.0f64;
    for law in [ElasticLaw::IntegerUniform, ElasticLaw::Uniform] {
        for seed in 0..20 {
            let p = ElasticParams {
                law,
                magnitude_k: 1.0,
                seed,
            };
            let out = elastic_perturb(&gs, &p);
            for (g, h) in gs.iter().zip(&out) {
                for (a, b) in g.points().zip(h.points()) {
                    let d = (a.x - b.x).abs().max((a.y - b.y).abs());
                    worst = worst.max(d);
                    moved += (d > 0.0) as usize;
                }
            }
            ensure!(out == elastic_perturb(&gs, &p), "elastic draw not reproducible for seed {seed}");
        }
    }
    ensure!(worst <= 1.0, "k=1 moved an anchor by {worst}");
    ensure!(moved > 0, "k=1 moved nothing");

    let face = parse_font(&fonts[0].1).map_err(|e| e.to_string())?;
    let cps: Vec<Codepoint> = face.codepoint_map().keys().take(4).map(|&c| Codepoint::from_u32(c).unwrap()).collect();
    let pre = PreTransforms {
        elastic: Some(ElasticParams {
            law: ElasticLaw::Uniform,
            magnitude_k: 30.0,
            seed: 77,
        }),
        ..PreTransforms::default()
    };
    let a = render_text(&face, &cps, &pre, 64.0).map_err(|e| e.to_string())?;
    let b = render_text(&face, &cps, &pre, 64.0).map_err(|e| e.to_string())?;
    let bits = |r: &Raster| r.data().iter().map(|v| v.to_bits()).collect::<Vec<u64>>();
    ensure!(bits(&a.coverage) == bits(&b.coverage), "same seed rendered differently");
    Ok(format!(
        "{renders} k=0 renders identical; {anchors} anchors x 40 draws, max shift {worst}; same seed bit-exact"
    ))
}

// ------------------------------------------------------ metadata episodes

fn brute_force_knn(values: &[Vec<f64>], members: &[usize], centroid: &[f64], k: usize) -> BTreeSet<usize> {
    let dist = |i: usize| -> f64 { values[i].iter().zip(centroid).map(|(a, b)| (a - b).powi(2)).sum::<f64>() };
    let mut chosen = BTreeSet::new();
    while chosen.len() < k {
        let mut best: Option<usize> = None;
        for &m in members {
            if chosen.contains(&m) {
                continue;
            }
            best = match best {
                Some(b) if dist(b) < dist(m) || (dist(b) == dist(m) && b < m) => Some(b),
                _ => Some(m),
            };
        }
        chosen.insert(best.unwrap());
    }
    chosen
}

fn metadata_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let pairs: Vec<(String, String)> =
        (0..30).flat_map(|c| (0..20).map(move |i| (format!("c{c:02}"), format!("c{c:02}_{i:02}.png")))).collect();
    let n = pairs.len();
    // a coarse grid makes equal distances common, so the tie rule matters
    let values: Vec<Vec<f64>> = (0..n).map(|_| (0..2).map(|_| rng.gen_range(0..4) as f64).collect()).collect();
    let src = EpisodeSource::new(pairs.iter().map(|(c, i)| (c.as_str(), i.as_str())))
        .with_metadata(vec!["rotation".into(), "shear".into()], values.clone())
        .map_err(|e| e.to_string())?;
    let index: BTreeMap<&str, usize> = src.image_names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let spec = EpisodeSpec::new(5, 1, 5, 31).map_err(|e| e.to_string())?;
    let episodes = generate_episodes(&src, &spec, EpisodeMode::Metadata, 200).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for ep in &episodes {
        let centroids = ep.centroids.as_ref().ok_or("episode without centroids")?;
        for (j, class) in ep.classes.iter().enumerate() {
            let cls = src.class_names.iter().position(|n| n == class).unwrap();
            let selected: BTreeSet<usize> = ep
                .support
                .iter()
                .chain(&ep.query)
                .filter(|it| &it.class == class)
                .map(|it| index[it.image_name.as_str()])
                .collect();
            let want = brute_force_knn(&values, &src.by_class[cls], &centroids[j], spec.per_class());
            ensure!(selected == want, "episode {} class {class}: {selected:?} != {want:?}", ep.id);
            checked += 1;
        }
    }
    Ok(format!("200 episodes, {checked} class selections match"))
}

// ---------------------------------------------------------- determinism

fn build_run(fix: &Fixture, out: &Path, threads: Option<usize>) -> Result<(), String> {
    let data = out.join("data_root");
    generate_dataset(&fix.assets, &fix.alphabet, &options("meta5", 2024, threads), &data).map_err(|e| e.to_string())?;
    let cols = vec!["rotation".to_string(), "shear".to_string()];
    let src = EpisodeSource::load(&data, &cols, true).map_err(|e| e.to_string())?;
    let spec = EpisodeSpec::new(5, 1, 5, 2024).map_err(|e| e.to_string())?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads.unwrap_or(0)).build().unwrap();
    for mode in [EpisodeMode::Standard, EpisodeMode::Metadata] {
        let eps = pool.install(|| generate_episodes(&src, &spec, mode, 1000)).map_err(|e| e.to_string())?;
        let meta = src.metadata.as_ref().filter(|_| mode == EpisodeMode::Metadata);
        let header = ManifestHeader::new(
            &spec,
            mode,
            meta.map(|m| m.columns.clone()).unwrap_or_default(),
            meta.is_some_and(|m| m.standardized),
            eps.len(),
        );
        write_manifest(&out.join(format!("episodes_{mode}.jsonl")), &header, &eps).map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn end_to_end_determinism() -> Check {
    let fix = fixture();
    let root = tempfile::tempdir().unwrap();
    let mut snaps = Vec::new();
    for (i, threads) in [None, None, Some(1), Some(4)].into_iter().enumerate() {
        let dir = root.path().join(format!("run{i}"));
        build_run(&fix, &dir, threads)?;
        snaps.push((threads, snapshot(&dir)));
    }
    let (_, first) = &snaps[0];
    let pngs = first.keys().filter(|k| k.ends_with(".png")).count();
    ensure!(pngs == 600, "{pngs} images");
    for (threads, snap) in &snaps[1..] {
        ensure!(snap.keys().eq(first.keys()), "file sets differ with threads={threads:?}");
        for (k, v) in snap {
            ensure!(v == &first[k], "{k} differs with threads={threads:?}");
        }
    }
    Ok(format!("{} files identical over 4 runs (threads default, default, 1, 4)", first.len()))
}

// --------------------------------------------------------------- resize

fn resize_chain() -> Check {
    let mut worst_const = 0.0f64;
    for (sw, sh, tw, th, v) in [(260, 300, 28, 28, 91.0), (257, 64, 32, 32, 3.5), (32, 32, 32, 32, 200.0), (17, 90, 32, 32, 255.0)] {
        let c = Raster::new(sw, sh, 3, 255.0, v);
        let out = ResizePlan::new(sw, sh, tw, th).apply(&c);
        ensure!((out.width(), out.height()) == (tw, th), "plan produced {}x{}", out.width(), out.height());
        worst_const = worst_const.max(out.data().iter().map(|x| (x - v).abs()).fold(0.0, f64::max));
        let l = lanczos_resize(&c, tw, th, 3);
        worst_const = worst_const.max(l.data().iter().map(|x| (x - v).abs()).fold(0.0, f64::max));
    }
    ensure!(worst_const <= 1e-6, "constant image drifted by {worst_const:e}");

    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut worst_id = 0.0f64;
    for _ in 0..20 {
        let (w, h) = (rng.gen_range(1..40), rng.gen_range(1..40));
        let img = Raster::from_data(w, h, 3, 255.0, (0..w * h * 3).map(|_| rng.gen_range(0.0..255.0)).collect());
        let same = lanczos_resize(&img, w, h, 3);
        worst_id = worst_id.max(same.data().iter().zip(img.data()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
    }
    ensure!(worst_id <= 1e-6, "identity resize off by {worst_id:e}");
    Ok(format!("constant drift {worst_const:.1e}, identity error {worst_id:.1e}"))
}

fn main() -> ExitCode {
    panic::set_hook(Box::new(|_| {}));
    let outcomes = [
        run("dataset shape", secs(600), dataset_shape),
        run("split rule", secs(1), split_rule),
        run("linear closed form", secs(1), linear_closed_form),
        run("homography", secs(1), homography),
        run("morphology oracle", secs(10), morphology_oracle),
        run("CIEDE2000", secs(1), ciede2000),
        run("Poisson blending", secs(30), poisson),
        run("elastic contract", secs(5), elastic_contract),
        run("metadata episode oracle", secs(5), metadata_oracle),
        run("end-to-end determinism", secs(300), end_to_end_determinism),
        run("resize chain", secs(1), resize_chain),
    ];
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{} of {} criteria passed", outcomes.len() - failed, outcomes.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
