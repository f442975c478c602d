use std::collections::BTreeSet;

use glyphforge::ops::*;
use glyphforge::raster::Raster;
use glyphforge::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Quad = [(f64, f64); 4];

fn jittered_quad(rng: &mut ChaCha8Rng, size: f64) -> Quad {
    let j = 0.2 * size;
    [
        (rng.gen_range(0.0..j), rng.gen_range(0.0..j)),
        (size - rng.gen_range(0.0..j), rng.gen_range(0.0..j)),
        (size - rng.gen_range(0.0..j), size - rng.gen_range(0.0..j)),
        (rng.gen_range(0.0..j), size - rng.gen_range(0.0..j)),
    ]
}

fn max_residual(h: &Homography, src: &Quad, dst: &Quad) -> f64 {
    // plain homogeneous product, written out independently of Homography::apply
    let m = h.matrix();
    src.iter()
        .zip(dst)
        .map(|(s, d)| {
            let v: Vec<f64> = (0..3).map(|r| m[r][0] * s.0 + m[r][1] * s.1 + m[r][2]).collect();
            (v[0] / v[2] - d.0).hypot(v[1] / v[2] - d.1)
        })
        .fold(0.0, f64::max)
}

#[test]
fn homography_identity_and_scale() {
    let sq = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
    let id = solve_homography(&sq, &sq).unwrap().matrix();
    let big = sq.map(|(x, y)| (2.0 * x, 2.0 * y));
    let two = solve_homography(&sq, &big).unwrap().matrix();
    let expect_id = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let expect_two = [[2.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 1.0]];
    for r in 0..3 {
        for c in 0..3 {
            assert!((id[r][c] - expect_id[r][c]).abs() < 1e-12);
            assert!((two[r][c] - expect_two[r][c]).abs() < 1e-12);
        }
    }
}

#[test]
fn homography_random_quads() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let src = jittered_quad(&mut rng, 256.0);
        let dst = jittered_quad(&mut rng, 256.0);
        let h = solve_homography(&src, &dst).unwrap();
        assert!(max_residual(&h, &src, &dst) < 1e-6);
        for (s, d) in src.iter().zip(&dst) {
            let (x, y) = h.apply(s.0, s.1);
            assert!((x - d.0).abs() < 1e-4 && (y - d.1).abs() < 1e-4);
        }
    }
}

#[test]
fn homography_rejects_collinear() {
    let good = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
    let line = [(0.0, 0.0), (1.0, 1.0), (2.0, 2.0), (0.0, 1.0)];
    assert!(matches!(solve_homography(&line, &good), Err(Error::DegenerateCorrespondence(_))));
    assert!(matches!(solve_homography(&good, &line), Err(Error::DegenerateCorrespondence(_))));
}

fn ramp_layer(w: usize, h: usize) -> RasterLayer {
    let mut img = Raster::rgb(w, h, [0.0; 3]);
    let mut mask = Raster::mask(w, h);
    for y in 0..h {
        for x in 0..w {
            img.set(x, y, 0, 3.0 * x as f64);
            img.set(x, y, 1, 2.0 * y as f64);
            img.set(x, y, 2, (x + y) as f64);
            mask.set(x, y, 0, (x as f64 / w as f64).min(1.0));
        }
    }
    RasterLayer::new(img, mask)
}

#[test]
fn warp_identity_and_integer_shift() {
    let layer = ramp_layer(20, 16);
    let same = warp_perspective(&layer, &Homography::IDENTITY, [255.0; 3]);
    assert_eq!(same, layer);
    let shifted = warp_perspective(&layer, &Homography::translation(3.0, 2.0), [255.0; 3]);
    for y in 0..16 {
        for x in 0..20 {
            if x >= 3 && y >= 2 {
                assert_eq!(shifted.image.pixel(x, y), layer.image.pixel(x - 3, y - 2));
                assert_eq!(shifted.mask.get(x, y, 0), layer.mask.get(x - 3, y - 2, 0));
            } else {
                assert_eq!(shifted.image.pixel(x, y), &[255.0; 3]);
                assert_eq!(shifted.mask.get(x, y, 0), 0.0);
            }
        }
    }
}

#[test]
fn warp_round_trip_recovers_interior() {
    let layer = ramp_layer(64, 64);
    let src = [(0.0, 0.0), (64.0, 0.0), (64.0, 64.0), (0.0, 64.0)];
    let dst = [(2.0, 1.5), (62.0, 3.0), (63.0, 61.0), (1.0, 62.5)];
    let h = solve_homography(&src, &dst).unwrap();
    let back = warp_perspective(&warp_perspective(&layer, &h, [0.0; 3]), &h.inverse().unwrap(), [0.0; 3]);
    for y in 8..56 {
        for x in 8..56 {
            for c in 0..3 {
                let err = (back.image.get(x, y, c) - layer.image.get(x, y, c)).abs() / 255.0;
                assert!(err <= 2.0 / 255.0);
            }
            assert!((back.mask.get(x, y, 0) - layer.mask.get(x, y, 0)).abs() <= 2.0 / 255.0);
        }
    }
}

#[test]
fn geometric_ops_move_image_and_mask_alike() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mask = Raster::from_data(24, 24, 1, 1.0, (0..576).map(|_| rng.gen_range(0.0..1.0)).collect());
    let layer = RasterLayer::new(mask.to_rgb(), mask.clone());
    let check = |l: &RasterLayer| {
        let again = l.mask.to_rgb();
        assert!(again.data().iter().zip(l.image.data()).all(|(a, b)| (a - b).abs() < 1e-6));
    };
    let h = solve_homography(
        &[(0.0, 0.0), (24.0, 0.0), (24.0, 24.0), (0.0, 24.0)],
        &[(1.0, 2.0), (22.0, 0.5), (23.0, 23.0), (0.0, 21.0)],
    )
    .unwrap();
    check(&warp_perspective(&layer, &h, [0.0; 3]));
    let field = DisplacementField::generate(24, 24, 9, 3.0, 2.0, FieldNoise::Uniform);
    check(&elastic_field_warp(&layer, &field, [0.0; 3]));
}

#[test]
fn displacement_field_contract() {
    let layer = ramp_layer(32, 32);
    let zero = DisplacementField::generate(32, 32, 1, 0.0, 4.0, FieldNoise::Uniform);
    assert_eq!(elastic_field_warp(&layer, &zero, [0.0; 3]), layer);
    for noise in [FieldNoise::Uniform, FieldNoise::Gaussian] {
        let f = DisplacementField::generate(32, 32, 77, 5.0, 3.0, noise);
        assert_eq!(f, DisplacementField::generate(32, 32, 77, 5.0, 3.0, noise));
        assert!(f.dx.iter().chain(&f.dy).all(|v| v.abs() <= 5.0));
        assert!(f.max_displacement() > 0.0);
        assert_eq!(elastic_field_warp(&layer, &f, [0.0; 3]), elastic_field_warp(&layer, &f, [0.0; 3]));
    }
    let rough = DisplacementField::generate(32, 32, 77, 5.0, 0.0, FieldNoise::Uniform);
    assert!(rough.max_displacement() <= 5.0);
}

// ---- morphology ----

type Set = BTreeSet<(i64, i64)>;

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

fn window(n: i64) -> impl Iterator<Item = (i64, i64)> {
    (0..n).flat_map(move |y| (0..n).map(move |x| (x, y)))
}

fn set_erode(x: &Set, k: &[(i64, i64)], n: i64) -> Set {
    window(n).filter(|p| k.iter().all(|d| x.contains(&(p.0 + d.0, p.1 + d.1)))).collect()
}

fn set_dilate(x: &Set, k: &[(i64, i64)], n: i64) -> Set {
    window(n).filter(|p| k.iter().any(|d| x.contains(&(p.0 - d.0, p.1 - d.1)))).collect()
}

fn set_op(op: MorphOp, x: &Set, k: &[(i64, i64)], n: i64) -> Set {
    let minus = |a: &Set, b: &Set| a.difference(b).copied().collect::<Set>();
    match op {
        MorphOp::Erosion => set_erode(x, k, n),
        MorphOp::Dilation => set_dilate(x, k, n),
        MorphOp::Opening => set_dilate(&set_erode(x, k, n), k, n),
        MorphOp::Closing => set_erode(&set_dilate(x, k, n), k, n),
        MorphOp::Gradient => minus(&set_dilate(x, k, n), &set_erode(x, k, n)),
        MorphOp::TopHat => minus(x, &set_dilate(&set_erode(x, k, n), k, n)),
        MorphOp::BlackHat => minus(&set_erode(&set_dilate(x, k, n), k, n), x),
    }
}

fn to_set(r: &Raster) -> Set {
    window(r.width() as i64)
        .filter(|&(x, y)| r.get(x as usize, y as usize, 0) == 1.0)
        .collect()
}

fn random_binary(rng: &mut ChaCha8Rng, n: usize) -> Raster {
    let p = rng.gen_range(0.2..0.8);
    Raster::from_data(n, n, 1, 1.0, (0..n * n).map(|_| rng.gen_bool(p) as u8 as f64).collect())
}

#[test]
fn morphology_matches_set_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..20 {
        let img = random_binary(&mut rng, 16);
        let x = to_set(&img);
        for shape in KernelShape::ALL {
            for (w, h) in [(3, 3), (5, 3), (5, 5)] {
                let kernel = MorphKernel::new(shape, w, h).unwrap();
                let k = oracle_kernel(shape, w as i64, h as i64);
                for op in MorphOp::ALL {
                    let out = morphology(&img, op, &kernel);
                    assert!(out.data().iter().all(|&v| v == 0.0 || v == 1.0));
                    assert_eq!(to_set(&out), set_op(op, &x, &k, 16), "{op:?} {kernel}");
                }
            }
        }
    }
}

#[test]
fn erosion_border_and_cross_dilation() {
    let ones = Raster::new(6, 6, 1, 1.0, 1.0);
    let rect = MorphKernel::new(KernelShape::Rectangle, 3, 3).unwrap();
    let e = morphology(&ones, MorphOp::Erosion, &rect);
    for y in 0..6 {
        for x in 0..6 {
            let inner = (1..5).contains(&x) && (1..5).contains(&y);
            assert_eq!(e.get(x, y, 0), inner as u8 as f64);
        }
    }
    let mut dot = Raster::mask(5, 5);
    dot.set(2, 2, 0, 1.0);
    let cross = MorphKernel::new(KernelShape::Cross, 3, 3).unwrap();
    let d = morphology(&dot, MorphOp::Dilation, &cross);
    assert_eq!(to_set(&d), [(2, 1), (1, 2), (2, 2), (3, 2), (2, 3)].into_iter().collect());
}

#[test]
fn erosion_dilation_duality_on_interior() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let img = random_binary(&mut rng, 16);
        let inv = img.map(|v| 1.0 - v);
        for shape in KernelShape::ALL {
            let k = MorphKernel::new(shape, 3, 3).unwrap();
            let d = morphology(&img, MorphOp::Dilation, &k);
            let e = morphology(&inv, MorphOp::Erosion, &k);
            for y in 1..15 {
                for x in 1..15 {
                    assert_eq!(d.get(x, y, 0), 1.0 - e.get(x, y, 0));
                }
            }
        }
    }
}

#[test]
fn photometric_endpoints() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let img = Raster::from_data(8, 8, 3, 255.0, (0..192).map(|_| rng.gen_range(0..=255) as f64).collect());
    let mask = Raster::new(8, 8, 1, 1.0, 0.25);
    let layer = RasterLayer::new(img.clone(), mask.clone());
    assert_eq!(adjust(&layer, &PhotometricFactors::default()), layer);

    let dark = adjust(&layer, &PhotometricFactors { brightness: 0.0, ..Default::default() });
    assert!(dark.image.data().iter().all(|&v| v == 0.0));
    assert_eq!(dark.mask, mask);

    let mean = (0..64)
        .map(|i| {
            let p = &img.data()[i * 3..i * 3 + 3];
            0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2]
        })
        .sum::<f64>()
        / 64.0;
    let flat = adjust(&layer, &PhotometricFactors { contrast: 0.0, ..Default::default() });
    assert!(flat.image.data().iter().all(|v| (v - mean).abs() <= 1.0 / 255.0));

    let gray = adjust(&layer, &PhotometricFactors { color: 0.0, ..Default::default() });
    for i in 0..64 {
        let p = &gray.image.data()[i * 3..i * 3 + 3];
        assert!((p[0] - p[1]).abs() < 1e-9 && (p[1] - p[2]).abs() < 1e-9);
    }
    let boosted = adjust(&layer, &PhotometricFactors { sharpness: 2.0, contrast: 1.5, ..Default::default() });
    assert!(boosted.image.data().iter().all(|v| (0.0..=255.0).contains(v)));
}

proptest! {
    #[test]
    fn opening_and_closing_are_idempotent(bits in prop::collection::vec(any::<bool>(), 256), shape in 0usize..3, w in 0usize..3) {
        let img = Raster::from_data(16, 16, 1, 1.0, bits.iter().map(|&b| b as u8 as f64).collect());
        let k = MorphKernel::new(KernelShape::ALL[shape], 2 * w + 1, 3).unwrap();
        for op in [MorphOp::Opening, MorphOp::Closing] {
            let once = morphology(&img, op, &k);
            prop_assert_eq!(morphology(&once, op, &k), once);
        }
    }

    #[test]
    fn duality_on_interior_for_all_kernels(bits in prop::collection::vec(any::<bool>(), 256), shape in 0usize..3) {
        let img = Raster::from_data(16, 16, 1, 1.0, bits.iter().map(|&b| b as u8 as f64).collect());
        let k = MorphKernel::new(KernelShape::ALL[shape], 5, 5).unwrap();
        let d = morphology(&img, MorphOp::Dilation, &k);
        let e = morphology(&img.map(|v| 1.0 - v), MorphOp::Erosion, &k);
        for y in 2..14 {
            for x in 2..14 {
                prop_assert_eq!(d.get(x, y, 0), 1.0 - e.get(x, y, 0));
            }
        }
    }
}
