use std::collections::BTreeSet;

use glyphforge::font::{coverage, parse_font, AnchorPoint, Codepoint, FontFace};
use glyphforge::Error;
use glyphforge_fixtures as fx;
use glyphforge_fixtures::writer::{FontBuilder, Glyph, Point};

fn cp(v: u32) -> Codepoint {
    Codepoint::from_u32(v).unwrap()
}

fn square_face() -> FontFace {
    parse_font(&fx::square_font()).unwrap()
}

#[test]
fn single_square_fixture() {
    let face = square_face();
    assert_eq!(face.units_per_em(), 1000);
    assert_eq!(face.glyph_count(), 2);
    assert_eq!(face.family_name(), "Fixture Square");
    assert_eq!(face.style_name(), "Regular");
    assert!(face.ascender() >= 0 && face.descender() <= 0);
    assert_eq!(face.codepoint_map().len(), 1);

    let g = face.glyph_for(cp(fx::SQUARE_CODEPOINT)).unwrap();
    assert_eq!(g.contours.len(), 1);
    let pts: Vec<(f64, f64, bool)> = g.contours[0].iter().map(|p| (p.x, p.y, p.on_curve)).collect();
    assert_eq!(
        pts,
        vec![
            (100.0, 0.0, true),
            (100.0, 800.0, true),
            (700.0, 800.0, true),
            (700.0, 0.0, true)
        ]
    );
    assert_eq!(g.advance_width, 800.0);
}

#[test]
fn truncated_after_directory_is_malformed() {
    let bytes = fx::square_font();
    let n = u16::from_be_bytes([bytes[4], bytes[5]]) as usize;
    let cut = &bytes[..12 + 16 * n];
    assert!(matches!(parse_font(cut), Err(Error::MalformedFont(_))));
    // every shorter prefix fails cleanly too
    for len in 1..bytes.len() {
        let _ = parse_font(&bytes[..len]);
    }
}

#[test]
fn cff_fixture_is_unsupported() {
    assert!(matches!(
        parse_font(&fx::cff_font()),
        Err(Error::UnsupportedOutlineFormat(_))
    ));
}

#[test]
fn composite_two_squares_offset() {
    let face = parse_font(&fx::composite_font()).unwrap();
    let g = face.glyph_for(cp(fx::COMPOSITE_CODEPOINT)).unwrap();
    assert_eq!(g.contours.len(), 2);
    for (a, b) in g.contours[0].iter().zip(&g.contours[1]) {
        assert_eq!(b.x, a.x + 100.0);
        assert_eq!(b.y, a.y);
    }
}

#[test]
fn composite_with_matrix_is_applied() {
    let face = parse_font(&fx::composite_font()).unwrap();
    let g = face.glyph_for(cp(fx::SCALED_COMPOSITE_CODEPOINT)).unwrap();
    // x' = 0.5 x + 0.25 y + 10 , y' = y - 20 (second stored entry multiplies x into y)
    let expected: Vec<(f64, f64)> = fx::square_contour()
        .iter()
        .map(|p| {
            let (x, y) = (p.x as f64, p.y as f64);
            (0.5 * x + 0.25 * y + 10.0, y - 20.0)
        })
        .collect();
    let got: Vec<(f64, f64)> = g.contours[0].iter().map(|p| (p.x, p.y)).collect();
    assert_eq!(got, expected);
}

#[test]
fn point_matching_composite_is_rejected() {
    let face = parse_font(&fx::composite_font()).unwrap();
    assert!(matches!(
        face.glyph_for(cp(fx::POINT_MATCHING_CODEPOINT)),
        Err(Error::UnsupportedOutlineFormat(_))
    ));
}

#[test]
fn deep_composite_hits_recursion_limit() {
    let face = parse_font(&fx::composite_font()).unwrap();
    assert!(matches!(
        face.glyph_for(cp(fx::DEEP_COMPOSITE_CODEPOINT)),
        Err(Error::RecursionLimit(8))
    ));
}

#[test]
fn unmapped_codepoint_is_missing() {
    let face = square_face();
    assert!(matches!(face.glyph_for(cp('Z' as u32)), Err(Error::MissingGlyph(0x5A))));
}

#[test]
fn coverage_rules() {
    let face = square_face();
    let sq = cp(fx::SQUARE_CODEPOINT);
    assert!(coverage(&face, &BTreeSet::from([sq])));
    assert!(!coverage(&face, &BTreeSet::from([sq, cp('Z' as u32)])));

    let reg = &fx::registry_fonts()[3];
    assert_eq!(reg.0, "fixture-sans-regular.ttf");
    let face = parse_font(&reg.1).unwrap();
    let space = cp(0x20);
    assert!(face.glyph_for(space).unwrap().is_empty());
    assert!(coverage(&face, &BTreeSet::from([space, cp('A' as u32)])));
}

#[test]
fn registry_round_trip_point_for_point() {
    // Rebuild one glyph with the writer and check the parser returns exactly
    // the written points (after implied-midpoint insertion on the reader side
    // only where two off-curve points are adjacent).
    let contours = vec![
        vec![Point::on(10, 20), Point::off(300, 400), Point::on(-50, 700), Point::on(-300, -10)],
        vec![Point::off(0, 0), Point::off(0, 100), Point::off(100, 100), Point::off(100, 0)],
    ];
    let mut b = FontBuilder::new("RT", "Regular", 2048);
    let g = b.add_glyph(Glyph::Simple(contours.clone()), 1234);
    b.map('x' as u32, g);
    let face = parse_font(&b.build()).unwrap();
    let out = face.glyph_for(cp('x' as u32)).unwrap();
    assert_eq!(out.advance_width, 1234.0);
    let first: Vec<AnchorPoint> = contours[0]
        .iter()
        .map(|p| AnchorPoint { x: p.x as f64, y: p.y as f64, on_curve: p.on_curve })
        .collect();
    assert_eq!(out.contours[0], first);
    // the all-off-curve contour gains four midpoints; the written points
    // appear in order at the odd positions
    let ring = &out.contours[1];
    assert_eq!(ring.len(), 8);
    let originals: Vec<(f64, f64)> = ring.iter().filter(|p| !p.on_curve).map(|p| (p.x, p.y)).collect();
    let mut written: Vec<(f64, f64)> = contours[1].iter().map(|p| (p.x as f64, p.y as f64)).collect();
    let rot = written.iter().position(|w| *w == originals[0]).unwrap();
    written.rotate_left(rot);
    assert_eq!(originals, written);
}

#[test]
fn cmap_formats_agree() {
    let fonts = fx::registry_fonts();
    let bold = parse_font(&fonts[1].1).unwrap(); // format 12, long loca
    let regular = parse_font(&fonts[3].1).unwrap(); // format 4, short loca
    assert_eq!(bold.style_name(), "Bold");
    let keys_b: Vec<u32> = bold.codepoint_map().keys().copied().collect();
    let keys_r: Vec<u32> = regular.codepoint_map().keys().copied().collect();
    assert_eq!(keys_b, keys_r);
    assert!(keys_r.contains(&244));
}

#[test]
fn parsing_is_total_on_fixture_corpus() {
    let mut all = fx::registry_fonts();
    all.push(("square".into(), fx::square_font()));
    for (name, bytes) in all {
        let face = parse_font(&bytes).unwrap();
        for (&c, &gid) in face.codepoint_map() {
            assert!(gid < face.glyph_count());
            let g = face.glyph_for(cp(c)).unwrap();
            assert!(g.is_finite(), "{name} U+{c:04X}");
            assert!(g.is_normalized(), "{name} U+{c:04X}");
            assert_eq!(g, face.glyph_for(cp(c)).unwrap());
        }
    }
}

#[test]
fn system_truetype_fonts_parse_when_present() {
    let dir = std::path::Path::new("/usr/share/fonts/truetype/dejavu");
    let Ok(entries) = std::fs::read_dir(dir) else { return };
    for e in entries.flatten() {
        let path = e.path();
        if path.extension().is_none_or(|x| x != "ttf") {
            continue;
        }
        let bytes = std::fs::read(&path).unwrap();
        let face = parse_font(&bytes).unwrap();
        assert!(!face.family_name().is_empty());
        for (&c, _) in face.codepoint_map().iter().take(400) {
            let Ok(code) = Codepoint::from_u32(c) else { continue };
            if code.value() != c {
                continue;
            }
            match face.glyph_for(code) {
                Ok(g) => assert!(g.is_finite() && g.is_normalized()),
                Err(Error::UnsupportedOutlineFormat(_)) => {}
                Err(e) => panic!("{}: U+{c:04X}: {e}", path.display()),
            }
        }
    }
}
