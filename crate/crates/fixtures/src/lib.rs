//! Fixture assets for glyphforge: TrueType fonts written by an independent
//! minimal writer, procedural background textures, and alphabet files.

pub mod designs;
pub mod textures;
pub mod writer;

use std::fs;
use std::io;
use std::path::Path;

use designs::{stroke_font, StrokeStyle, DESIGNED};
use writer::{CmapFormat, Component, ComponentTransform, FontBuilder, Glyph, OutlineKind, Point};

/// Code point the square fixture maps (U+25A0 BLACK SQUARE).
pub const SQUARE_CODEPOINT: u32 = 0x25A0;

/// The square used by the single-glyph fixture: x in [100, 700], y in [0, 800].
pub fn square_contour() -> Vec<Point> {
    vec![
        Point::on(100, 0),
        Point::on(100, 800),
        Point::on(700, 800),
        Point::on(700, 0),
    ]
}

fn square_builder() -> FontBuilder {
    let mut b = FontBuilder::new("Fixture Square", "Regular", 1000);
    let g = b.add_glyph(Glyph::Simple(vec![square_contour()]), 800);
    b.map(SQUARE_CODEPOINT, g);
    b
}

/// One square glyph plus `.notdef`; units_per_em = 1000.
pub fn square_font() -> Vec<u8> {
    square_builder().build()
}

/// Same square, but with a `CFF ` table instead of `glyf`/`loca`.
pub fn cff_font() -> Vec<u8> {
    let mut b = square_builder();
    b.outlines = OutlineKind::CffOnly;
    b.build()
}

/// Code point mapped to the two-square composite.
pub const COMPOSITE_CODEPOINT: u32 = 0x25A3;
/// Code point mapped to a scaled (2x2 matrix) composite of the square.
pub const SCALED_COMPOSITE_CODEPOINT: u32 = 0x25A4;
/// Code point mapped to a composite that uses point matching.
pub const POINT_MATCHING_CODEPOINT: u32 = 0x25A5;
/// Code point mapped to a composite nested deeper than any parser should follow.
pub const DEEP_COMPOSITE_CODEPOINT: u32 = 0x25A6;

/// Square font extended with composite glyphs: two squares offset by
/// (100, 0); a square under `[[0.5, 0], [0.25, 1]]`; a point-matching
/// composite; and a chain of twelve nested single-component composites.
pub fn composite_font() -> Vec<u8> {
    let mut b = square_builder();
    let square = 1u16;
    let pair = b.add_glyph(
        Glyph::Composite(vec![Component::offset(square, 0, 0), Component::offset(square, 100, 0)]),
        900,
    );
    b.map(COMPOSITE_CODEPOINT, pair);

    let scaled = b.add_glyph(
        Glyph::Composite(vec![Component {
            glyph: square,
            dx: 10,
            dy: -20,
            transform: ComponentTransform::Matrix([0.5, 0.0, 0.25, 1.0]),
            point_matching: false,
        }]),
        800,
    );
    b.map(SCALED_COMPOSITE_CODEPOINT, scaled);

    let matched = b.add_glyph(
        Glyph::Composite(vec![
            Component::offset(square, 0, 0),
            Component {
                glyph: square,
                dx: 2,
                dy: 0,
                transform: ComponentTransform::None,
                point_matching: true,
            },
        ]),
        800,
    );
    b.map(POINT_MATCHING_CODEPOINT, matched);

    let mut inner = square;
    for _ in 0..12 {
        inner = b.add_glyph(Glyph::Composite(vec![Component::offset(inner, 1, 0)]), 800);
    }
    b.map(DEEP_COMPOSITE_CODEPOINT, inner);
    b.build()
}

fn regular_style() -> StrokeStyle {
    StrokeStyle {
        family: "Fixture Sans",
        style: "Regular",
        half_width: 45.0,
        slant: 0.0,
        units_per_em: 1000,
        cmap_format: CmapFormat::Segmented,
        long_loca: false,
    }
}

/// The fixture font registry: `(file name, bytes)` sorted by file name.
///
/// Three faces cover digits, A–Z, `o`, `d`, `p`, `ô` and the space; a fourth
/// covers digits only.
pub fn registry_fonts() -> Vec<(String, Vec<u8>)> {
    let bold = StrokeStyle {
        style: "Bold",
        half_width: 75.0,
        cmap_format: CmapFormat::Sequential,
        long_loca: true,
        ..regular_style()
    };
    let oblique = StrokeStyle {
        style: "Oblique",
        slant: 0.2,
        units_per_em: 2048,
        long_loca: true,
        ..regular_style()
    };
    let digits = StrokeStyle {
        family: "Fixture Digits",
        half_width: 60.0,
        ..regular_style()
    };
    let mut fonts = vec![
        ("fixture-digits-regular.ttf".to_string(), stroke_font(&digits, "0123456789").build()),
        ("fixture-sans-bold.ttf".to_string(), stroke_font(&bold, DESIGNED).build()),
        ("fixture-sans-oblique.ttf".to_string(), stroke_font(&oblique, DESIGNED).build()),
        ("fixture-sans-regular.ttf".to_string(), stroke_font(&regular_style(), DESIGNED).build()),
    ];
    fonts.sort_by(|a, b| a.0.cmp(&b.0));
    fonts
}

/// Thirty classes in two super-classes.
pub const ALPHABET_30: &str = "\
# fixture alphabet: 30 classes
super_class=digits
0
1
2
3
4
5
6
7
8
9
super_class=latin_upper
U+0041
U+0042
U+0043
U+0044
U+0045
U+0046
U+0047
U+0048
U+0049
U+004A
K
L
M
N
O
P
Q
R
S
T
";

/// Writes `fonts/`, `textures/` and `alphabet.txt` under `dir`.
pub fn write_fixture_dir(dir: &Path) -> io::Result<()> {
    let fonts = dir.join("fonts");
    let tex = dir.join("textures");
    fs::create_dir_all(&fonts)?;
    fs::create_dir_all(&tex)?;
    for (name, bytes) in registry_fonts() {
        fs::write(fonts.join(name), bytes)?;
    }
    for (name, img) in textures::fixture_textures() {
        img.save(tex.join(name)).map_err(io::Error::other)?;
    }
    fs::write(dir.join("alphabet.txt"), ALPHABET_30)?;
    Ok(())
}
