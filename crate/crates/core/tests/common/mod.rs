#![allow(dead_code)]

use glyphforge::composite::TextureSet;
use glyphforge::dataset::Alphabet;
use glyphforge::font::FontRegistry;
use glyphforge::pipeline::Assets;
use glyphforge::raster::Raster;
use glyphforge_fixtures as fx;

pub fn fixture_assets() -> Assets {
    let fonts = FontRegistry::from_bytes(fx::registry_fonts());
    let mut textures = TextureSet::new();
    for (name, img) in fx::textures::fixture_textures() {
        textures.insert(name, Raster::from_rgb8(&img));
    }
    Assets::new(fonts, textures)
}

pub fn fixture_alphabet() -> Alphabet {
    Alphabet::parse("fixture", fx::ALPHABET_30).unwrap()
}

/// Fonts covering the latin fixture section.
pub fn latin_fonts() -> Vec<String> {
    vec![
        "fixture-sans-bold.ttf".into(),
        "fixture-sans-oblique.ttf".into(),
        "fixture-sans-regular.ttf".into(),
    ]
}
