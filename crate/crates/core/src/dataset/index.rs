use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::font::{Codepoint, FontRegistry};

/// Fonts supporting every character of an alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphabetIndex {
    pub alphabet: String,
    pub codepoints: Vec<u32>,
    /// File names, sorted.
    pub fonts: Vec<String>,
}

impl AlphabetIndex {
    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Index over an already loaded registry.
pub fn index_registry(registry: &FontRegistry, alphabet: &str, cps: &[Codepoint]) -> Result<AlphabetIndex> {
    if cps.is_empty() {
        return Err(Error::ConfigRange("cannot index an empty alphabet".into()));
    }
    let set: BTreeSet<Codepoint> = cps.iter().copied().collect();
    Ok(AlphabetIndex {
        alphabet: alphabet.to_string(),
        codepoints: set.iter().map(|c| c.value()).collect(),
        fonts: registry.covering(&set),
    })
}

/// Parses the fonts in `fonts_dir` (unreadable ones are logged and skipped)
/// and lists those covering all of `cps`.
pub fn build_index(fonts_dir: &Path, alphabet: &str, cps: &[Codepoint]) -> Result<AlphabetIndex> {
    if cps.is_empty() {
        return Err(Error::ConfigRange("cannot index an empty alphabet".into()));
    }
    index_registry(&FontRegistry::load_dir(fonts_dir)?, alphabet, cps)
}
