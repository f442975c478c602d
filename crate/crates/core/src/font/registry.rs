use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use super::{parse_font, Codepoint, FontFace};
use crate::error::{Error, Result};

/// Parsed faces keyed by file name. Iteration is in file-name order.
#[derive(Clone, Debug, Default)]
pub struct FontRegistry {
    faces: BTreeMap<String, FontFace>,
}

impl FontRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses every `.ttf`/`.otf` file in `dir`; files that fail to parse are
    /// logged and skipped.
    pub fn load_dir(dir: &Path) -> Result<Self> {
        let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
        let mut paths: Vec<_> = entries.filter_map(|e| e.ok().map(|e| e.path())).collect();
        paths.sort();
        let mut reg = Self::new();
        for path in paths {
            let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
            if !matches!(ext.as_deref(), Some("ttf" | "otf")) {
                continue;
            }
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            let parsed = fs::read(&path)
                .map_err(|e| Error::io(&path, e))
                .and_then(|bytes| parse_font(&bytes));
            match parsed {
                Ok(face) => {
                    reg.faces.insert(name, face);
                }
                Err(e) => log::warn!("skipping font {}: {e}", path.display()),
            }
        }
        Ok(reg)
    }

    /// Like [`load_dir`](Self::load_dir) but from in-memory `(name, bytes)` pairs.
    pub fn from_bytes<I, S>(fonts: I) -> Self
    where
        I: IntoIterator<Item = (S, Vec<u8>)>,
        S: Into<String>,
    {
        let mut reg = Self::new();
        for (name, bytes) in fonts {
            let name = name.into();
            match parse_font(&bytes) {
                Ok(face) => {
                    reg.faces.insert(name, face);
                }
                Err(e) => log::warn!("skipping font {name}: {e}"),
            }
        }
        reg
    }

    pub fn insert(&mut self, name: impl Into<String>, face: FontFace) {
        self.faces.insert(name.into(), face);
    }

    pub fn get(&self, name: &str) -> Option<&FontFace> {
        self.faces.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.faces.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &FontFace)> {
        self.faces.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// File names of the faces covering every code point, sorted.
    pub fn covering(&self, cps: &BTreeSet<Codepoint>) -> Vec<String> {
        self.faces
            .iter()
            .filter(|(_, f)| f.covers(cps))
            .map(|(n, _)| n.clone())
            .collect()
    }
}
