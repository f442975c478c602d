use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::font::Codepoint;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphabetSection {
    pub super_class: String,
    pub codepoints: Vec<Codepoint>,
}

/// A character list split into super-classes, as read from an alphabet file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    pub name: String,
    pub sections: Vec<AlphabetSection>,
}

fn parse_entry(line: &str) -> Result<Codepoint> {
    if let Ok(cp) = Codepoint::from_text(line) {
        return Ok(cp);
    }
    let hex = line
        .strip_prefix("U+")
        .or_else(|| line.strip_prefix("u+"))
        .or_else(|| line.strip_prefix("0x"))
        .unwrap_or(line);
    let v = u32::from_str_radix(hex, 16)
        .map_err(|_| Error::ConfigRange(format!("{line:?} is neither a character nor a hex code point")))?;
    Codepoint::from_u32(v)
}

impl Alphabet {
    /// One code point per line, as a literal character or hex (`U+00F4`,
    /// `0xF4`, `00F4`). `super_class=<name>` starts a section; entries before
    /// the first header belong to a section named after the alphabet. Lines
    /// starting with `#` are comments.
    pub fn parse(name: &str, text: &str) -> Result<Self> {
        let mut sections: Vec<AlphabetSection> = Vec::new();
        let mut seen: BTreeMap<Codepoint, usize> = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(sc) = line.strip_prefix("super_class=") {
                sections.push(AlphabetSection {
                    super_class: sc.trim().to_string(),
                    codepoints: Vec::new(),
                });
                continue;
            }
            let cp = parse_entry(line).map_err(|e| match e {
                Error::ConfigRange(m) => Error::ConfigRange(format!("line {}: {m}", n + 1)),
                other => other,
            })?;
            if let Some(prev) = seen.insert(cp, n + 1) {
                return Err(Error::ConfigRange(format!("line {}: {cp} already listed on line {prev}", n + 1)));
            }
            if sections.is_empty() {
                sections.push(AlphabetSection {
                    super_class: name.to_string(),
                    codepoints: Vec::new(),
                });
            }
            sections.last_mut().unwrap().codepoints.push(cp);
        }
        sections.retain(|s| !s.codepoints.is_empty());
        Ok(Self {
            name: name.to_string(),
            sections,
        })
    }

    /// Reads a file; the alphabet is named after the file stem.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let name = path.file_stem().map_or("alphabet".into(), |s| s.to_string_lossy().into_owned());
        Self::parse(&name, &text)
    }

    pub fn codepoints(&self) -> Vec<Codepoint> {
        self.sections.iter().flat_map(|s| s.codepoints.iter().copied()).collect()
    }

    /// `(code point, super-class)` sorted by code point: the canonical class order.
    pub fn classes(&self) -> Vec<(Codepoint, &str)> {
        let mut v: Vec<_> = self
            .sections
            .iter()
            .flat_map(|s| s.codepoints.iter().map(move |&c| (c, s.super_class.as_str())))
            .collect();
        v.sort_by_key(|e| e.0);
        v
    }

    pub fn len(&self) -> usize {
        self.sections.iter().map(|s| s.codepoints.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
