use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::sampler::{EpisodeManifest, EpisodeMode, EpisodeSpec};
use crate::error::{Error, Result};

pub const MANIFEST_FORMAT: &str = "episodes";
pub const MANIFEST_VERSION: u32 = 1;

/// First line of a manifest file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestHeader {
    pub format: String,
    pub version: u32,
    pub mode: EpisodeMode,
    pub n_way: usize,
    pub k_shot: usize,
    pub q_query: usize,
    pub seed: u64,
    #[serde(default)]
    pub metadata_columns: Vec<String>,
    pub distance: String,
    #[serde(default)]
    pub standardized: bool,
    pub count: usize,
}

impl ManifestHeader {
    pub fn new(spec: &EpisodeSpec, mode: EpisodeMode, metadata_columns: Vec<String>, standardized: bool, count: usize) -> Self {
        Self {
            format: MANIFEST_FORMAT.into(),
            version: MANIFEST_VERSION,
            mode,
            n_way: spec.n_way,
            k_shot: spec.k_shot,
            q_query: spec.q_query,
            seed: spec.seed,
            metadata_columns,
            distance: "euclidean".into(),
            standardized,
            count,
        }
    }

    pub fn spec(&self) -> EpisodeSpec {
        EpisodeSpec {
            n_way: self.n_way,
            k_shot: self.k_shot,
            q_query: self.q_query,
            seed: self.seed,
        }
    }
}

/// JSON lines: the header, then one episode per line.
pub fn write_manifest(path: &Path, header: &ManifestHeader, episodes: &[EpisodeManifest]) -> Result<()> {
    if header.count != episodes.len() {
        return Err(Error::Manifest(format!("header count {} but {} episodes", header.count, episodes.len())));
    }
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut out = Vec::new();
    serde_json::to_writer(&mut out, header)?;
    out.push(b'\n');
    for ep in episodes {
        serde_json::to_writer(&mut out, ep)?;
        out.push(b'\n');
    }
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(&out).map_err(|e| Error::io(path, e))
}

/// Checks one episode against the header's shape.
pub fn check_episode(header: &ManifestHeader, ep: &EpisodeManifest) -> Result<()> {
    let bad = |msg: String| Err(Error::Manifest(format!("episode {}: {msg}", ep.id)));
    let classes: BTreeSet<&str> = ep.classes.iter().map(String::as_str).collect();
    if ep.classes.len() != header.n_way || classes.len() != header.n_way {
        return bad(format!("expected {} distinct classes", header.n_way));
    }
    for (part, items, want) in [("support", &ep.support, header.k_shot), ("query", &ep.query, header.q_query)] {
        for c in &ep.classes {
            let n = items.iter().filter(|i| &i.class == c).count();
            if n != want {
                return bad(format!("{part} has {n} items of class {c:?}, expected {want}"));
            }
        }
        if items.len() != want * header.n_way {
            return bad(format!("{part} lists items outside the episode classes"));
        }
    }
    let support: BTreeSet<&str> = ep.support.iter().map(|i| i.image_name.as_str()).collect();
    let query: BTreeSet<&str> = ep.query.iter().map(|i| i.image_name.as_str()).collect();
    if support.len() != ep.support.len() || query.len() != ep.query.len() {
        return bad("repeated image".into());
    }
    if !support.is_disjoint(&query) {
        return bad("support and query overlap".into());
    }
    match (header.mode, &ep.centroids) {
        (EpisodeMode::Metadata, Some(c)) if c.len() == header.n_way => Ok(()),
        (EpisodeMode::Metadata, _) => bad("metadata episode needs one centroid per class".into()),
        (EpisodeMode::Standard, None) => Ok(()),
        (EpisodeMode::Standard, Some(_)) => bad("standard episode carries centroids".into()),
    }
}

pub fn read_manifest(path: &Path) -> Result<(ManifestHeader, Vec<EpisodeManifest>)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, first) = lines.next().ok_or_else(|| Error::Manifest("empty manifest".into()))?;
    let header: ManifestHeader =
        serde_json::from_str(first).map_err(|e| Error::Manifest(format!("line 1: {e}")))?;
    if header.format != MANIFEST_FORMAT || header.version != MANIFEST_VERSION {
        return Err(Error::Manifest(format!("unsupported format {} v{}", header.format, header.version)));
    }
    header.spec().validate()?;
    let mut episodes = Vec::with_capacity(header.count);
    for (i, line) in lines {
        let ep: EpisodeManifest =
            serde_json::from_str(line).map_err(|e| Error::Manifest(format!("line {}: {e}", i + 1)))?;
        check_episode(&header, &ep)?;
        episodes.push(ep);
    }
    if episodes.len() != header.count {
        return Err(Error::Manifest(format!("header count {} but {} episodes", header.count, episodes.len())));
    }
    Ok((header, episodes))
}
