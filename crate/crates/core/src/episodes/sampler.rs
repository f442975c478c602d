use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::source::EpisodeSource;
use crate::error::{Error, Result};
use crate::seed::{mix64, stream};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpisodeSpec {
    pub n_way: usize,
    /// Support examples per class.
    pub k_shot: usize,
    /// Query examples per class.
    pub q_query: usize,
    pub seed: u64,
}

impl EpisodeSpec {
    pub fn new(n_way: usize, k_shot: usize, q_query: usize, seed: u64) -> Result<Self> {
        let s = Self {
            n_way,
            k_shot,
            q_query,
            seed,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_way < 2 || self.k_shot < 1 || self.q_query < 1 {
            return Err(Error::ConfigRange(format!(
                "episodes need n_way >= 2, k_shot >= 1, q_query >= 1; got {}/{}/{}",
                self.n_way, self.k_shot, self.q_query
            )));
        }
        Ok(())
    }

    pub fn per_class(&self) -> usize {
        self.k_shot + self.q_query
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpisodeItem {
    pub class: String,
    pub image_name: String,
}

/// One N-way task. Support and query list classes in `classes` order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpisodeManifest {
    pub id: u64,
    pub classes: Vec<String>,
    pub support: Vec<EpisodeItem>,
    pub query: Vec<EpisodeItem>,
    /// Sampled metadata centroid per class (metadata episodes only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub centroids: Option<Vec<Vec<f64>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpisodeMode {
    Standard,
    Metadata,
}

impl fmt::Display for EpisodeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EpisodeMode::Standard => "standard",
            EpisodeMode::Metadata => "metadata",
        })
    }
}

impl FromStr for EpisodeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(EpisodeMode::Standard),
            "metadata" => Ok(EpisodeMode::Metadata),
            other => Err(Error::ConfigRange(format!("unknown episode mode {other:?}"))),
        }
    }
}

fn check_source(src: &EpisodeSource, spec: &EpisodeSpec) -> Result<()> {
    spec.validate()?;
    if src.num_classes() < spec.n_way {
        return Err(Error::InsufficientExamples {
            class: "<all classes>".into(),
            available: src.num_classes(),
            needed: spec.n_way,
        });
    }
    for (c, members) in src.by_class.iter().enumerate() {
        if members.len() < spec.per_class() {
            return Err(Error::InsufficientExamples {
                class: src.class_names[c].clone(),
                available: members.len(),
                needed: spec.per_class(),
            });
        }
    }
    Ok(())
}

fn item(src: &EpisodeSource, example: usize) -> EpisodeItem {
    EpisodeItem {
        class: src.class_names[src.class_of[example]].clone(),
        image_name: src.image_names[example].clone(),
    }
}

/// N classes without replacement; per class K+Q examples without
/// replacement, the first K to support.
pub fn standard_episode(src: &EpisodeSource, spec: &EpisodeSpec, id: u64, rng: &mut impl Rng) -> Result<EpisodeManifest> {
    check_source(src, spec)?;
    let classes = index::sample(rng, src.num_classes(), spec.n_way).into_vec();
    let mut support = Vec::new();
    let mut query = Vec::new();
    for &c in &classes {
        let members = &src.by_class[c];
        let picks = index::sample(rng, members.len(), spec.per_class()).into_vec();
        for (j, p) in picks.into_iter().enumerate() {
            let it = item(src, members[p]);
            if j < spec.k_shot {
                support.push(it);
            } else {
                query.push(it);
            }
        }
    }
    Ok(EpisodeManifest {
        id,
        classes: classes.iter().map(|&c| src.class_names[c].clone()).collect(),
        support,
        query,
        centroids: None,
    })
}

/// The `k` members nearest to `centroid` in Euclidean distance, ties broken
/// by ascending example index.
pub fn nearest_members(values: &[Vec<f64>], members: &[usize], centroid: &[f64], k: usize) -> Vec<usize> {
    let mut scored: Vec<(f64, usize)> = members
        .iter()
        .map(|&i| {
            let d2: f64 = values[i].iter().zip(centroid).map(|(a, b)| (a - b) * (a - b)).sum();
            (d2, i)
        })
        .collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    scored.into_iter().take(k).map(|s| s.1).collect()
}

/// Per chosen class: sample a centroid uniformly in the half-open bounding
/// box of the class's metadata (a degenerate side yields its single value),
/// take the K+Q nearest examples, and send a uniform K of them to support.
pub fn metadata_episode(src: &EpisodeSource, spec: &EpisodeSpec, id: u64, rng: &mut impl Rng) -> Result<EpisodeManifest> {
    check_source(src, spec)?;
    let meta = src
        .metadata
        .as_ref()
        .ok_or_else(|| Error::MissingMetadata("metadata episodes need metadata columns".into()))?;
    let dims = meta.columns.len();
    if dims == 0 {
        return Err(Error::MissingMetadata("no metadata columns selected".into()));
    }
    let classes = index::sample(rng, src.num_classes(), spec.n_way).into_vec();
    let mut support = Vec::new();
    let mut query = Vec::new();
    let mut centroids = Vec::with_capacity(classes.len());
    for &c in &classes {
        let members = &src.by_class[c];
        let centroid: Vec<f64> = (0..dims)
            .map(|d| {
                let (lo, hi) = members
                    .iter()
                    .map(|&i| meta.values[i][d])
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
                if lo < hi {
                    rng.gen_range(lo..hi)
                } else {
                    lo
                }
            })
            .collect();
        let selected = nearest_members(&meta.values, members, &centroid, spec.per_class());
        let mut to_support = vec![false; selected.len()];
        for p in index::sample(rng, selected.len(), spec.k_shot) {
            to_support[p] = true;
        }
        for (j, &e) in selected.iter().enumerate() {
            if to_support[j] {
                support.push(item(src, e));
            } else {
                query.push(item(src, e));
            }
        }
        centroids.push(centroid);
    }
    Ok(EpisodeManifest {
        id,
        classes: classes.iter().map(|&c| src.class_names[c].clone()).collect(),
        support,
        query,
        centroids: Some(centroids),
    })
}

/// Stream for episode `id`, independent of how many episodes are built or
/// in which order.
pub fn episode_rng(seed: u64, id: u64) -> crate::seed::Rng {
    stream(mix64(&[seed, id]), "episode")
}

/// Episodes `0..count`, built in parallel, returned in id order.
pub fn generate_episodes(
    src: &EpisodeSource,
    spec: &EpisodeSpec,
    mode: EpisodeMode,
    count: usize,
) -> Result<Vec<EpisodeManifest>> {
    check_source(src, spec)?;
    (0..count as u64)
        .into_par_iter()
        .map(|id| {
            let mut rng = episode_rng(spec.seed, id);
            match mode {
                EpisodeMode::Standard => standard_episode(src, spec, id, &mut rng),
                EpisodeMode::Metadata => metadata_episode(src, spec, id, &mut rng),
            }
        })
        .collect()
}
