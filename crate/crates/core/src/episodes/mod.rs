//! Few-shot episode sampling over a generated dataset.

mod manifest;
mod sampler;
mod source;

pub use manifest::{check_episode, read_manifest, write_manifest, ManifestHeader, MANIFEST_FORMAT, MANIFEST_VERSION};
pub use sampler::{
    episode_rng, generate_episodes, metadata_episode, nearest_members, standard_episode, EpisodeItem, EpisodeManifest,
    EpisodeMode, EpisodeSpec,
};
pub use source::{EpisodeSource, Metadata, METADATA_ALIASES};
