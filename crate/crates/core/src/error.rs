use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed font: {0}")]
    MalformedFont(String),
    #[error("unsupported outline format: {0}")]
    UnsupportedOutlineFormat(String),
    #[error("no glyph for U+{0:04X}")]
    MissingGlyph(u32),
    #[error("composite glyph nesting exceeds {0} levels")]
    RecursionLimit(usize),
    #[error("outline degenerates: {0}")]
    DegenerateOutline(String),
    #[error("rendering produced no ink")]
    EmptyRendering,
    #[error("degenerate point correspondence: {0}")]
    DegenerateCorrespondence(String),
    #[error("no color pair with delta E >= {threshold} after {attempts} attempts")]
    SamplingExhausted { threshold: f64, attempts: usize },
    #[error("texture {name} ({tex_w}x{tex_h}) too small for crop {crop_w}x{crop_h} at ({x}, {y})")]
    TextureTooSmall {
        name: String,
        tex_w: usize,
        tex_h: usize,
        x: usize,
        y: usize,
        crop_w: usize,
        crop_h: usize,
    },
    #[error("unknown texture {0}")]
    UnknownTexture(String),
    #[error("layer does not fit: {0}")]
    OutOfBounds(String),
    #[error("poisson solve stopped at residual {residual} after {iterations} iterations")]
    NonConvergence { residual: f64, iterations: usize },
    #[error("invalid configuration: {0}")]
    ConfigRange(String),
    #[error("unknown preset {0}")]
    UnknownPreset(String),
    #[error("duplicate image name {0}")]
    DuplicateName(String),
    #[error("at least 3 classes are needed to split, got {0}")]
    TooFewClasses(usize),
    #[error("class {class} has {available} examples, episode needs {needed}")]
    InsufficientExamples {
        class: String,
        available: usize,
        needed: usize,
    },
    #[error("missing metadata: {0}")]
    MissingMetadata(String),
    #[error("invalid dataset layout: {0}")]
    Layout(String),
    #[error("invalid manifest: {0}")]
    Manifest(String),
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Image(#[from] image::ImageError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Strips stage annotations.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }
}

pub(crate) trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|e| Error::Stage {
            stage,
            source: Box::new(e),
        })
    }
}
