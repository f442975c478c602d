pub mod composite;
pub mod dataset;
pub mod episodes;
pub mod error;
pub mod font;
pub mod ops;
pub mod pipeline;
pub mod raster;
pub mod seed;
pub mod transform;

pub use error::{Error, Result};
