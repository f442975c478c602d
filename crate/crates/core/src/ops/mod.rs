//! Post-rasterization transforms on image/mask pairs.

mod homography;
mod morphology;
mod photometric;
mod warp;

pub use homography::{solve_homography, Homography};
pub use morphology::{morphology, KernelShape, MorphKernel, MorphOp};
pub use photometric::{adjust, adjust_image, luminance, PhotometricFactors};
pub use warp::{elastic_field_warp, warp_perspective, DisplacementField, FieldNoise};

use crate::raster::Raster;

/// An RGB image and its `[0, 1]` text mask. Geometric ops move both alike.
#[derive(Clone, Debug, PartialEq)]
pub struct RasterLayer {
    pub image: Raster,
    pub mask: Raster,
}

impl RasterLayer {
    pub fn new(image: Raster, mask: Raster) -> Self {
        assert!(image.same_shape(&mask), "image and mask sizes differ");
        assert!(image.channels() == 3 && mask.channels() == 1);
        Self { image, mask }
    }

    pub fn width(&self) -> usize {
        self.image.width()
    }

    pub fn height(&self) -> usize {
        self.image.height()
    }

    /// Applies `f` to image and mask alike.
    pub fn map_both(&self, f: impl Fn(&Raster) -> Raster) -> RasterLayer {
        RasterLayer::new(f(&self.image), f(&self.mask))
    }
}
