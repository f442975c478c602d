//! Color, foreground fill, backgrounds and blending.

mod background;
mod blend;
mod color;
mod fill;

pub use background::{make_background, BackgroundSpec};
pub use blend::{blend_naive, blend_poisson, PoissonOutcome, DEFAULT_POISSON_TOL};
pub use color::{delta_e_2000, rgb_to_lab, sample_color_pair, LabColor, RgbColor, MAX_COLOR_ATTEMPTS};
pub use fill::{add_outline, fill_foreground, FillSpec, TextureSet};
