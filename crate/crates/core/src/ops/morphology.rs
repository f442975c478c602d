use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::Raster;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelShape {
    Rectangle,
    Ellipse,
    Cross,
}

impl KernelShape {
    pub const ALL: [KernelShape; 3] = [KernelShape::Rectangle, KernelShape::Ellipse, KernelShape::Cross];

    pub fn name(self) -> &'static str {
        match self {
            KernelShape::Rectangle => "rectangle",
            KernelShape::Ellipse => "ellipse",
            KernelShape::Cross => "cross",
        }
    }
}

impl FromStr for KernelShape {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        KernelShape::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::ConfigRange(format!("unknown kernel shape {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphKernel {
    shape: KernelShape,
    width: usize,
    height: usize,
}

impl MorphKernel {
    pub fn new(shape: KernelShape, width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 || width % 2 == 0 || height % 2 == 0 {
            return Err(Error::ConfigRange(format!(
                "kernel dimensions must be odd and positive, got {width}x{height}"
            )));
        }
        Ok(Self { shape, width, height })
    }

    pub fn shape(&self) -> KernelShape {
        self.shape
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Active cells as offsets from the center.
    pub fn cells(&self) -> Vec<(i64, i64)> {
        let (rx, ry) = ((self.width / 2) as i64, (self.height / 2) as i64);
        let (hw, hh) = (self.width as f64 / 2.0, self.height as f64 / 2.0);
        let mut out = Vec::new();
        for dy in -ry..=ry {
            for dx in -rx..=rx {
                let on = match self.shape {
                    KernelShape::Rectangle => true,
                    KernelShape::Cross => dx == 0 || dy == 0,
                    KernelShape::Ellipse => {
                        let (u, v) = (dx as f64 / hw, dy as f64 / hh);
                        u * u + v * v <= 1.0
                    }
                };
                if on {
                    out.push((dx, dy));
                }
            }
        }
        out
    }
}

impl fmt::Display for MorphKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}x{}", self.shape.name(), self.width, self.height)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MorphOp {
    Erosion,
    Dilation,
    Opening,
    Closing,
    Gradient,
    TopHat,
    BlackHat,
}

impl MorphOp {
    pub const ALL: [MorphOp; 7] = [
        MorphOp::Erosion,
        MorphOp::Dilation,
        MorphOp::Opening,
        MorphOp::Closing,
        MorphOp::Gradient,
        MorphOp::TopHat,
        MorphOp::BlackHat,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MorphOp::Erosion => "erosion",
            MorphOp::Dilation => "dilation",
            MorphOp::Opening => "opening",
            MorphOp::Closing => "closing",
            MorphOp::Gradient => "gradient",
            MorphOp::TopHat => "top_hat",
            MorphOp::BlackHat => "black_hat",
        }
    }
}

impl FromStr for MorphOp {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        MorphOp::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::ConfigRange(format!("unknown morphology op {s:?}")))
    }
}

fn filter(img: &Raster, cells: &[(i64, i64)], take_max: bool) -> Raster {
    let (w, h, c) = (img.width() as i64, img.height() as i64, img.channels());
    let mut out = img.clone();
    for y in 0..h {
        for x in 0..w {
            for ch in 0..c {
                let mut acc = if take_max { f64::NEG_INFINITY } else { f64::INFINITY };
                for &(dx, dy) in cells {
                    let (sx, sy) = (x + dx, y + dy);
                    let v = if sx < 0 || sy < 0 || sx >= w || sy >= h {
                        0.0
                    } else {
                        img.get(sx as usize, sy as usize, ch)
                    };
                    acc = if take_max { acc.max(v) } else { acc.min(v) };
                }
                out.set(x as usize, y as usize, ch, acc);
            }
        }
    }
    out
}

fn diff(a: &Raster, b: &Raster) -> Raster {
    let data = a.data().iter().zip(b.data()).map(|(x, y)| (x - y).max(0.0)).collect();
    Raster::from_data(a.width(), a.height(), a.channels(), a.scale(), data)
}

/// Min/max filters over the kernel's active cells. Pixels outside the image
/// read as 0. Differences are clamped at 0.
pub fn morphology(img: &Raster, op: MorphOp, kernel: &MorphKernel) -> Raster {
    let cells = kernel.cells();
    let erode = |r: &Raster| filter(r, &cells, false);
    let dilate = |r: &Raster| filter(r, &cells, true);
    match op {
        MorphOp::Erosion => erode(img),
        MorphOp::Dilation => dilate(img),
        MorphOp::Opening => dilate(&erode(img)),
        MorphOp::Closing => erode(&dilate(img)),
        MorphOp::Gradient => diff(&dilate(img), &erode(img)),
        MorphOp::TopHat => diff(img, &dilate(&erode(img))),
        MorphOp::BlackHat => diff(&erode(&dilate(img)), img),
    }
}
