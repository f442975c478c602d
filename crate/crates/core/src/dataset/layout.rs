use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pipeline::{ImageRecord, LABEL_COLUMNS, MANDATORY_COLUMNS, Z_COLUMNS};
use crate::raster::Raster;

pub const DATA_DIR: &str = "data";
pub const LABEL_DIR: &str = "label";
pub const LABEL_FILE: &str = "raw_labels.csv";

/// A dataset root holding `data/*.png` and `label/raw_labels.csv`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatasetLayout {
    pub root: PathBuf,
}

impl DatasetLayout {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    pub fn data_dir(&self) -> PathBuf {
        self.root.join(DATA_DIR)
    }

    pub fn labels_path(&self) -> PathBuf {
        self.root.join(LABEL_DIR).join(LABEL_FILE)
    }

    pub fn image_path(&self, name: &str) -> PathBuf {
        self.data_dir().join(name)
    }
}

/// The label CSV as text cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl LabelTable {
    pub fn read(path: &Path) -> Result<Self> {
        let mut rdr = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            other => Error::Layout(format!("{}: {other:?}", path.display())),
        })?;
        let columns = rdr.headers()?.iter().map(str::to_string).collect();
        let rows = rdr
            .records()
            .map(|r| r.map(|r| r.iter().map(str::to_string).collect()))
            .collect::<std::result::Result<_, _>>()?;
        Ok(Self { columns, rows })
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Cells of one column; `None` when the column is absent.
    pub fn values(&self, name: &str) -> Option<Vec<&str>> {
        let i = self.column(name)?;
        Some(self.rows.iter().map(|r| r.get(i).map_or("", String::as_str)).collect())
    }
}

/// Header for a set of records: mandatory, label, then the applied `z_` columns.
pub fn csv_header(records: &[&ImageRecord]) -> Vec<&'static str> {
    let present: BTreeSet<&'static str> = records
        .iter()
        .flat_map(|r| r.columns().into_iter().map(|c| c.0))
        .collect();
    MANDATORY_COLUMNS
        .iter()
        .chain(LABEL_COLUMNS.iter())
        .copied()
        .chain(Z_COLUMNS.iter().copied().filter(|c| present.contains(c)))
        .collect()
}

/// Writes the images as PNG under `data/` and the sorted label CSV. Rows are
/// ordered by `(class_index, instance_index)`.
pub fn write_dataset(items: &[(ImageRecord, Raster)], out: &Path) -> Result<DatasetLayout> {
    let mut names = BTreeSet::new();
    for (r, _) in items {
        if !names.insert(r.image_name.as_str()) {
            return Err(Error::DuplicateName(r.image_name.clone()));
        }
    }
    let layout = DatasetLayout::new(out);
    for dir in [layout.data_dir(), layout.root.join(LABEL_DIR)] {
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    }
    items
        .par_iter()
        .map(|(r, img)| img.write_png(&layout.image_path(&r.image_name)))
        .collect::<Result<()>>()?;

    let mut records: Vec<&ImageRecord> = items.iter().map(|i| &i.0).collect();
    records.sort_by_key(|r| (r.class_index, r.instance_index, r.image_name.clone()));
    let header = csv_header(&records);
    let path = layout.labels_path();
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_path(&path)
        .map_err(|e| Error::Layout(format!("{}: {e}", path.display())))?;
    w.write_record(&header)?;
    for r in records {
        let cols: BTreeMap<&str, String> = r.columns().into_iter().collect();
        w.write_record(header.iter().map(|h| cols.get(h).map_or("", String::as_str)))?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;
    Ok(layout)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatasetSummary {
    pub rows: usize,
    pub classes: usize,
    pub width: u32,
    pub height: u32,
}

/// Checks a dataset directory: mandatory columns, unique names, one PNG per
/// row and no unlisted PNGs, uniform image size, and `unicode_code_point`
/// matching `text`.
pub fn validate_dataset(root: &Path) -> Result<DatasetSummary> {
    let layout = DatasetLayout::new(root);
    let labels = layout.labels_path();
    if !labels.is_file() {
        return Err(Error::Layout(format!("missing {}", labels.display())));
    }
    let table = LabelTable::read(&labels)?;
    for c in MANDATORY_COLUMNS {
        if table.column(c).is_none() {
            return Err(Error::Layout(format!("missing column {c}")));
        }
    }
    let names = table.values("image_name").expect("checked");
    let texts = table.values("text").expect("checked");
    let cps = table.values("unicode_code_point").expect("checked");

    let mut seen = BTreeSet::new();
    let mut dims = None;
    for (row, name) in names.iter().enumerate() {
        if !seen.insert(*name) {
            return Err(Error::Layout(format!("row {}: duplicate image_name {name}", row + 1)));
        }
        let path = layout.image_path(name);
        if !path.is_file() {
            return Err(Error::Layout(format!("row {}: missing image {name}", row + 1)));
        }
        let d = image::image_dimensions(&path)?;
        match dims {
            None => dims = Some(d),
            Some(prev) if prev != d => {
                return Err(Error::Layout(format!(
                    "row {}: {name} is {}x{}, expected {}x{}",
                    row + 1,
                    d.0,
                    d.1,
                    prev.0,
                    prev.1
                )))
            }
            _ => {}
        }
        let expected: Option<String> = cps[row]
            .split_whitespace()
            .map(|v| v.parse::<u32>().ok().and_then(char::from_u32))
            .collect();
        if expected.as_deref() != Some(texts[row]) {
            return Err(Error::Layout(format!(
                "row {}: code points {:?} do not spell {:?}",
                row + 1,
                cps[row],
                texts[row]
            )));
        }
    }

    let data = layout.data_dir();
    let pngs = fs::read_dir(&data)
        .map_err(|e| Error::io(&data, e))?
        .filter_map(|e| e.ok())
        .filter(|e| e.path().extension().is_some_and(|x| x == "png"))
        .count();
    if pngs != names.len() {
        return Err(Error::Layout(format!("{} rows but {pngs} images in {}", names.len(), data.display())));
    }
    let (width, height) = dims.unwrap_or((0, 0));
    Ok(DatasetSummary {
        rows: names.len(),
        classes: texts.iter().collect::<BTreeSet<_>>().len(),
        width,
        height,
    })
}
