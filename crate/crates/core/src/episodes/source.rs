use std::collections::BTreeMap;
use std::path::Path;

use crate::dataset::{DatasetLayout, LabelTable};
use crate::error::{Error, Result};

/// Short names accepted for common metadata columns.
pub const METADATA_ALIASES: [(&str, &str); 2] = [("rotation", "z_linear_rotation"), ("shear", "z_linear_shear_x")];

/// Per-example metadata vectors in a declared column order.
#[derive(Clone, Debug, PartialEq)]
pub struct Metadata {
    pub columns: Vec<String>,
    /// One vector per example, all of `columns.len()` finite values.
    pub values: Vec<Vec<f64>>,
    /// Whether columns were shifted and scaled to zero mean, unit variance.
    pub standardized: bool,
}

/// Examples grouped by class. Example indices follow input order, which is
/// the tie-break order of the metadata sampler.
#[derive(Clone, Debug, PartialEq)]
pub struct EpisodeSource {
    pub class_names: Vec<String>,
    pub image_names: Vec<String>,
    pub class_of: Vec<usize>,
    /// Example indices per class, ascending.
    pub by_class: Vec<Vec<usize>>,
    pub metadata: Option<Metadata>,
}

impl EpisodeSource {
    /// From `(class, image_name)` pairs. Classes are numbered by first appearance.
    pub fn new<C: Into<String>, I: Into<String>>(examples: impl IntoIterator<Item = (C, I)>) -> Self {
        let mut ids: BTreeMap<String, usize> = BTreeMap::new();
        let mut src = EpisodeSource {
            class_names: Vec::new(),
            image_names: Vec::new(),
            class_of: Vec::new(),
            by_class: Vec::new(),
            metadata: None,
        };
        for (i, (c, name)) in examples.into_iter().enumerate() {
            let c = c.into();
            let id = *ids.entry(c.clone()).or_insert_with(|| {
                src.class_names.push(c);
                src.by_class.push(Vec::new());
                src.class_names.len() - 1
            });
            src.image_names.push(name.into());
            src.class_of.push(id);
            src.by_class[id].push(i);
        }
        src
    }

    /// Classes keyed by the `text` column.
    pub fn from_table(table: &LabelTable) -> Result<Self> {
        let (Some(names), Some(texts)) = (table.values("image_name"), table.values("text")) else {
            return Err(Error::Layout("label table needs image_name and text columns".into()));
        };
        Ok(Self::new(texts.into_iter().zip(names)))
    }

    /// Reads a dataset's label CSV and attaches `metadata_columns` when non-empty.
    pub fn load(root: &Path, metadata_columns: &[String], standardize: bool) -> Result<Self> {
        let table = LabelTable::read(&DatasetLayout::new(root).labels_path())?;
        let mut src = Self::from_table(&table)?;
        if !metadata_columns.is_empty() {
            src.attach_metadata(&table, metadata_columns, standardize)?;
        }
        Ok(src)
    }

    pub fn len(&self) -> usize {
        self.image_names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image_names.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.class_names.len()
    }

    /// Sets explicit metadata vectors, one per example.
    pub fn with_metadata(mut self, columns: Vec<String>, values: Vec<Vec<f64>>) -> Result<Self> {
        self.set_metadata(columns, values, false)?;
        Ok(self)
    }

    fn set_metadata(&mut self, columns: Vec<String>, values: Vec<Vec<f64>>, standardized: bool) -> Result<()> {
        if values.len() != self.len() {
            return Err(Error::MissingMetadata(format!(
                "{} metadata rows for {} examples",
                values.len(),
                self.len()
            )));
        }
        for (i, v) in values.iter().enumerate() {
            if v.len() != columns.len() || v.iter().any(|x| !x.is_finite()) {
                return Err(Error::MissingMetadata(format!("example {i} has an invalid metadata vector")));
            }
        }
        self.metadata = Some(Metadata {
            columns,
            values,
            standardized,
        });
        Ok(())
    }

    /// Reads metadata columns from the label table. Names may be exact
    /// column names, an alias from [`METADATA_ALIASES`], or the unique `z_`
    /// column ending in `_<name>`.
    pub fn attach_metadata(&mut self, table: &LabelTable, names: &[String], standardize: bool) -> Result<()> {
        let mut columns = Vec::with_capacity(names.len());
        let mut cells = Vec::with_capacity(names.len());
        for n in names {
            let col = resolve_column(table, n)?;
            cells.push(table.values(&col).expect("resolved"));
            columns.push(col);
        }
        let mut values = Vec::with_capacity(table.rows.len());
        for row in 0..table.rows.len() {
            let mut v = Vec::with_capacity(cells.len());
            for (c, col) in cells.iter().zip(&columns) {
                let x = c[row]
                    .trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| Error::MissingMetadata(format!("row {}: {col} = {:?}", row + 1, c[row])))?;
                v.push(x);
            }
            values.push(v);
        }
        if standardize {
            standardize_columns(&mut values);
        }
        self.set_metadata(columns, values, standardize)
    }
}

fn resolve_column(table: &LabelTable, name: &str) -> Result<String> {
    if table.column(name).is_some() {
        return Ok(name.to_string());
    }
    if let Some((_, col)) = METADATA_ALIASES.iter().find(|(a, _)| *a == name) {
        if table.column(col).is_some() {
            return Ok(col.to_string());
        }
    }
    let suffix = format!("_{name}");
    let hits: Vec<&String> = table
        .columns
        .iter()
        .filter(|c| c.starts_with("z_") && c.ends_with(&suffix))
        .collect();
    match hits.as_slice() {
        [one] => Ok(one.to_string()),
        [] => Err(Error::MissingMetadata(format!("no column for {name:?}"))),
        many => Err(Error::MissingMetadata(format!("{name:?} is ambiguous: {many:?}"))),
    }
}

/// Zero mean, unit variance per column; constant columns become 0.
fn standardize_columns(values: &mut [Vec<f64>]) {
    let n = values.len() as f64;
    let dims = values.first().map_or(0, Vec::len);
    for d in 0..dims {
        let mean = values.iter().map(|v| v[d]).sum::<f64>() / n;
        let var = values.iter().map(|v| (v[d] - mean).powi(2)).sum::<f64>() / n;
        let sd = var.sqrt();
        for v in values.iter_mut() {
            v[d] = if sd > 0.0 { (v[d] - mean) / sd } else { 0.0 };
        }
    }
}
