use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rayon::prelude::*;

use super::alphabet::Alphabet;
use super::index::index_registry;
use super::layout::{write_dataset, DatasetLayout, LABEL_DIR};
use crate::error::{Error, Result};
use crate::pipeline::{sample_nuisance, synthesize, Assets, ImageRecord, LabelSpec, PipelineConfig};
use crate::raster::Raster;

#[derive(Clone, Debug)]
pub struct GenerateOptions {
    pub config: PipelineConfig,
    /// Images per class.
    pub count: usize,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

/// One class with the fonts it may be drawn in.
#[derive(Clone, Debug)]
pub struct ClassPlan {
    pub class_index: usize,
    pub label: LabelSpec,
    pub fonts: Vec<String>,
}

/// Classes in canonical (code point) order. Each class may use the fonts
/// covering its whole super-class.
pub fn plan_classes(assets: &Assets, alphabet: &Alphabet) -> Result<Vec<ClassPlan>> {
    if alphabet.is_empty() {
        return Err(Error::ConfigRange(format!("alphabet {} lists no characters", alphabet.name)));
    }
    let mut by_section = BTreeMap::new();
    for s in &alphabet.sections {
        let idx = index_registry(&assets.fonts, &s.super_class, &s.codepoints)?;
        if idx.fonts.is_empty() {
            return Err(Error::ConfigRange(format!("no font covers super-class {}", s.super_class)));
        }
        by_section.insert(s.super_class.as_str(), idx.fonts);
    }
    Ok(alphabet
        .classes()
        .into_iter()
        .enumerate()
        .map(|(i, (cp, sc))| ClassPlan {
            class_index: i,
            label: LabelSpec::single(cp, sc),
            fonts: by_section[sc].clone(),
        })
        .collect())
}

fn image_name(label: &LabelSpec, instance: usize) -> String {
    format!("{}_{instance:04}.png", label.slug())
}

/// Synthesizes `count` images per class. Output order is
/// `(class_index, instance_index)` whatever the thread count.
pub fn generate(assets: &Assets, alphabet: &Alphabet, opts: &GenerateOptions) -> Result<Vec<(ImageRecord, Raster)>> {
    opts.config.validate()?;
    let plan = plan_classes(assets, alphabet)?;
    let jobs: Vec<(&ClassPlan, usize)> = plan
        .iter()
        .flat_map(|c| (0..opts.count).map(move |i| (c, i)))
        .collect();
    let run = || {
        jobs.par_iter()
            .map(|&(class, inst)| {
                let name = image_name(&class.label, inst);
                let one = || -> Result<(ImageRecord, Raster)> {
                    let z = sample_nuisance(
                        &opts.config,
                        assets,
                        &class.fonts,
                        class.class_index as u64,
                        inst as u64,
                        opts.seed,
                    )?;
                    let s = synthesize(assets, &class.label, &z, opts.config.size)?;
                    let record = ImageRecord {
                        image_name: name.clone(),
                        class_index: class.class_index,
                        instance_index: inst,
                        label: class.label.clone(),
                        z,
                        family_name: s.family_name,
                        style_name: s.style_name,
                    };
                    Ok((record, s.image))
                };
                one().inspect_err(|e| log::error!("{name}: {e}"))
            })
            .collect::<Result<Vec<_>>>()
    };
    match opts.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::ConfigRange(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    }
}

/// [`generate`] then [`write_dataset`], plus `label/config.txt` recording
/// the configuration and seed.
pub fn generate_dataset(
    assets: &Assets,
    alphabet: &Alphabet,
    opts: &GenerateOptions,
    out: &Path,
) -> Result<DatasetLayout> {
    let items = generate(assets, alphabet, opts)?;
    let layout = write_dataset(&items, out)?;
    let path = layout.root.join(LABEL_DIR).join("config.txt");
    let text = format!("# seed = {}\n# count = {}\n{}", opts.seed, opts.count, opts.config.to_text());
    fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    log::info!("wrote {} images to {}", items.len(), out.display());
    Ok(layout)
}
