use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Arg, ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use glyphforge::composite::TextureSet;
use glyphforge::dataset::{
    build_index, generate, generate_dataset, plan_classes, validate_dataset, Alphabet, GenerateOptions,
};
use glyphforge::episodes::{generate_episodes, write_manifest, EpisodeMode, EpisodeSource, EpisodeSpec, ManifestHeader};
use glyphforge::font::FontRegistry;
use glyphforge::pipeline::{Assets, PipelineConfig, CONFIG_KEYS, PRESETS};
use glyphforge::raster::Raster;
use glyphforge_fixtures as fx;

/// Synthetic printed-character datasets with per-image nuisance metadata.
#[derive(Parser, Debug)]
#[command(name = "glyphforge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a dataset: data/*.png plus label/raw_labels.csv.
    Generate(GenerateArgs),
    /// List the fonts in a directory that cover every character of an alphabet.
    Index(IndexArgs),
    /// Check a dataset directory and print a summary.
    Validate {
        dataset: PathBuf,
    },
    /// Render a grid of sample images for a configuration.
    Preview(PreviewArgs),
    /// Sample few-shot episodes from a dataset into a manifest file.
    Episodes(EpisodesArgs),
    /// Write the built-in fixture fonts, textures and alphabet to a directory.
    Fixtures {
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
struct ConfigArgs {
    /// Starting preset (ignored when --config is given).
    #[arg(long, default_value = "meta1", value_parser = clap::builder::PossibleValuesParser::new(PRESETS))]
    preset: String,
    /// Configuration file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Texture directory for textured foregrounds and image backgrounds.
    #[arg(long)]
    textures: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Font directory.
    #[arg(long)]
    fonts: PathBuf,
    /// Alphabet file.
    #[arg(long)]
    alphabet: PathBuf,
    /// Images per class.
    #[arg(long, default_value_t = 20)]
    count: usize,
    #[arg(long)]
    out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args, Debug)]
struct IndexArgs {
    #[arg(long)]
    fonts: PathBuf,
    #[arg(long)]
    alphabet: PathBuf,
    /// Output JSON file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct PreviewArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Columns x rows.
    #[arg(long, default_value = "8x4")]
    grid: String,
    /// Font directory (default: the built-in fixture fonts).
    #[arg(long)]
    fonts: Option<PathBuf>,
    /// Alphabet file (default: the built-in fixture alphabet).
    #[arg(long)]
    alphabet: Option<PathBuf>,
    /// Output PNG.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct EpisodesArgs {
    #[arg(long)]
    dataset: PathBuf,
    /// Classes per episode.
    #[arg(long, default_value_t = 5)]
    n: usize,
    /// Support examples per class.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Query examples per class.
    #[arg(long, default_value_t = 5)]
    q: usize,
    #[arg(long, default_value_t = 1000)]
    count: usize,
    #[arg(long, default_value = "standard", value_parser = ["standard", "metadata"])]
    mode: String,
    /// Metadata columns for metadata episodes.
    #[arg(long, value_delimiter = ',', default_value = "rotation,shear")]
    metadata_cols: Vec<String>,
    /// Scale metadata columns to zero mean and unit variance.
    #[arg(long)]
    standardize: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

/// Adds one `--<key> <VALUE>` override per configuration key.
fn with_config_flags(cmd: clap::Command) -> clap::Command {
    cmd.args(CONFIG_KEYS.iter().map(|k| {
        Arg::new(*k)
            .long(*k)
            .value_name("VALUE")
            .allow_hyphen_values(true)
            .help_heading("Configuration overrides")
    }))
}

fn command() -> clap::Command {
    Cli::command()
        .mut_subcommand("generate", with_config_flags)
        .mut_subcommand("preview", with_config_flags)
}

fn build_config(args: &ConfigArgs, matches: &ArgMatches) -> Result<PipelineConfig> {
    let mut c = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            PipelineConfig::parse(&text).with_context(|| format!("in {}", path.display()))?
        }
        None => PipelineConfig::preset(&args.preset)?,
    };
    for k in CONFIG_KEYS {
        if let Some(v) = matches.get_one::<String>(k) {
            c.set(k, v)?;
        }
    }
    c.validate()?;
    Ok(c)
}

fn load_textures(dir: Option<&Path>) -> Result<TextureSet> {
    Ok(match dir {
        Some(d) => TextureSet::load_dir(d)?,
        None => TextureSet::new(),
    })
}

fn run_generate(args: &GenerateArgs, m: &ArgMatches) -> Result<()> {
    let config = build_config(&args.config, m)?;
    let assets = Assets::new(FontRegistry::load_dir(&args.fonts)?, load_textures(args.config.textures.as_deref())?);
    let alphabet = Alphabet::load(&args.alphabet)?;
    let opts = GenerateOptions {
        config,
        count: args.count,
        seed: args.config.seed,
        threads: args.threads,
    };
    generate_dataset(&assets, &alphabet, &opts, &args.out)?;
    let s = validate_dataset(&args.out)?;
    println!(
        "{} images of {} classes ({}x{}) in {}",
        s.rows,
        s.classes,
        s.width,
        s.height,
        args.out.display()
    );
    Ok(())
}

fn run_index(args: &IndexArgs) -> Result<()> {
    let alphabet = Alphabet::load(&args.alphabet)?;
    let idx = build_index(&args.fonts, &alphabet.name, &alphabet.codepoints())?;
    idx.write(&args.out)?;
    println!("{} of the fonts cover all {} characters of {}", idx.fonts.len(), idx.codepoints.len(), idx.alphabet);
    for f in &idx.fonts {
        println!("  {f}");
    }
    Ok(())
}

fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let parsed = s
        .split_once(['x', 'X'])
        .and_then(|(c, r)| Some((c.trim().parse().ok()?, r.trim().parse().ok()?)));
    match parsed {
        Some((c, r)) if c > 0 && r > 0 => Ok((c, r)),
        _ => bail!("--grid expects COLSxROWS, got {s:?}"),
    }
}

fn run_preview(args: &PreviewArgs, m: &ArgMatches) -> Result<()> {
    let config = build_config(&args.config, m)?;
    let (cols, rows) = parse_grid(&args.grid)?;
    let fonts = match &args.fonts {
        Some(d) => FontRegistry::load_dir(d)?,
        None => FontRegistry::from_bytes(fx::registry_fonts()),
    };
    let textures = match &args.config.textures {
        Some(d) => TextureSet::load_dir(d)?,
        None => {
            let mut t = TextureSet::new();
            for (name, img) in fx::textures::fixture_textures() {
                t.insert(name, Raster::from_rgb8(&img));
            }
            t
        }
    };
    let assets = Assets::new(fonts, textures);
    let alphabet = match &args.alphabet {
        Some(p) => Alphabet::load(p)?,
        None => Alphabet::parse("fixture", fx::ALPHABET_30)?,
    };
    let classes = plan_classes(&assets, &alphabet)?.len();
    let per_class = (cols * rows).div_ceil(classes);
    let opts = GenerateOptions {
        config: config.clone(),
        count: per_class,
        seed: args.config.seed,
        threads: None,
    };
    let items = generate(&assets, &alphabet, &opts)?;
    // Cell i shows class i mod C, instance i div C.
    let size = config.size;
    let gap = 2;
    let mut sheet = Raster::rgb(cols * (size + gap) + gap, rows * (size + gap) + gap, [128.0; 3]);
    for i in 0..cols * rows {
        let (class, inst) = (i % classes, i / classes);
        let tile = items[class * per_class + inst].1.to_rgb();
        let (ox, oy) = (gap + (i % cols) * (size + gap), gap + (i / cols) * (size + gap));
        for y in 0..size {
            for x in 0..size {
                for c in 0..3 {
                    sheet.set(ox + x, oy + y, c, tile.get(x, y, c));
                }
            }
        }
    }
    sheet.write_png(&args.out)?;
    println!("wrote {}x{} preview to {}", cols, rows, args.out.display());
    Ok(())
}

fn run_episodes(args: &EpisodesArgs) -> Result<()> {
    let mode: EpisodeMode = args.mode.parse()?;
    let spec = EpisodeSpec::new(args.n, args.k, args.q, args.seed)?;
    let cols: &[String] = match mode {
        EpisodeMode::Standard => &[],
        EpisodeMode::Metadata => &args.metadata_cols,
    };
    let src = EpisodeSource::load(&args.dataset, cols, args.standardize)?;
    let episodes = generate_episodes(&src, &spec, mode, args.count)?;
    let columns = src.metadata.as_ref().map(|m| m.columns.clone()).unwrap_or_default();
    let standardized = src.metadata.as_ref().is_some_and(|m| m.standardized);
    let header = ManifestHeader::new(&spec, mode, columns, standardized, episodes.len());
    write_manifest(&args.out, &header, &episodes)?;
    println!("wrote {} {mode} episodes to {}", episodes.len(), args.out.display());
    Ok(())
}

fn run_fixtures(out: &Path) -> Result<()> {
    fx::write_fixture_dir(out).with_context(|| format!("writing fixtures to {}", out.display()))?;
    println!("wrote fonts/, textures/ and alphabet.txt to {}", out.display());
    Ok(())
}

fn run(matches: &ArgMatches) -> Result<()> {
    let cli = Cli::from_arg_matches(matches)?;
    let sub = matches.subcommand().map(|s| s.1);
    match &cli.command {
        Command::Generate(a) => run_generate(a, sub.expect("subcommand")),
        Command::Index(a) => run_index(a),
        Command::Validate { dataset } => {
            let s = validate_dataset(dataset)?;
            println!("ok: {} images, {} classes, {}x{}", s.rows, s.classes, s.width, s.height);
            Ok(())
        }
        Command::Preview(a) => run_preview(a, sub.expect("subcommand")),
        Command::Episodes(a) => run_episodes(a),
        Command::Fixtures { out } => run_fixtures(out),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let matches = command().get_matches();
    match run(&matches) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
