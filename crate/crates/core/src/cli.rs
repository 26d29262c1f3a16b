//! `kachash` command line.
//!
//! Exit codes: 0 success, 1 runtime or data error, 2 configuration error.
//! Data goes to stdout or `--out`; diagnostics go to stderr.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::classifier::TrainConfig;
use crate::data::{self, DatasetMatrix};
use crate::experiment::{self, ExperimentConfig};
use crate::pipelines::{serialize_pipeline, Family, Pipeline, PipelineDocument, PipelineSpec, Projection};
use crate::verify::{self, CollisionConfig};
use crate::{Error, Result};

/// Overrides the default MNIST directory.
pub const DATA_DIR_ENV: &str = "KACHASH_DATA_DIR";
pub const DEFAULT_DATA_DIR: &str = "data/mnist";

#[derive(Debug, Parser)]
#[command(name = "kachash", version, about = "Sign-quantized structured random projections")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a pipeline document.
    Build(BuildArgs),
    /// Hash a dataset into a KHSH code batch.
    Hash(HashArgs),
    /// Distance and angle preservation reports.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Accuracy-versus-compression sweep on MNIST.
    Experiment(Box<ExperimentArgs>),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum FamilyArg {
    Unstructured,
    Short,
    ExtendedHadamard,
    ExtendedKac,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum ProjectionArg {
    GaussianFull,
    Circulant,
    Toeplitz,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Unstructured => Family::Unstructured,
            FamilyArg::Short => Family::Short,
            FamilyArg::ExtendedHadamard => Family::ExtendedHadamard,
            FamilyArg::ExtendedKac => Family::ExtendedKac,
        }
    }
}

impl From<ProjectionArg> for Projection {
    fn from(p: ProjectionArg) -> Self {
        match p {
            ProjectionArg::GaussianFull => Projection::GaussianFull,
            ProjectionArg::Circulant => Projection::Circulant,
            ProjectionArg::Toeplitz => Projection::Toeplitz,
        }
    }
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Defaults to gaussian_full for the unstructured family and circulant
    /// otherwise.
    #[arg(long, value_enum)]
    pub projection: Option<ProjectionArg>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl PipelineArgs {
    fn spec(&self, n: usize, k: usize) -> Result<PipelineSpec> {
        let family = Family::from(self.family);
        let projection = match self.projection {
            Some(p) => p.into(),
            None if family.is_structured() => Projection::Circulant,
            None => Projection::GaussianFull,
        };
        PipelineSpec::new(family, projection, n, k, self.seed)
    }
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    /// Input dimension.
    #[arg(long)]
    pub n: usize,
    /// Code length.
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum InputFormat {
    Auto,
    Idx,
    Delimited,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    pub format: InputFormat,
    /// Single-character column separator for delimited input.
    #[arg(long, default_value = ",")]
    pub delimiter: char,
    /// Delimited input carries an integer label in its last column.
    #[arg(long)]
    pub labels: bool,
}

#[derive(Debug, Args)]
pub struct HashArgs {
    #[arg(long)]
    pub pipeline: PathBuf,
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Pairwise distance distortion against the JL bound.
    Jl(JlArgs),
    /// Empirical collision fraction versus planted angle.
    Collision(CollisionArgs),
}

#[derive(Debug, Args)]
pub struct JlArgs {
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    /// Points file; Gaussian points are generated when absent.
    #[arg(long)]
    pub points: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "auto")]
    pub format: InputFormat,
    #[arg(long, default_value = ",")]
    pub delimiter: char,
    #[arg(long, default_value_t = 100)]
    pub n_points: usize,
    #[arg(long, default_value_t = 784)]
    pub dim: usize,
    #[arg(long, default_value_t = 392)]
    pub k: usize,
    #[arg(long, default_value_t = 0.3)]
    pub epsilon: f64,
    /// Seed for generated points.
    #[arg(long, default_value_t = 0)]
    pub points_seed: u64,
}

#[derive(Debug, Args)]
pub struct CollisionArgs {
    /// Comma-separated angles in radians.
    #[arg(long, value_delimiter = ',', required = true)]
    pub angles: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 256)]
    pub bits: usize,
    #[arg(long, value_enum, default_value = "unstructured")]
    pub family: FamilyArg,
    #[arg(long, value_enum)]
    pub projection: Option<ProjectionArg>,
    /// Working dimension; defaults to the least power of two >= bits.
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Directory holding train-images-idx3-ubyte, train-labels-idx1-ubyte,
    /// t10k-images-idx3-ubyte and t10k-labels-idx1-ubyte.
    #[arg(long, env = DATA_DIR_ENV)]
    pub data_dir: Option<PathBuf>,
    #[arg(long)]
    pub train_images: Option<PathBuf>,
    #[arg(long)]
    pub train_labels: Option<PathBuf>,
    #[arg(long)]
    pub test_images: Option<PathBuf>,
    #[arg(long)]
    pub test_labels: Option<PathBuf>,
    #[arg(long)]
    pub train_limit: Option<usize>,
    #[arg(long)]
    pub test_limit: Option<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = experiment::DEFAULT_REDUCTIONS)]
    pub reductions: Vec<usize>,
    #[arg(long, value_delimiter = ',', value_enum,
          default_values_t = [FamilyArg::Short, FamilyArg::ExtendedHadamard, FamilyArg::ExtendedKac])]
    pub families: Vec<FamilyArg>,
    #[arg(long, value_delimiter = ',', value_enum,
          default_values_t = [ProjectionArg::Circulant, ProjectionArg::Toeplitz])]
    pub projections: Vec<ProjectionArg>,
    #[arg(long, value_delimiter = ',', default_values_t = experiment::DEFAULT_SEEDS)]
    pub seeds: Vec<u64>,
    #[arg(long, default_value_t = TrainConfig::default().epochs)]
    pub epochs: usize,
    #[arg(long, default_value_t = TrainConfig::default().learning_rate)]
    pub learning_rate: f64,
    #[arg(long, default_value_t = TrainConfig::default().batch_size)]
    pub batch_size: usize,
    /// Hash raw pixels instead of train-mean-centered ones.
    #[arg(long)]
    pub no_center: bool,
    /// Result table (CSV); stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Summary document path.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

impl std::fmt::Display for FamilyArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(Family::from(*self).as_str())
    }
}

impl std::fmt::Display for ProjectionArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(Projection::from(*self).as_str())
    }
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| Error::io(p, e)),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

fn delimiter_byte(c: char) -> Result<u8> {
    if c.is_ascii() {
        Ok(c as u8)
    } else {
        Err(Error::Config(format!("delimiter `{c}` must be a single ASCII character")))
    }
}

fn read_dataset(path: &Path, format: InputFormat, delimiter: char, labels: bool) -> Result<DatasetMatrix<f64>> {
    let bytes = data::read_file(path)?;
    let is_idx = match format {
        InputFormat::Idx => true,
        InputFormat::Delimited => false,
        InputFormat::Auto => bytes.get(..4) == Some(&data::IDX_IMAGES_MAGIC.to_be_bytes()[..]),
    };
    let ctx = |e: Error| match e {
        Error::Parse { location, message } => Error::Parse {
            location: format!("{}: {location}", path.display()),
            message,
        },
        other => other,
    };
    if is_idx {
        data::read_idx_images(&bytes).map_err(ctx)
    } else {
        data::read_delimited(bytes.as_slice(), delimiter_byte(delimiter)?, labels).map_err(ctx)
    }
}

fn cmd_build(a: &BuildArgs) -> Result<()> {
    let spec = a.pipeline.spec(a.n, a.k)?;
    let doc = serialize_pipeline(&Pipeline::<f64>::build(spec)?)?;
    write_output(a.out.as_deref(), doc.render().as_bytes())?;
    if a.out.is_some() {
        println!("padded_dim = {}", spec.padded_dim);
        match spec.kac_steps() {
            Some(s) => println!("kac_steps = {s}"),
            None => println!("kac_steps = 0"),
        }
    }
    Ok(())
}

fn load_pipeline(path: &Path) -> Result<Pipeline<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let doc = PipelineDocument::parse(&text).map_err(|e| match e {
        Error::Parse { location, message } => Error::Parse {
            location: format!("{}: {location}", path.display()),
            message,
        },
        other => other,
    })?;
    Pipeline::build(doc.spec)
}

fn cmd_hash(a: &HashArgs) -> Result<()> {
    let p = load_pipeline(&a.pipeline)?;
    let data = read_dataset(&a.input.input, a.input.format, a.input.delimiter, a.input.labels)?;
    if !data.is_empty() && data.dim() != p.spec().input_dim {
        return Err(Error::Dimension(format!(
            "pipeline expects input_dim {}, data has dimension {}",
            p.spec().input_dim,
            data.dim()
        )));
    }
    let codes = p.hash_batch(&data)?;
    write_output(Some(&a.out), &codes.to_khsh())?;
    eprintln!("hashed {} rows into {} bits", codes.len(), codes.code_len());
    Ok(())
}

fn cmd_jl(a: &JlArgs) -> Result<()> {
    if !(a.epsilon > 0.0 && a.epsilon < 1.0) {
        return Err(Error::Domain(format!("epsilon {} outside (0, 1)", a.epsilon)));
    }
    let points = match &a.points {
        Some(p) => read_dataset(p, a.format, a.delimiter, false)?,
        None => data::gaussian_points(a.n_points, a.dim, a.points_seed)?,
    };
    let spec = a.pipeline.spec(points.dim(), a.k)?;
    let report = verify::measure_distortion(&points, &Pipeline::build(spec)?, a.epsilon)?;
    let mut out = report.to_document();
    out.push_str("\nstatistic,value\n");
    for (k, v) in [
        ("violating_fraction", report.violating_fraction()),
        ("min_ratio", report.min_ratio),
        ("mean_ratio", report.mean_ratio),
        ("max_ratio", report.max_ratio),
        ("bound_probability", report.bound_probability),
    ] {
        out.push_str(&format!("{k},{v}\n"));
    }
    write_output(None, out.as_bytes())
}

fn cmd_collision(a: &CollisionArgs) -> Result<()> {
    let family = Family::from(a.family);
    let projection = match a.projection {
        Some(p) => p.into(),
        None if family.is_structured() => Projection::Circulant,
        None => Projection::GaussianFull,
    };
    let mut cfg = CollisionConfig::new(family, projection, a.bits, a.trials, a.seed);
    if let Some(d) = a.dim {
        cfg.dim = d;
    }
    let curve = verify::collision_curve(&a.angles, &cfg)?;
    let mut out = curve.to_document(&cfg);
    out.push('\n');
    out.push_str(&curve.to_table());
    write_output(None, out.as_bytes())
}

fn cmd_experiment(a: &ExperimentArgs) -> Result<()> {
    let pick = |explicit: &Option<PathBuf>, file: &str| -> Result<PathBuf> {
        let dir = a.data_dir.as_deref().unwrap_or(Path::new(DEFAULT_DATA_DIR));
        Ok(explicit.clone().unwrap_or_else(|| dir.join(file)))
    };
    let train = data::load_mnist::<f64>(
        &pick(&a.train_images, "train-images-idx3-ubyte")?,
        &pick(&a.train_labels, "train-labels-idx1-ubyte")?,
    )?;
    let test = data::load_mnist::<f64>(
        &pick(&a.test_images, "t10k-images-idx3-ubyte")?,
        &pick(&a.test_labels, "t10k-labels-idx1-ubyte")?,
    )?;
    let train = a.train_limit.map_or(train.clone(), |n| train.take(n));
    let test = a.test_limit.map_or(test.clone(), |n| test.take(n));
    let cfg = ExperimentConfig {
        reduction_factors: a.reductions.clone(),
        families: a.families.iter().map(|&f| f.into()).collect(),
        projections: a.projections.iter().map(|&p| p.into()).collect(),
        seeds: a.seeds.clone(),
        train: TrainConfig {
            epochs: a.epochs,
            learning_rate: a.learning_rate,
            batch_size: a.batch_size,
            seed: 0,
        },
        center: !a.no_center,
    };
    eprintln!("train {} x {}, test {}", train.len(), train.dim(), test.len());
    let table = experiment::run_experiment(&cfg, &train, &test, |r| {
        eprintln!(
            "{} {} k={} seed={} accuracy={:.4}",
            r.family, r.projection, r.k, r.seed, r.test_accuracy
        );
    })?;
    write_output(a.out.as_deref(), table.to_csv().as_bytes())?;
    if let Some(p) = &a.summary {
        write_output(Some(p), table.summary().as_bytes())?;
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Build(a) => cmd_build(a),
        Command::Hash(a) => cmd_hash(a),
        Command::Verify(VerifyCommand::Jl(a)) => cmd_jl(a),
        Command::Verify(VerifyCommand::Collision(a)) => cmd_collision(a),
        Command::Experiment(a) => cmd_experiment(a),
    }
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage_error() { 2 } else { 1 })
        }
    }
}
