//! Command-line front end and run manifests.

pub mod commands;
pub mod error;
pub mod manifest;

use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use incidence_core::incidence::{GroundField, DOF_TABLE_CAP};
use incidence_core::partition::DEFAULT_CROSSING_GRID;
use serde::{Deserialize, Serialize};

pub use error::{CliError, CliResult, EXIT_INDETERMINATE, EXIT_INPUT, EXIT_OK, EXIT_VIOLATED};
pub use manifest::{execute, Manifest};

#[derive(Clone, Debug, PartialEq, Parser, Serialize, Deserialize)]
#[command(name = "incidence", version, about = "Exact point-curve incidence workbench")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct GlobalArgs {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Master seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Generate a configuration from a family or a spec file.
    Generate(GenerateArgs),
    /// Count incidences of a configuration.
    Count(CountArgs),
    /// Certify the degrees-of-freedom condition (k, s).
    Certify(CertifyArgs),
    /// Polynomial partition of the configuration points.
    Partition(PartitionArgs),
    /// Containment and leaf tangency of curves in a real hypersurface.
    Foliate(FoliateArgs),
    /// Evaluate the incidence bounds against a measured count.
    Bound(BoundArgs),
    /// Fit log I = a log m + b log n + c over a series.
    Fit(FitArgs),
    /// Rerun a command from its manifest and compare outputs.
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Generate(_) => "generate",
            Command::Count(_) => "count",
            Command::Certify(_) => "certify",
            Command::Partition(_) => "partition",
            Command::Foliate(_) => "foliate",
            Command::Bound(_) => "bound",
            Command::Fit(_) => "fit",
            Command::Replay(_) => "replay",
        }
    }

    /// Every path argument, for making them absolute.
    fn paths_mut(&mut self) -> Vec<&mut PathBuf> {
        match self {
            Command::Generate(a) => [Some(&mut a.out)].into_iter().chain([a.spec.as_mut()]).flatten().collect(),
            Command::Count(a) => [Some(&mut a.config), Some(&mut a.out), a.matrix.as_mut()].into_iter().flatten().collect(),
            Command::Certify(a) => vec![&mut a.config, &mut a.out],
            Command::Partition(a) => vec![&mut a.input, &mut a.out],
            Command::Foliate(a) => vec![&mut a.curves, &mut a.out],
            Command::Bound(a) => [Some(&mut a.out), a.config.as_mut()].into_iter().flatten().collect(),
            Command::Fit(a) => a.inputs.iter_mut().chain([&mut a.out]).chain(a.plot.as_mut()).collect(),
            Command::Replay(a) => [Some(&mut a.manifest), a.out.as_mut()].into_iter().flatten().collect(),
        }
    }
}

impl Cli {
    /// Copy with every path argument made absolute.
    pub fn absolutized(&self) -> CliResult<Cli> {
        let mut cli = self.clone();
        for p in cli.command.paths_mut() {
            *p = absolute(p)?;
        }
        if let Command::Foliate(a) = &mut cli.command {
            if let Some(h) = &a.hypersurface {
                if Path::new(h).is_file() {
                    a.hypersurface = Some(absolute(Path::new(h))?.to_string_lossy().into_owned());
                }
            }
        }
        Ok(cli)
    }
}

fn absolute(p: &Path) -> CliResult<PathBuf> {
    std::path::absolute(p).map_err(|e| CliError::io(p, e))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    GridLines,
    UnitCircles,
    ComplexProduct,
    Leaf,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum FieldArg {
    R2,
    C2,
}

impl From<FieldArg> for GroundField {
    fn from(f: FieldArg) -> Self {
        match f {
            FieldArg::R2 => GroundField::R2,
            FieldArg::C2 => GroundField::C2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
#[command(group(ArgGroup::new("source").required(true).args(["family", "spec"])))]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Generator spec JSON (`{"family": ..., ...}`).
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Grid size (grid-lines, unit-circles) or curve count (random).
    #[arg(long)]
    pub n: Option<u32>,
    /// |A| for complex-product.
    #[arg(long)]
    pub a: Option<u32>,
    /// |B| for complex-product.
    #[arg(long)]
    pub b: Option<u32>,
    /// Leaf function g(z1).
    #[arg(long)]
    pub g: Option<String>,
    /// Number of leaves.
    #[arg(long)]
    pub count: Option<u32>,
    /// Sample points per leaf.
    #[arg(long)]
    pub samples: Option<u32>,
    /// Point count (random).
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub degree: Option<u32>,
    #[arg(long, value_enum)]
    pub field: Option<FieldArg>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct CountArgs {
    pub config: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the sparse incidence matrix as CSV.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct CertifyArgs {
    pub config: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub s: usize,
    /// Table size above which the result is indeterminate.
    #[arg(long, default_value_t = DOF_TABLE_CAP)]
    pub cap: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct PartitionArgs {
    /// Configuration whose points are partitioned and whose curves are
    /// tested for crossings.
    pub input: PathBuf,
    /// Target degree.
    #[arg(long)]
    pub r: u32,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    #[arg(long, default_value_t = 200)]
    pub restarts: usize,
    #[arg(long, default_value_t = 300)]
    pub max_iters: usize,
    /// Sampling grid for curves without exact crossing counts.
    #[arg(long, default_value_t = DEFAULT_CROSSING_GRID)]
    pub grid: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct FoliateArgs {
    /// Hypersurface in x1, y1, x2, y2: a polynomial JSON file, a
    /// configuration carrying one, or an expression.
    #[arg(long)]
    pub hypersurface: Option<String>,
    /// Complex configuration; its points are the tangency samples.
    #[arg(long)]
    pub curves: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
#[command(group(ArgGroup::new("sizes").args(["m", "n", "incidences"]).multiple(true).conflicts_with("config")))]
pub struct BoundArgs {
    #[arg(long, required_unless_present = "config")]
    pub m: Option<u64>,
    #[arg(long, required_unless_present = "config")]
    pub n: Option<u64>,
    /// Measured incidence count I.
    #[arg(long, visible_alias = "i", required_unless_present = "config")]
    pub incidences: Option<u64>,
    /// Take m, n and I from a configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub s: u32,
    #[arg(long, default_value_t = 0.05)]
    pub eps: f64,
    /// Constant C of the complex bound.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct FitArgs {
    /// Series files (CSV `m,n,I` or JSON list), count reports or
    /// configurations.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write `(log m, log n, log I)` plot data as CSV.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
    /// Write the replay report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
