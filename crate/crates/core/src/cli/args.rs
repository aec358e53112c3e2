use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::polyfam::FamilyParams;

#[derive(Debug, Parser)]
#[command(name = "einstein-lab", version, about = "Explicit toric Poincare-Einstein metrics: verify, classify, sweep")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Einstein residual and closed-form curvature checks at sampled points.
    Verify(VerifyArgs),
    /// Curvature invariants at one point.
    Curvature(PointArgs),
    /// Root structure of the quartic pair.
    Roots(FamilyOnly),
    /// Admissible (mu, nu) region of the C-metric family.
    Region(RegionArgs),
    /// Root structure, bulk ends and boundary ends.
    Classify(ClassifyArgs),
    /// One-parameter sweeps: neck formation and degeneration paths.
    Sweep(SweepArgs),
    /// Conformal boundary metric and its ends.
    Boundary(BoundaryArgs),
    /// L2 norm of the Weyl tensor.
    #[command(name = "weyl-l2")]
    WeylL2(WeylArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Pd,
    Cmetric,
    Carter,
    CarterRoots,
    Naked,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: Option<FamilyName>,
    /// Full parameter set as JSON, e.g. {"family":"cmetric","params":{"mu":16,"nu":8}}.
    #[arg(long)]
    pub params_json: Option<String>,
    #[arg(long)]
    pub a: Option<u8>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<f64>,
    /// `e` of the rotating family or the electric charge of the Carter family.
    #[arg(long, allow_hyphen_values = true)]
    pub e: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<f64>,
    #[arg(long = "n", id = "n_charge", allow_hyphen_values = true)]
    pub n: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub p3: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub p4: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub eps: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha3: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha4: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the result to this file instead of standard output.
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct PeriodArgs {
    /// Choose the periods that make both axes of the rectangle smooth.
    #[arg(long)]
    pub auto_periods: bool,
    #[arg(long, allow_hyphen_values = true)]
    pub period_phi: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub period_psi: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FamilyOnly {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(short = 'n', long = "samples", default_value_t = 50)]
    pub samples: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = -3.0, allow_hyphen_values = true)]
    pub lambda: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Point `x,y`.
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    #[arg(long, default_value_t = -3.0, allow_hyphen_values = true)]
    pub lambda: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    #[arg(long, default_value = "0,17", allow_hyphen_values = true)]
    pub mu_range: String,
    #[arg(long, default_value = "-1,13", allow_hyphen_values = true)]
    pub nu_range: String,
    /// Grid points per axis.
    #[arg(short = 'n', long = "steps", default_value_t = 100)]
    pub steps: usize,
    /// Classify the single point `mu,nu` instead of a grid.
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub periods: PeriodArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PathName {
    NeckCmetric,
    NeckCarter,
    NeckNaked,
    SmoothToNaked,
    ConeToNaked,
    ConeToNakedAtInfinity,
    CuspToNaked,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub path: PathName,
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Comma-separated path values.
    #[arg(long, allow_hyphen_values = true)]
    pub values: Option<String>,
    /// Number of log-spaced values between `--from` and `--to`.
    #[arg(short = 'n', long = "samples")]
    pub samples: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub from: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub to: Option<f64>,
    /// Add the L2 Weyl norm over the triangle below the right end.
    #[arg(long)]
    pub weyl_l2: bool,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[command(flatten)]
    pub periods: PeriodArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BoundaryArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Evaluate the boundary metric at this coordinate.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    /// Classify this endpoint only.
    #[arg(long, allow_hyphen_values = true)]
    pub endpoint: Option<f64>,
    /// Fixed period of the collapsing circle; defaults to the regular one.
    #[arg(long, allow_hyphen_values = true)]
    pub circle_period: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct WeylArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Triangle `x1,y2`; defaults to the boundary interval.
    #[arg(long, allow_hyphen_values = true)]
    pub triangle: Option<String>,
    /// Rectangle `x0,x1,y0,y1`.
    #[arg(long, allow_hyphen_values = true)]
    pub rect: Option<String>,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_cells: usize,
    #[command(flatten)]
    pub periods: PeriodArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn parse_list(s: &str, len: Option<usize>) -> Result<Vec<f64>> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::InvalidParams(format!("cannot parse '{s}': {e}")))?;
    match len {
        Some(n) if v.len() != n => Err(Error::InvalidParams(format!("expected {n} comma-separated numbers, got '{s}'"))),
        _ => Ok(v),
    }
}

fn need(v: Option<f64>, name: &str, family: &str) -> Result<f64> {
    v.ok_or_else(|| Error::InvalidParams(format!("--{name} is required for --family {family}")))
}

impl FamilyArgs {
    pub fn resolve(&self) -> Result<FamilyParams> {
        let params = match (&self.params_json, self.family) {
            (Some(_), Some(_)) => {
                return Err(Error::InvalidParams("give either --family or --params-json, not both".into()))
            }
            (Some(j), None) => {
                serde_json::from_str(j).map_err(|e| Error::InvalidParams(format!("--params-json: {e}")))?
            }
            (None, Some(f)) => self.from_flags(f)?,
            (None, None) => return Err(Error::InvalidParams("--family or --params-json is required".into())),
        };
        params.validate()?;
        Ok(params)
    }

    fn from_flags(&self, f: FamilyName) -> Result<FamilyParams> {
        Ok(match f {
            FamilyName::Pd => {
                let g = |v, n| need(v, n, "pd");
                FamilyParams::pd(
                    self.a.ok_or_else(|| Error::InvalidParams("--a is required for --family pd".into()))?,
                    g(self.b, "b")?,
                    g(self.c, "c")?,
                    g(self.d, "d")?,
                    g(self.e, "e")?,
                )
            }
            FamilyName::Cmetric => FamilyParams::cmetric(need(self.mu, "mu", "cmetric")?, need(self.nu, "nu", "cmetric")?),
            FamilyName::Carter => {
                let g = |v, n| need(v, n, "carter");
                FamilyParams::carter(g(self.e, "e")?, g(self.m, "m")?, g(self.n, "n")?, g(self.alpha, "alpha")?)
            }
            FamilyName::CarterRoots => {
                let g = |v, n| need(v, n, "carter-roots");
                FamilyParams::carter_roots(g(self.p3, "p3")?, g(self.p4, "p4")?, g(self.eps, "eps")?)
            }
            FamilyName::Naked => {
                let g = |v, n| need(v, n, "naked");
                FamilyParams::naked(g(self.alpha1, "alpha1")?, g(self.alpha2, "alpha2")?, g(self.alpha3, "alpha3")?, g(self.alpha4, "alpha4")?)
            }
        })
    }
}
