//! `affgeom`: affine arc length, curvature comparison and lattice point
//! bounds from the command line.

mod commands;
mod figures;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::{CliError, Format, Outcome, Sink};

#[derive(Debug, Parser)]
#[command(name = "affgeom", version, about = "Affine geometry of convex curves and lattice point bounds")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Relative tolerance of the ODE solver (absolute tolerance is 1e-2 of it).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output format; `figures` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Affine arc length of a curve spec.
    Arclength(CurveArgs),
    /// Affine curvature along a curve spec.
    Curvature(CurveArgs),
    /// Area swept from the start of a curve spec, by quadrature and by ODE.
    Area(AreaArgs),
    /// Lagrange kernel of y^(n) + k y^(l) against its closed form.
    Kernel(KernelArgs),
    /// Check a comparison statement by a seeded sweep or on a curve spec.
    Verify(VerifyArgs),
    /// Lattice point count bound from numeric inputs.
    Bounds(BoundsArgs),
    /// Enumerate lattice points on a curve and certify a count bound.
    Count(CountArgs),
    /// Point data for the figures (fig1, fig5, fig6, fig7, fig8).
    Figures(FigureArgs),
    /// Build and check the instances on which the count bounds are attained.
    Examples(ExampleArgs),
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Curve spec file (TOML).
    pub curve: PathBuf,
    /// Number of samples in CSV output.
    #[arg(long, default_value_t = 101)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct AreaArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    /// Apex `x,y` of the swept area; defaults to the start point.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub apex: Option<(f64, f64)>,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    /// Order of the operator.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Derivative carrying the coefficient.
    #[arg(long, default_value_t = 1)]
    pub l: usize,
    /// Constant coefficient.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub k: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub from: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 2.0)]
    pub to: f64,
    /// Kernel base point `r`; defaults to `--from`.
    #[arg(long, allow_negative_numbers = true)]
    pub r: Option<f64>,
    #[arg(long, default_value_t = 41)]
    pub samples: usize,
}

/// Statements checked by `verify`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statement {
    OdeComparison,
    AreaComparison,
    AreaSandwich,
    CoordinateBounds,
    TriangleArc,
    TriangleRect,
}

impl Statement {
    pub fn id(self) -> &'static str {
        match self {
            Statement::OdeComparison => "thm3.4",
            Statement::AreaComparison => "thm4.1",
            Statement::AreaSandwich => "cor4.2",
            Statement::CoordinateBounds => "thm5.6",
            Statement::TriangleArc => "prop4.3",
            Statement::TriangleRect => "thm5.8",
        }
    }
}

fn parse_statement(s: &str) -> Result<Statement, String> {
    Ok(match s {
        "thm3.4" | "ode-comparison" => Statement::OdeComparison,
        "thm4.1" | "area-comparison" => Statement::AreaComparison,
        "cor4.2" | "area-sandwich" => Statement::AreaSandwich,
        "thm5.6" | "coordinate-bounds" => Statement::CoordinateBounds,
        "prop4.3" | "triangle-arc" => Statement::TriangleArc,
        "thm5.8" | "triangle-rect" => Statement::TriangleRect,
        _ => return Err(format!("unknown statement {s:?}; expected thm3.4, thm4.1, cor4.2, thm5.6, prop4.3 or thm5.8")),
    })
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_parser = parse_statement)]
    pub statement: Statement,
    /// Lower curvature bound (default -1, or the sampled minimum on a curve).
    #[arg(long, allow_negative_numbers = true)]
    pub k0: Option<f64>,
    /// Upper curvature bound (default 0, or the sampled maximum on a curve).
    #[arg(long, allow_negative_numbers = true)]
    pub k1: Option<f64>,
    /// Arc length `L` (default 1, or taken from the curve).
    #[arg(long = "L", alias = "length")]
    pub length: Option<f64>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Operator order for thm3.4.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Coefficient derivative for thm3.4.
    #[arg(long, default_value_t = 0)]
    pub l: usize,
    /// Triangles per random arc for prop4.3 and thm5.8.
    #[arg(long, default_value_t = 10)]
    pub per_curve: usize,
    /// Check this curve instead of random ones.
    #[arg(long)]
    pub curve: Option<PathBuf>,
    /// Constant comparison curvature for thm4.1 on a curve (default k0).
    #[arg(long, allow_negative_numbers = true)]
    pub kbar: Option<f64>,
    /// Base parameter for thm5.6 on a curve (default the domain midpoint).
    #[arg(long, allow_negative_numbers = true)]
    pub s0: Option<f64>,
}

fn parse_theorem(s: &str) -> Result<affine_geom::lattice::CountTheorem, String> {
    use affine_geom::lattice::CountTheorem::*;
    Ok(match s {
        "thm6.6" | "2pts1" => TwoPoints,
        "thm6.7" | "low_aff_bd" => LowerCurvature,
        "thm6.9" | "2pts2" => ThreePoints,
        "thm6.13" | "sharp_lat" => Sharp,
        "thm6.14" | "rigid_lat" => Rigid,
        _ => {
            return Err(format!(
                "unknown bound {s:?}; expected thm6.6, thm6.7, thm6.9, thm6.13 or thm6.14"
            ))
        }
    })
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(value_parser = parse_theorem)]
    pub theorem: affine_geom::lattice::CountTheorem,
    #[arg(long, allow_negative_numbers = true)]
    pub k0: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub k1: Option<f64>,
    /// Affine length of the arc.
    #[arg(long, alias = "length")]
    pub lambda: f64,
    /// Triangle multiplier.
    #[arg(long, default_value_t = 1)]
    pub multiplier: u64,
    /// Fundamental area of the lattice.
    #[arg(long, default_value_t = 1.0)]
    pub cell_area: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TheoremChoice {
    /// The rigid bound when its ratio is an integer, otherwise the sharp one.
    Auto,
    #[value(name = "thm6.6", alias = "2pts1")]
    TwoPoints,
    #[value(name = "thm6.7", alias = "low_aff_bd")]
    LowerCurvature,
    #[value(name = "thm6.9", alias = "2pts2")]
    ThreePoints,
    #[value(name = "thm6.13", alias = "sharp_lat")]
    Sharp,
    #[value(name = "thm6.14", alias = "rigid_lat")]
    Rigid,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    /// Curve spec file.
    #[arg(long)]
    pub curve: PathBuf,
    /// Lattice spec file (default: the integer lattice).
    #[arg(long)]
    pub lattice: Option<PathBuf>,
    /// Clip to `xmin,xmax,ymin,ymax`; `inf` and `-inf` are allowed.
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    pub window: Option<affine_geom::lattice::Window>,
    #[arg(long, value_enum, default_value_t = TheoremChoice::Auto)]
    pub theorem: TheoremChoice,
    /// Triangle multiplier; computed from the enumerated points when absent.
    #[arg(long)]
    pub multiplier: Option<u64>,
    #[arg(long, allow_negative_numbers = true)]
    pub k0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub k1: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig1,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(value_enum)]
    pub figure: Figure,
    /// Samples per curve.
    #[arg(long, default_value_t = 201)]
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExampleName {
    All,
    Parabola,
    Hyperbola,
    HyperbolaGeneral,
    Circle,
}

#[derive(Debug, Args)]
pub struct ExampleArgs {
    #[arg(value_enum, default_value_t = ExampleName::All)]
    pub name: ExampleName,
    #[arg(long, default_value_t = 1)]
    pub m0: u64,
    /// Lattice for the parabola and transferred hyperbola.
    #[arg(long)]
    pub lattice: Option<PathBuf>,
    /// Curvature of the circle.
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    /// Write curve and lattice specs of each instance into this directory.
    #[arg(long)]
    pub export: Option<PathBuf>,
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [x, y] => Ok((x, y)),
        _ => Err(format!("expected x,y, got {s:?}")),
    }
}

fn parse_window(s: &str) -> Result<affine_geom::lattice::Window, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [x_min, x_max, y_min, y_max] => Ok(affine_geom::lattice::Window {
            x_min,
            x_max,
            y_min,
            y_max,
        }),
        _ => Err(format!("expected xmin,xmax,ymin,ymax, got {s:?}")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let default_format = match cli.command {
        Command::Figures(_) => Format::Csv,
        _ => Format::Json,
    };
    let sink = Sink {
        format: g.format.unwrap_or(default_format),
        out: g.out.clone(),
    };
    let result = match &cli.command {
        Command::Arclength(a) => commands::arclength(g, a, &sink),
        Command::Curvature(a) => commands::curvature(g, a, &sink),
        Command::Area(a) => commands::area(g, a, &sink),
        Command::Kernel(a) => commands::kernel(g, a, &sink),
        Command::Verify(a) => commands::verify(g, a, &sink),
        Command::Bounds(a) => commands::bounds(g, a, &sink),
        Command::Count(a) => commands::count(g, a, &sink),
        Command::Figures(a) => figures::figures(g, a, &sink),
        Command::Examples(a) => commands::examples(g, a, &sink),
    };
    match result {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

/// Result of a command: how it ended, or why it could not run.
pub type CmdResult = Result<Outcome, CliError>;
