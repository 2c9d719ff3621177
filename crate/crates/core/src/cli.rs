//! Command-line front end.
//!
//! Exit codes: `0` success, `1` domain failure (zero mass, no one-point
//! witness, reduction failure), `2` I/O, parse or usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::basis::{basis_dimension, moments, AxisScaling, FunctionBasis};
use crate::cubature::{compress_with_origin, verify_exactness, CubatureRule, Origin};
use crate::error::Error;
use crate::expr::{Expr, ExprError};
use crate::io::{self, FormatError};
use crate::measure::DiscreteMeasure;
use crate::mvt::{one_point_mvt_1d, two_point_mvt, OnePointOptions};
use crate::recombine::DEFAULT_TOL;
use crate::sampler::{discretize, SamplerSpec};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Domain(#[from] Error),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("--{flag}: {message}")]
    Flag { flag: &'static str, message: String },
    #[error("--{flag}: {source}")]
    Expr {
        flag: &'static str,
        source: ExprError,
    },
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(Error::InvalidSampler(_)) => 2,
            CliError::Domain(_) => 1,
            _ => 2,
        }
    }

    fn flag(flag: &'static str, message: impl Into<String>) -> Self {
        CliError::Flag {
            flag,
            message: message.into(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "richter", version, about = "Moment-preserving atomic measures, mean-value certificates and cubature compression")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compress a point cloud into a cubature rule exact to a given degree.
    Compress {
        #[command(flatten)]
        source: SourceArgs,
        /// Total polynomial degree.
        #[arg(long, default_value_t = 2)]
        degree: usize,
        /// Relative moment residual allowed.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Write JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two-point mean-value certificate of --function against a cloud.
    Mvt {
        #[command(flatten)]
        source: SourceArgs,
        /// Expression in x1..xd.
        #[arg(long)]
        function: String,
        /// Relative moment residual allowed.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Write JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One-point mean value of a continuous 1-D --function on --box lo,hi.
    Mvt1d {
        /// Interval `lo,hi`.
        #[arg(long = "box", value_name = "LO,HI")]
        bounds: String,
        /// Midpoint cells used for the mean and the sign scan.
        #[arg(long, default_value = "1000")]
        grid: String,
        /// Expression in x1..xd.
        #[arg(long)]
        function: String,
        /// Density, an expression in x.
        #[arg(long, default_value = "1")]
        density: String,
        /// Bisection width; defaults to 1e-10 times the interval length.
        #[arg(long)]
        tol_x: Option<f64>,
        /// Write JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scaled monomial moments of a cloud up to --degree.
    Moments {
        #[command(flatten)]
        source: SourceArgs,
        /// Total polynomial degree.
        #[arg(long, default_value_t = 2)]
        degree: usize,
        /// Write JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a rule against a reference cloud on random polynomials.
    Verify {
        /// Cubature rule JSON written by `compress`.
        #[arg(long)]
        rule: PathBuf,
        #[command(flatten)]
        source: SourceArgs,
        /// Defaults to the rule's own degree.
        #[arg(long)]
        degree: Option<usize>,
        /// Number of random test polynomials.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Seed for the random test polynomials.
        #[arg(long, default_value_t = 0)]
        poly_seed: u64,
        /// Write JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce the step-function example: two-point certificate exists, one-point does not.
    DemoPaperExample {
        /// Write JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Exactly one of `--input` or a sampler (`--grid`/`--mc` with `--box`).
#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// CSV or JSON point cloud.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Cells per axis, e.g. `32x32`; a single number applies to every axis.
    #[arg(long)]
    pub grid: Option<String>,
    /// Monte-carlo sample count.
    #[arg(long)]
    pub mc: Option<usize>,
    /// Monte-carlo seed [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Box `lo,hi[,lo,hi...]`.
    #[arg(long = "box", value_name = "LO,HI,...")]
    pub bounds: Option<String>,
    /// Density for sampled sources, an expression in x1..xd.
    #[arg(long, default_value = "1")]
    pub density: String,
}

struct Loaded {
    cloud: DiscreteMeasure,
    origin: Origin,
}

fn parse_box(text: &str) -> Result<Vec<(f64, f64)>, CliError> {
    let values = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::flag("box", format!("`{s}` is not a number")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() || values.len() % 2 != 0 {
        return Err(CliError::flag("box", "expected lo,hi pairs"));
    }
    Ok(values.chunks(2).map(|c| (c[0], c[1])).collect())
}

fn parse_grid(text: &str, dim: usize) -> Result<Vec<usize>, CliError> {
    let cells = text
        .split('x')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| CliError::flag("grid", format!("`{s}` is not a cell count")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    match cells.as_slice() {
        [n] => Ok(vec![*n; dim]),
        _ if cells.len() == dim => Ok(cells),
        _ => Err(CliError::flag(
            "grid",
            format!("{} axes given for a {dim}-dimensional box", cells.len()),
        )),
    }
}

fn parse_expr(flag: &'static str, text: &str, dim: usize) -> Result<Expr, CliError> {
    Expr::parse(text, dim).map_err(|source| CliError::Expr { flag, source })
}

fn load_source(args: &SourceArgs) -> Result<Loaded, CliError> {
    let sampled = args.grid.is_some() || args.mc.is_some();
    match (&args.input, sampled) {
        (Some(_), true) => {
            return Err(CliError::flag("input", "give either --input or a sampler, not both"))
        }
        (None, false) => {
            return Err(CliError::flag("input", "an input file or --grid/--mc sampler is required"))
        }
        _ => {}
    }
    if let Some(path) = &args.input {
        if args.bounds.is_some() || args.seed.is_some() {
            return Err(CliError::flag("input", "--box/--seed only apply to sampled sources"));
        }
        let cloud = io::parse_cloud(path)?;
        return Ok(Loaded {
            cloud,
            origin: Origin::File {
                path: path.display().to_string(),
            },
        });
    }
    let domain = parse_box(
        args.bounds
            .as_deref()
            .ok_or_else(|| CliError::flag("box", "required with --grid or --mc"))?,
    )?;
    let sampler = match (&args.grid, args.mc) {
        (Some(_), Some(_)) => return Err(CliError::flag("grid", "give either --grid or --mc, not both")),
        (Some(g), None) => {
            if args.seed.is_some() {
                return Err(CliError::flag("seed", "only applies to --mc"));
            }
            SamplerSpec::grid(parse_grid(g, domain.len())?, domain)?
        }
        (None, Some(n)) => SamplerSpec::monte_carlo(n, args.seed.unwrap_or(0), domain)?,
        (None, None) => unreachable!(),
    };
    let density = parse_expr("density", &args.density, sampler.dimension())?;
    let cloud = discretize(|x| density.eval(x), &sampler)?;
    Ok(Loaded {
        cloud,
        origin: Origin::Sampler { sampler },
    })
}

fn emit<T: Serialize>(
    value: &T,
    summary: &str,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let json = io::to_json(value);
    stdout.write_all(summary.as_bytes())?;
    match out {
        Some(path) => {
            io::write_text(path, &(json + "\n"))?;
            writeln!(stdout, "wrote {}", path.display())?;
        }
        None => writeln!(stdout, "{json}")?,
    }
    Ok(())
}

#[derive(Serialize)]
struct MomentsOutput {
    dimension: usize,
    degree: usize,
    scaling: Vec<AxisScaling>,
    labels: Vec<String>,
    values: Vec<f64>,
}

const DEMO_GRID: usize = 1000;
const DEMO_FUNCTION: &str = "step(1/2, 1, 2)";

/// Dispatches one command, writing the summary (and JSON when no `--out`) to `stdout`.
pub fn run(config: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &config.command {
        Command::Compress {
            source,
            degree,
            tol,
            out,
        } => {
            check_tol(*tol)?;
            let Loaded { cloud, origin } = load_source(source)?;
            let rule = compress_with_origin(&cloud, *degree, *tol, origin)?;
            let bound = basis_dimension(*degree, cloud.dimension())?;
            let summary = format!(
                "compressed {} atoms to {} nodes (bound C({}+{}, {}) = {}), moment residual {:e}\n",
                cloud.len(),
                rule.nodes.len(),
                degree,
                cloud.dimension(),
                cloud.dimension(),
                bound,
                rule.moment_residual
            );
            emit(&rule, &summary, out.as_deref(), stdout)
        }
        Command::Mvt {
            source,
            function,
            tol,
            out,
        } => {
            check_tol(*tol)?;
            let Loaded { cloud, .. } = load_source(source)?;
            let f = parse_expr("function", function, cloud.dimension())?;
            let g = f.clone();
            let cert = two_point_mvt(&cloud, move |x| g.eval(x), *tol)?;
            let summary = format!(
                "mean = {}\nlambda = {}\nf(x0) = {} at {:?}\nf(x1) = {} at {:?}\nresidual = {:e}{}\n",
                cert.mean,
                cert.lambda,
                f.eval(cert.x0.coords()),
                cert.x0.coords(),
                f.eval(cert.x1.coords()),
                cert.x1.coords(),
                cert.residual,
                if cert.degenerate { " (degenerate: one atom)" } else { "" }
            );
            emit(&cert, &summary, out.as_deref(), stdout)
        }
        Command::Mvt1d {
            bounds,
            grid,
            function,
            density,
            tol_x,
            out,
        } => {
            let domain = parse_box(bounds)?;
            let [(lo, hi)] = domain.as_slice() else {
                return Err(CliError::flag("box", "mvt1d needs exactly one lo,hi pair"));
            };
            let cells = parse_grid(grid, 1)?[0];
            let f = parse_expr("function", function, 1)?;
            let density = parse_expr("density", density, 1)?;
            let options = OnePointOptions {
                grid: cells,
                tol_x: *tol_x,
            };
            let w = one_point_mvt_1d(|x| f.eval(&[x]), (*lo, *hi), |x| density.eval(x), &options)?;
            let summary = format!(
                "mean = {}\nx* = {}\nf(x*) = {}\nresidual = {:e}\n",
                w.mean,
                w.x.coords()[0],
                w.value,
                w.residual
            );
            emit(&w, &summary, out.as_deref(), stdout)
        }
        Command::Moments {
            source,
            degree,
            out,
        } => {
            let Loaded { cloud, .. } = load_source(source)?;
            let basis = FunctionBasis::scaled_monomials(*degree, &cloud.bounding_box())?;
            let mv = moments(&cloud, &basis)?;
            let output = MomentsOutput {
                dimension: cloud.dimension(),
                degree: *degree,
                scaling: basis.scaling().unwrap_or_default().to_vec(),
                labels: mv.labels,
                values: mv.values,
            };
            let summary = format!(
                "{} moments of {} atoms (mass {})\n",
                output.values.len(),
                cloud.len(),
                cloud.total_mass()
            );
            emit(&output, &summary, out.as_deref(), stdout)
        }
        Command::Verify {
            rule,
            source,
            degree,
            trials,
            poly_seed,
            out,
        } => {
            let rule: CubatureRule = io::read_json(rule)?;
            let Loaded { cloud, .. } = load_source(source)?;
            let degree = degree.unwrap_or(rule.degree);
            let report = verify_exactness(&rule, &cloud, degree, *trials, *poly_seed)?;
            let summary = format!(
                "degree {degree}: basis max rel err {:e}, sampled max rel err {:e} over {} trials\n",
                report.basis_max_rel_err, report.sampled_max_rel_err, report.trials
            );
            emit(&report, &summary, out.as_deref(), stdout)
        }
        Command::DemoPaperExample { out } => demo(out.as_deref(), stdout),
    }
}

fn check_tol(tol: f64) -> Result<(), CliError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(CliError::flag("tol", format!("must be positive, got {tol}")))
    }
}

fn demo(out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    let f = parse_expr("function", DEMO_FUNCTION, 1)?;
    let lebesgue = discretize(|_| 1.0, &SamplerSpec::grid_1d(DEMO_GRID, 0.0, 1.0)?)?;
    let g = f.clone();
    let cert = two_point_mvt(&lebesgue, move |x| g.eval(x), DEFAULT_TOL)?;
    let one_point = one_point_mvt_1d(
        |x| f.eval(&[x]),
        (0.0, 1.0),
        |_| 1.0,
        &OnePointOptions {
            grid: DEMO_GRID,
            tol_x: None,
        },
    );
    let mut summary = String::new();
    summary.push_str(&format!(
        "Lebesgue measure on [0,1], {DEMO_GRID} midpoint cells; f = {DEMO_FUNCTION} (1 on [0,1/2], 2 on (1/2,1])\n"
    ));
    summary.push_str(&format!("mean = {:.12} (3/2)\n", cert.mean));
    summary.push_str(&format!("lambda = {:.12} (1/2)\n", cert.lambda));
    summary.push_str(&format!(
        "f(x0) = {} at x0 = {}\nf(x1) = {} at x1 = {}\n",
        f.eval(cert.x0.coords()),
        cert.x0.coords()[0],
        f.eval(cert.x1.coords()),
        cert.x1.coords()[0]
    ));
    summary.push_str(&format!("residual = {:e}\n", cert.residual));
    match one_point {
        Err(Error::NoWitness { .. }) => summary.push_str(
            "one-point witness: none, 3/2 is not a value of f (f([0,1]) = {1, 2})\n",
        ),
        Ok(w) => summary.push_str(&format!("one-point witness: x* = {}\n", w.x.coords()[0])),
        Err(e) => return Err(e.into()),
    }
    emit(&cert, &summary, out, stdout)
}

/// Parses `args` (program name first), runs, reports errors on stderr and returns the exit code.
pub fn main_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(&config, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            let _ = lock.flush();
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (Result<(), CliError>, String) {
        let config = RunConfig::try_parse_from(std::iter::once("richter").chain(args.iter().copied()))
            .expect("args parse");
        let mut out = Vec::new();
        let r = run(&config, &mut out);
        (r, String::from_utf8(out).unwrap())
    }

    #[test]
    fn grid_and_box_parsing() {
        assert_eq!(parse_grid("32x32", 2).unwrap(), vec![32, 32]);
        assert_eq!(parse_grid("8", 3).unwrap(), vec![8, 8, 8]);
        assert!(parse_grid("2x3", 3).is_err());
        assert!(parse_grid("ax2", 2).is_err());
        assert_eq!(parse_box("0,1,-1,2").unwrap(), vec![(0.0, 1.0), (-1.0, 2.0)]);
        assert!(parse_box("0,1,2").is_err());
    }

    #[test]
    fn source_must_be_exclusive() {
        let (r, _) = run_args(&["compress", "--degree", "1"]);
        assert_eq!(r.unwrap_err().exit_code(), 2);
        let (r, _) = run_args(&["compress", "--input", "x.csv", "--grid", "4", "--box", "0,1"]);
        assert_eq!(r.unwrap_err().exit_code(), 2);
        let (r, _) = run_args(&["compress", "--grid", "4", "--mc", "10", "--box", "0,1"]);
        assert_eq!(r.unwrap_err().exit_code(), 2);
        let (r, _) = run_args(&["compress", "--grid", "4"]);
        assert!(matches!(r, Err(CliError::Flag { flag: "box", .. })));
        let (r, _) = run_args(&["compress", "--grid", "4", "--box", "1,0"]);
        assert_eq!(r.unwrap_err().exit_code(), 2);
    }

    #[test]
    fn zero_mass_is_domain_error() {
        let (r, _) = run_args(&["mvt", "--grid", "4", "--box", "0,1", "--density", "0", "--function", "x"]);
        let e = r.unwrap_err();
        assert!(matches!(e, CliError::Domain(Error::ZeroMass)));
        assert_eq!(e.exit_code(), 1);
    }

    #[test]
    fn bad_expression_is_parse_error() {
        let (r, _) = run_args(&["mvt", "--grid", "4", "--box", "0,1", "--function", "x2"]);
        let e = r.unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().starts_with("--function"));
    }

    #[test]
    fn moments_command() {
        let (r, out) = run_args(&["moments", "--grid", "4", "--box", "0,1", "--degree", "1"]);
        r.unwrap();
        assert!(out.starts_with("2 moments of 4 atoms"));
        assert!(out.contains("\"labels\""));
    }
}
