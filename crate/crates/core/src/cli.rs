//! Command-line front end.
//!
//! Exit codes: `0` success, `1` a check failed or a computation broke down,
//! `2` malformed arguments or descriptors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::descriptor::{parse_homothety, parse_point, parse_solution, parse_vector};
use crate::error::Error;
use crate::export::{write_history_csv, write_orbit_csv, write_orbit_svg};
use crate::iteration::{estimate_limit, IterMap, PolyMap};
use crate::oned::{fit_c, read_pairs_csv};
use crate::orbits::{linear_grid, orbit_trace, repset_solve_phi1};
use crate::sampling::{Budget, SamplingBox};
use crate::solutions::{
    closed_form_conjugate, verify_group_law, verify_iterate_identity, verify_translation, CatalogEntry, Solution,
};
use crate::space::{chordal_distance, Point};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

fn positive_real(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got '{s}'")),
    }
}

#[derive(Debug, Parser)]
#[command(name = "flowlab", version, about = "Explore and verify solutions of (1-z)f(x) = f(f(xz)(1-z)/z)")]
pub struct Cli {
    /// Seed for all sampled checks.
    #[arg(long, env = "FLOWLAB_SEED", default_value_t = 0, global = true)]
    pub seed: u64,
    /// Pass threshold for residuals.
    #[arg(long, default_value = "1e-9", value_parser = positive_real, global = true)]
    pub tol: f64,
    /// Number of sampled draws.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    pub samples: u64,
    /// Dimension for descriptors that do not fix one.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    pub k: u64,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    /// `(1-z)f(x) = f(f(xz)(1-z)/z)`.
    Translation,
    /// `f^{z1} ∘ f^{z2} = f^{z1+z2}`.
    Group,
    /// `(1/n) f(nx)` against the n-fold iterate.
    Iterate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MapName {
    Log1p,
    Quad2d,
    Poly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the built-in solutions.
    Catalog,
    /// Evaluate a solution at a point.
    Eval {
        /// Solution descriptor, e.g. `catalog pvz5`.
        #[arg(required = true, num_args = 1..)]
        solution: Vec<String>,
        /// Comma-separated coordinates or `inf`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Sampled residual check of a solution.
    Verify {
        #[arg(required = true, num_args = 1..)]
        solution: Vec<String>,
        #[arg(long, value_enum, default_value = "translation")]
        check: Check,
        /// Iterate count for `--check iterate`.
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Scaled iteration `n g^n(x/n)` on a doubling schedule.
    Iterate {
        #[arg(value_enum)]
        map: MapName,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// Components for `poly`, e.g. `x1 - 0.5*x1^2; x2`.
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
        #[arg(long, default_value_t = 1024)]
        n0: usize,
        #[arg(long, default_value_t = 8)]
        levels: usize,
    },
    /// Sample the orbit of a point.
    Orbit {
        #[arg(required = true, num_args = 1..)]
        solution: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
        z_min: f64,
        #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
        z_max: f64,
        #[arg(long, default_value_t = 400)]
        steps: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Compare a conjugate `l^-1 o f o l` with its closed form.
    Conjugate {
        #[arg(required = true, num_args = 1..)]
        solution: Vec<String>,
        /// Homothety descriptor, e.g. `circle` or `linear 2,0,0,3`.
        #[arg(long, allow_hyphen_values = true)]
        ell: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Representative and orbit parameter of `y` for the canonical solution.
    Repset {
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Fit `C` in `f(x) = x/(Cx+1)` from a `u,fu` CSV file.
    Fitc { csv: PathBuf },
}

enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Numeric(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Numeric(e.to_string())
    }
}

fn usage(e: Error) -> Failure {
    Failure::Usage(e.to_string())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Numeric(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_FAILURE
        }
    }
}

fn solution(words: &[String], k: usize) -> Result<Solution<f64>, Failure> {
    parse_solution(&words.join(" "), k).map_err(usage)
}

fn emit(cli: &Cli, out: &mut dyn Write, body: &[u8]) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => File::create(path)?.write_all(body)?,
        None => out.write_all(body)?,
    }
    Ok(())
}

fn fmt_scalar(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else {
        v.to_string()
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let k = cli.k as usize;
    let samples = cli.samples as usize;
    match &cli.command {
        Command::Catalog => {
            cmd_catalog(out)?;
            Ok(EXIT_OK)
        }
        Command::Eval { solution: words, point } => {
            let s = solution(words, k)?;
            let p: Point<f64> = parse_point(point).map_err(usage)?;
            p.check_dim(s.dim().unwrap_or(k)).map_err(usage)?;
            writeln!(out, "{}", s.eval(&p)?)?;
            Ok(EXIT_OK)
        }
        Command::Verify { solution: words, check, n } => {
            let s = solution(words, k)?;
            let bx = SamplingBox::default();
            let budget = Budget::Requested(samples);
            let report = match check {
                Check::Translation => verify_translation(&s, budget, cli.seed, &bx, cli.tol)?,
                Check::Group => verify_group_law(&s, budget, cli.seed, &bx)?.with_tol(cli.tol),
                Check::Iterate => verify_iterate_identity(&s, *n, budget, cli.seed, &bx)?.with_tol(cli.tol),
            };
            writeln!(out, "solution={s}")?;
            writeln!(out, "check={}", check.to_possible_value().unwrap().get_name())?;
            writeln!(out, "seed={}", cli.seed)?;
            write!(out, "{report}")?;
            Ok(if report.passed() { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Iterate { map, x, poly, n0, levels } => {
            let g = match (map, poly) {
                (MapName::Log1p, None) => IterMap::Log1p,
                (MapName::Quad2d, None) => IterMap::Quad2D,
                (MapName::Poly, Some(text)) => {
                    let dim = parse_vector::<f64>(x).map_err(usage)?.len();
                    IterMap::Poly(PolyMap::parse(dim, text).map_err(usage)?)
                }
                (MapName::Poly, None) => return Err(Failure::Usage("poly needs --poly".into())),
                (_, Some(_)) => return Err(Failure::Usage("--poly only applies to the poly map".into())),
            };
            let xv: Vec<f64> = parse_vector(x).map_err(usage)?;
            if xv.len() != g.dim() {
                return Err(usage(Error::DimensionMismatch { expected: g.dim(), found: xv.len() }));
            }
            if *n0 == 0 || *levels < 2 {
                return Err(Failure::Usage("need --n0 >= 1 and --levels >= 2".into()));
            }
            let est = estimate_limit(&g, &xv, *n0, *levels, cli.tol)?;
            let mut text = Vec::new();
            writeln!(text, "map={g}")?;
            writeln!(text, "value={}", est.value)?;
            writeln!(text, "converged={}", est.converged)?;
            writeln!(text, "rate_estimate={}", est.rate_estimate)?;
            out.write_all(&text)?;
            if let Some(path) = &cli.out {
                write_history_csv(&est, File::create(path)?)?;
            } else {
                write_history_csv(&est, &mut *out)?;
            }
            Ok(if est.converged { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Orbit { solution: words, x, z_min, z_max, steps, format } => {
            let s = solution(words, k)?;
            let p: Point<f64> = parse_point(x).map_err(usage)?;
            p.check_dim(s.dim().unwrap_or(k)).map_err(usage)?;
            if z_min.partial_cmp(z_max) != Some(std::cmp::Ordering::Less) || *steps == 0 {
                return Err(Failure::Usage("need --z-min < --z-max and --steps >= 1".into()));
            }
            let trace = orbit_trace(&s, &p, &linear_grid(*z_min, *z_max, *steps))?;
            let mut body = Vec::new();
            match format {
                Format::Csv => write_orbit_csv(&trace, &mut body)?,
                Format::Svg => {
                    if p.dim() != Some(2) {
                        return Err(Failure::Usage("svg output needs k = 2".into()));
                    }
                    write_orbit_svg(std::slice::from_ref(&trace), &mut body)?
                }
            }
            emit(cli, out, &body)?;
            Ok(EXIT_OK)
        }
        Command::Conjugate { solution: words, ell, point } => {
            let s = solution(words, k)?;
            let h = parse_homothety(ell).map_err(usage)?;
            let p: Point<f64> = parse_point(point).map_err(usage)?;
            let conj = Solution::conjugated(s.clone(), h.clone()).map_err(usage)?;
            p.check_dim(conj.dim().unwrap_or(k)).map_err(usage)?;
            let via = conj.eval(&p)?;
            writeln!(out, "conjugate={conj}")?;
            writeln!(out, "via_homothety={via}")?;
            match closed_form_conjugate(&s, &h) {
                Some(direct) => {
                    let d = direct.eval(&p)?;
                    let r = chordal_distance(&via, &d)?;
                    writeln!(out, "closed_form={direct}")?;
                    writeln!(out, "via_closed_form={d}")?;
                    writeln!(out, "residual={r:e}")?;
                    writeln!(out, "status={}", if r <= cli.tol { "pass" } else { "fail" })?;
                    Ok(if r <= cli.tol { EXIT_OK } else { EXIT_FAILURE })
                }
                None => {
                    writeln!(out, "closed_form=unknown")?;
                    Ok(EXIT_OK)
                }
            }
        }
        Command::Repset { y } => {
            let yv: Vec<f64> = parse_vector(y).map_err(usage)?;
            let r = repset_solve_phi1(&yv, yv.len())?;
            writeln!(out, "z={} x={}", fmt_scalar(r.z), r.representative())?;
            Ok(EXIT_OK)
        }
        Command::Fitc { csv } => {
            let file = File::open(csv).map_err(|e| Failure::Usage(format!("{}: {e}", csv.display())))?;
            let pairs: Vec<(f64, f64)> = read_pairs_csv(BufReader::new(file)).map_err(usage)?;
            let fit = fit_c(&pairs)?;
            writeln!(out, "C={}", fmt_scalar(fit.c))?;
            writeln!(out, "constancy_residual={:e}", fit.constancy_residual)?;
            writeln!(out, "valid={}", fit.is_valid())?;
            Ok(if fit.is_valid() { EXIT_OK } else { EXIT_FAILURE })
        }
    }
}

fn cmd_catalog(out: &mut dyn Write) -> io::Result<()> {
    let entries: Vec<Solution<f64>> = CatalogEntry::<f64>::NAMES
        .iter()
        .map(|n| Solution::catalog(CatalogEntry::by_name(n, 1.0, 1.0).expect("known name")))
        .collect();
    for s in &entries {
        let Solution::Catalog(e) = s else { unreachable!() };
        writeln!(out, "{}", e.name())?;
        writeln!(out, "  formula: {}", e.formula())?;
        writeln!(out, "  continuous: {}", if s.is_continuous() { "yes" } else { "no" })?;
        writeln!(out, "  singular: {}", e.singular_set())?;
        writeln!(out, "  note: {}", e.note())?;
    }
    let families: [(&str, &str, &str, &str); 4] = [
        ("canonical1", "x_j -> (|x|^2 + k x_j) / sum_i (x_i+1)^2", "yes", "{(-1,...,-1)}"),
        ("canonicalinf", "x_j -> d_j (sum_i x_i)^2 + x_j, sum d = 0", "yes", "none"),
        ("identity", "x -> x", "yes", "none"),
        ("zero", "x -> 0", "yes", "none"),
    ];
    for (name, formula, cont, sing) in families {
        writeln!(out, "{name}")?;
        writeln!(out, "  formula: {formula}")?;
        writeln!(out, "  continuous: {cont}")?;
        writeln!(out, "  singular: {sing}")?;
    }
    Ok(())
}
