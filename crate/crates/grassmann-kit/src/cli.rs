//! Command-line front end over the library: instance generation, one-shot
//! geometry queries on matrix files, the log-accuracy experiment, and the
//! built-in selftest suites.
//!
//! Query subcommands print a single JSON object with the result and the
//! run's metadata; failures print a machine-readable error object and map
//! to exit codes 1 (usage), 2 (numerical/domain) or 3 (I/O).

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::Error;
use crate::experiment::{self, ExperimentConfig, LogMethod};
use crate::grassmann::{self, GrassmannPoint, HorizontalTangent, TAU_CUT};
use crate::io;
use crate::matcore::Matrix;
use crate::selftest;
use crate::stiefel::{self, StiefelMatrix, EPS_ORTH};

#[derive(Parser)]
#[command(
    name = "grassmann-kit",
    version,
    about = "Geometry of p-dimensional subspaces: geodesics, logarithms, transport, curvature"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    #[value(name = "extended-log")]
    Extended,
    #[value(name = "standard-log")]
    Standard,
    #[value(name = "standard-log-projected")]
    StandardProjected,
    All,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Write Haar-uniform random subspace representatives to matrix files
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Output prefix; files are written as PREFIX_000.txt, ...
        #[arg(long)]
        out: PathBuf,
    },
    /// Geodesic endpoint Exp_P(t·Δ) from a point file and a tangent file
    Exp {
        point: PathBuf,
        tangent: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Also write the endpoint representative to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Riemannian logarithm between two subspace files
    Log {
        from: PathBuf,
        to: PathBuf,
        #[arg(long, value_enum, default_value = "extended-log")]
        method: MethodArg,
        /// Also write the tangent matrix to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Geodesic distance between two subspace files
    Dist { a: PathBuf, b: PathBuf },
    /// Principal angles between two subspace files
    Angles { a: PathBuf, b: PathBuf },
    /// Parallel transport of a tangent along a geodesic
    Transport {
        point: PathBuf,
        gamma: PathBuf,
        delta: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sectional curvature of the plane spanned by two tangents
    Curvature {
        point: PathBuf,
        d1: PathBuf,
        d2: PathBuf,
    },
    /// Log-accuracy sweep towards the cut locus over a τ grid
    Fig3 {
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        p: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        trials: u32,
        #[arg(long, default_value_t = 1e-16)]
        tau_min: f64,
        #[arg(long, default_value_t = 1.0)]
        tau_max: f64,
        #[arg(long, default_value_t = 60)]
        tau_steps: usize,
        #[arg(long, value_enum, default_value = "all")]
        method: MethodArg,
        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
    /// Run the built-in invariant suites
    Selftest {
        #[arg(long, value_enum, default_value = "quick")]
        level: LevelArg,
    },
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io { .. } | Error::Parse { .. } => 3,
        _ => 2,
    }
}

fn matrix_rows(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

#[derive(Serialize)]
struct Meta {
    n: usize,
    p: usize,
    method: &'static str,
    tolerances: Tolerances,
}

#[derive(Serialize)]
struct Tolerances {
    eps_orth: f64,
    tau_cut: f64,
}

impl Meta {
    fn new(n: usize, p: usize, method: &'static str) -> Self {
        Self {
            n,
            p,
            method,
            tolerances: Tolerances {
                eps_orth: EPS_ORTH,
                tau_cut: TAU_CUT,
            },
        }
    }
}

fn load_point(path: &PathBuf) -> Result<GrassmannPoint, Error> {
    let m = io::read_matrix(path)?;
    GrassmannPoint::new(StiefelMatrix::new(m)?)
}

fn load_tangent(base: &GrassmannPoint, path: &PathBuf) -> Result<HorizontalTangent, Error> {
    let m = io::read_matrix(path)?;
    HorizontalTangent::new(base.clone(), m)
}

fn execute(command: Command) -> Result<(), Error> {
    match command {
        Command::Gen {
            n,
            p,
            seed,
            count,
            out,
        } => {
            let mut files = Vec::new();
            for i in 0..count {
                let u = stiefel::random_stiefel_stream(n, p, seed, i as u64)?;
                let path = out.with_file_name(format!(
                    "{}_{:03}.txt",
                    out.file_name()
                        .and_then(|s| s.to_str())
                        .unwrap_or("subspace"),
                    i
                ));
                io::write_matrix(&path, u.as_matrix())?;
                files.push(path.display().to_string());
            }
            print_json(&json!({
                "meta": Meta::new(n, p, "haar-qr"),
                "result": { "files": files, "seed": seed },
            }));
        }
        Command::Exp {
            point,
            tangent,
            t,
            out,
        } => {
            let p = load_point(&point)?;
            let delta = load_tangent(&p, &tangent)?;
            let end = grassmann::exp(&delta, t)?;
            if let Some(out) = out {
                io::write_matrix(&out, end.rep().as_matrix())?;
            }
            print_json(&json!({
                "meta": Meta::new(p.n(), p.p(), "thin-svd-exp"),
                "result": {
                    "t": t,
                    "representative": matrix_rows(end.rep().as_matrix()),
                },
            }));
        }
        Command::Log {
            from,
            to,
            method,
            out,
        } => {
            let p = load_point(&from)?;
            let y = StiefelMatrix::new(io::read_matrix(&to)?)?;
            let (name, tangent, y_star): (&'static str, Matrix, Option<Matrix>) = match method {
                MethodArg::Extended | MethodArg::All => {
                    let (d, y_star) = grassmann::log_extended(&p, &y)?;
                    (
                        "extended-log",
                        d.matrix().clone(),
                        Some(y_star.as_matrix().clone()),
                    )
                }
                MethodArg::Standard => (
                    "standard-log",
                    experiment::log_standard_rep(p.rep().as_matrix(), y.as_matrix(), false)?,
                    None,
                ),
                MethodArg::StandardProjected => (
                    "standard-log-projected",
                    experiment::log_standard_rep(p.rep().as_matrix(), y.as_matrix(), true)?,
                    None,
                ),
            };
            if let Some(out) = out {
                io::write_matrix(&out, &tangent)?;
            }
            print_json(&json!({
                "meta": Meta::new(p.n(), p.p(), name),
                "result": {
                    "norm": tangent.norm(),
                    "tangent": matrix_rows(&tangent),
                    "aligned_representative": y_star.as_ref().map(matrix_rows),
                },
            }));
        }
        Command::Dist { a, b } => {
            let pa = load_point(&a)?;
            let pb = load_point(&b)?;
            let d = grassmann::distance(&pa, &pb);
            print_json(&json!({
                "meta": Meta::new(pa.n(), pa.p(), "principal-angles"),
                "result": { "distance_rad": d },
            }));
        }
        Command::Angles { a, b } => {
            let pa = load_point(&a)?;
            let pb = load_point(&b)?;
            let angles = grassmann::principal_angles(&pa, &pb)?;
            print_json(&json!({
                "meta": Meta::new(pa.n(), pa.p(), "principal-angles"),
                "result": { "angles_rad": angles.as_slice() },
            }));
        }
        Command::Transport {
            point,
            gamma,
            delta,
            t,
            out,
        } => {
            let p = load_point(&point)?;
            let g = load_tangent(&p, &gamma)?;
            let d = load_tangent(&p, &delta)?;
            let moved = grassmann::parallel_transport(&g, &d, t)?;
            if let Some(out) = out {
                io::write_matrix(&out, moved.matrix())?;
            }
            print_json(&json!({
                "meta": Meta::new(p.n(), p.p(), "geodesic-transport"),
                "result": {
                    "t": t,
                    "transported": matrix_rows(moved.matrix()),
                    "base_representative": matrix_rows(moved.base().rep().as_matrix()),
                },
            }));
        }
        Command::Curvature { point, d1, d2 } => {
            let p = load_point(&point)?;
            let a = load_tangent(&p, &d1)?;
            let b = load_tangent(&p, &d2)?;
            let k = grassmann::sectional_curvature(&a, &b)?;
            print_json(&json!({
                "meta": Meta::new(p.n(), p.p(), "gram-curvature"),
                "result": { "sectional_curvature": k },
            }));
        }
        Command::Fig3 {
            n,
            p,
            seed,
            trials,
            tau_min,
            tau_max,
            tau_steps,
            method,
            out,
            format,
        } => {
            let methods = match method {
                MethodArg::All => LogMethod::ALL.to_vec(),
                MethodArg::Extended => vec![LogMethod::Extended],
                MethodArg::Standard => vec![LogMethod::Standard],
                MethodArg::StandardProjected => vec![LogMethod::StandardProjected],
            };
            let config = ExperimentConfig {
                n,
                p,
                tau_grid: ExperimentConfig::log_grid(tau_min, tau_max, tau_steps),
                trials,
                seed,
                methods,
            };
            let records = experiment::run(&config)?;
            let rendered = match format {
                FormatArg::Csv => experiment::to_csv(&records),
                FormatArg::Json => experiment::to_json(&records),
            };
            match out {
                Some(path) => {
                    std::fs::write(&path, rendered).map_err(|e| Error::Io {
                        path: path.display().to_string(),
                        source: e,
                    })?;
                }
                None => print!("{rendered}"),
            }
        }
        Command::Selftest { level } => {
            let level = match level {
                LevelArg::Quick => selftest::Level::Quick,
                LevelArg::Full => selftest::Level::Full,
            };
            let report = selftest::run(level);
            print!("{}", report.render());
            if !report.all_passed() {
                return Err(Error::Numerical("selftest failed".into()));
            }
        }
    }
    Ok(())
}

fn print_json(value: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable")
    );
}

/// Entry point for the binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not usage errors.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            let code = exit_code(&e);
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "error": { "message": e.to_string(), "exit_code": code }
                }))
                .expect("serializable")
            );
            eprintln!("error: {e}");
            code
        }
    }
}
