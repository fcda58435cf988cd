use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use zsor_core::harness::{self, ExperimentSpec, LARGE_N};
use zsor_core::{verify, Error};

/// Complex SOR experiments for shifted Helmholtz problems.
#[derive(Debug, Parser)]
#[command(name = "zsor", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Iteration counts for every (alpha, N) cell, as CSV.
    RunTable(ExperimentArgs),
    /// Residual history of a single (alpha, N) cell, as CSV.
    RunCurve(ExperimentArgs),
    /// |f|, the ratio |f-1|/|1-g| and the lemma bounds on a grid, as CSV.
    BoundsGrid(GridArgs),
    /// Randomized property checks over all modules.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// JSON file with ExperimentSpec fields; flags override it.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Damping parameter (repeatable).
    #[arg(long = "alpha", value_name = "ALPHA")]
    alphas: Vec<f64>,
    /// Interior grid points per direction (repeatable).
    #[arg(long = "n", value_name = "N")]
    ns: Vec<usize>,
    /// Wavenumber in units of pi.
    #[arg(long)]
    k_over_pi: Option<f64>,
    /// Relative residual tolerance [default: 1e-6].
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Seed for the right-hand side.
    #[arg(long)]
    seed: Option<u64>,
    /// Write CSV here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Also run N=640.
    #[arg(long)]
    include_large: bool,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    re_min: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    re_max: f64,
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    im_min: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    im_max: f64,
    /// Points per axis.
    #[arg(long, default_value_t = 101)]
    resolution: usize,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Random cases per sampled property.
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

/// Bad input: exit code 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

enum Status {
    Ok,
    CheckFailed,
}

impl ExperimentArgs {
    fn spec(&self) -> anyhow::Result<ExperimentSpec> {
        let mut spec = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| usage(format!("invalid config {}: {e}", path.display())))?
            }
            None => ExperimentSpec::default(),
        };
        if !self.alphas.is_empty() {
            spec.alphas = self.alphas.clone();
        }
        if !self.ns.is_empty() {
            spec.ns = self.ns.clone();
        }
        if let Some(v) = self.k_over_pi {
            spec.k_over_pi = v;
        }
        if let Some(v) = self.tol {
            spec.tol = v;
        }
        if let Some(v) = self.max_iter {
            spec.max_iter = v;
        }
        if let Some(v) = self.seed {
            spec.seed = v;
        }
        if self.out.is_some() {
            spec.output = self.out.clone();
        }
        if self.include_large && !spec.ns.contains(&LARGE_N) {
            spec.ns.push(LARGE_N);
        }
        spec.validate().map_err(|e| usage(e.to_string()))?;
        Ok(spec)
    }
}

fn open_output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run_table(args: &ExperimentArgs) -> anyhow::Result<Status> {
    let spec = args.spec()?;
    let rows = harness::run_table(&spec)?;
    let mut out = open_output(spec.output.as_deref())?;
    harness::write_table_csv(&mut out, &spec, &rows)?;
    out.flush()?;

    let mut status = Status::Ok;
    for row in &rows {
        let gap = 1.0 - row.rho_formula;
        if !(row.lower_gap <= gap && gap <= row.upper_gap) {
            eprintln!(
                "error: alpha={} N={}: gap {gap} outside [{}, {}]",
                row.alpha, row.n, row.lower_gap, row.upper_gap
            );
            status = Status::CheckFailed;
        }
        if !row.converged {
            eprintln!(
                "warning: alpha={} N={} did not converge in {} sweeps",
                row.alpha, row.n, spec.max_iter
            );
        } else if let Some(m) = row.measured_rate {
            if (m - row.rho_formula).abs() > 1e-2 {
                eprintln!(
                    "warning: alpha={} N={}: measured rate {m:.4} differs from |1-omega| {:.4} by more than 1e-2",
                    row.alpha, row.n, row.rho_formula
                );
            }
        }
    }
    Ok(status)
}

fn run_curve(args: &ExperimentArgs) -> anyhow::Result<Status> {
    let spec = args.spec()?;
    let (&[alpha], &[n]) = (spec.alphas.as_slice(), spec.ns.as_slice()) else {
        return Err(usage("run-curve needs exactly one --alpha and one --n"));
    };
    let log = harness::run_curve(&spec, alpha, n)?;
    let mut out = open_output(spec.output.as_deref())?;
    harness::write_curve_csv(&mut out, &spec, alpha, n, &log)?;
    out.flush()?;
    if !log.converged {
        eprintln!("warning: did not converge in {} sweeps", spec.max_iter);
    }
    Ok(Status::Ok)
}

fn bounds_grid(args: &GridArgs) -> anyhow::Result<Status> {
    let re = (args.re_min, args.re_max);
    let im = (args.im_min, args.im_max);
    let grid = harness::bounds_grid(re, im, args.resolution).map_err(|e| usage(e.to_string()))?;
    for z in &grid.skipped {
        eprintln!("skipped z={}{:+}i: bounds undefined at z=1", z.re, z.im);
    }
    let mut out = open_output(args.out.as_deref())?;
    harness::write_grid_csv(&mut out, re, im, args.resolution, &grid)?;
    out.flush()?;
    Ok(Status::Ok)
}

fn run_verify(args: &VerifyArgs) -> anyhow::Result<Status> {
    if args.samples == 0 {
        return Err(usage("--samples must be at least 1"));
    }
    let report = verify::run(args.samples, args.seed);
    let mut out = open_output(args.out.as_deref())?;
    writeln!(out, "{report}")?;
    out.flush()?;
    Ok(if report.passed() {
        Status::Ok
    } else {
        Status::CheckFailed
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::RunTable(a) => run_table(a),
        Command::RunCurve(a) => run_curve(a),
        Command::BoundsGrid(a) => bounds_grid(a),
        Command::Verify(a) => run_verify(a),
    };
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::CheckFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            let is_usage = e.downcast_ref::<Usage>().is_some()
                || matches!(
                    e.downcast_ref::<Error>(),
                    Some(Error::InvalidParameter(_) | Error::Domain(_) | Error::TooLarge { .. })
                );
            ExitCode::from(if is_usage { 2 } else { 1 })
        }
    }
}
