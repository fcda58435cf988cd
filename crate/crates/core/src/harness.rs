//! Experiment drivers behind the `zsor` command line: iteration-count
//! tables for the damped Helmholtz problem, single convergence curves and
//! samples of the bound functions on a grid.
//!
//! Every CSV starts with `#` comment lines echoing the inputs, the seed and
//! the crate version, followed by a header row. Output is a pure function of
//! the inputs, independent of thread scheduling.

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{self, f_map, on_slit};
use crate::complex::{c64, ComplexScalar};
use crate::error::{Error, Result};
use crate::helmholtz::HelmholtzParams;
use crate::rng;
use crate::sor::{sor_solve, ConvergenceLog, SorParams};
use crate::spectra::iterations_for_rho;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Number of trailing sweeps used for the measured contraction rate.
pub const RATE_WINDOW: usize = 100;

/// Default grid sizes; 640 is opt-in.
pub const DEFAULT_NS: [usize; 3] = [80, 160, 320];
pub const LARGE_N: usize = 640;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSpec {
    pub alphas: Vec<f64>,
    pub ns: Vec<usize>,
    /// Wavenumber in units of π.
    pub k_over_pi: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub output: Option<std::path::PathBuf>,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            alphas: vec![0.5, 0.25, 0.125, 0.0625],
            ns: DEFAULT_NS.to_vec(),
            k_over_pi: 16.0,
            tol: 1e-6,
            max_iter: 50_000,
            seed: 0,
            output: None,
        }
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.alphas.is_empty() || self.ns.is_empty() {
            return Err(Error::InvalidParameter(
                "alphas and Ns must be nonempty".into(),
            ));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "tol must lie in (0, 1), got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter(
                "max_iter must be at least 1".into(),
            ));
        }
        if !self.k_over_pi.is_finite() || self.k_over_pi < 0.0 {
            return Err(Error::InvalidParameter(
                "k_over_pi must be finite and nonnegative".into(),
            ));
        }
        if self.alphas.iter().any(|a| !a.is_finite() || *a < 0.0) {
            return Err(Error::InvalidParameter(
                "alphas must be finite and nonnegative".into(),
            ));
        }
        if self.ns.contains(&0) {
            return Err(Error::InvalidParameter("N must be at least 1".into()));
        }
        Ok(())
    }

    pub fn k(&self) -> f64 {
        self.k_over_pi * PI
    }

    fn header_lines(&self, command: &str) -> Vec<String> {
        let join = |v: Vec<String>| v.join(" ");
        vec![
            format!("# zsor {VERSION} {command}"),
            format!("# seed={}", self.seed),
            format!(
                "# alphas={} ns={} k_over_pi={} tol={} max_iter={}",
                join(self.alphas.iter().map(|a| a.to_string()).collect()),
                join(self.ns.iter().map(|n| n.to_string()).collect()),
                self.k_over_pi,
                self.tol,
                self.max_iter
            ),
            "# rhs=uniform[0,1) real, ChaCha8 seeded per cell with `seed`; x0=0".to_string(),
        ]
    }
}

/// One `(α, N)` cell of an iteration-count table.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub alpha: f64,
    pub n: usize,
    pub k: f64,
    pub iterations: usize,
    /// `ceil(ln tol / ln ρ)`; `None` when `ρ >= 1`.
    pub predicted_iterations: Option<u64>,
    pub rho_formula: f64,
    /// Geometric-mean residual contraction over the last [`RATE_WINDOW`] sweeps.
    pub measured_rate: Option<f64>,
    pub lower_gap: f64,
    pub upper_gap: f64,
    pub converged: bool,
}

pub const TABLE_COLUMNS: &str = "alpha,N,k,iterations,predicted_iterations,rho_formula,measured_rate,lower_gap,upper_gap,converged";

impl TableRow {
    fn csv(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.alpha,
            self.n,
            self.k,
            self.iterations,
            opt(self.predicted_iterations.map(|p| p.to_string())),
            self.rho_formula,
            opt(self.measured_rate.map(|r| r.to_string())),
            self.lower_gap,
            self.upper_gap,
            self.converged
        )
    }
}

/// Solves one Helmholtz cell with optimal complex `ω` from a zero guess and
/// a seeded random real right-hand side.
pub fn run_cell(
    alpha: f64,
    n: usize,
    k: f64,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<(TableRow, ConvergenceLog)> {
    let params = HelmholtzParams::new(n, k, alpha)?;
    let a = params.assemble()?;
    let seg = params.mu_tilde()?;
    let report = seg.theorem_bounds()?;
    let b = rng::uniform_real_vector(a.dim(), seed);
    let sor = SorParams::new(report.omega_opt, tol, max_iter)?;
    let (_, log) = sor_solve(&a, &b, &sor, None)?;
    let row = TableRow {
        alpha,
        n,
        k,
        iterations: log.iterations,
        predicted_iterations: iterations_for_rho(report.rho, tol).ok(),
        rho_formula: report.rho,
        measured_rate: log.tail_contraction(RATE_WINDOW),
        lower_gap: report.lower_gap,
        upper_gap: report.upper_gap,
        converged: log.converged,
    };
    Ok((row, log))
}

/// All `(α, N)` cells in row-major order (alphas outer), solved in parallel.
pub fn run_table(spec: &ExperimentSpec) -> Result<Vec<TableRow>> {
    spec.validate()?;
    let cells: Vec<(f64, usize)> = spec
        .alphas
        .iter()
        .flat_map(|&a| spec.ns.iter().map(move |&n| (a, n)))
        .collect();
    cells
        .par_iter()
        .map(|&(alpha, n)| {
            run_cell(alpha, n, spec.k(), spec.tol, spec.max_iter, spec.seed).map(|(row, _)| row)
        })
        .collect()
}

pub fn write_table_csv<W: Write>(mut w: W, spec: &ExperimentSpec, rows: &[TableRow]) -> Result<()> {
    for line in spec.header_lines("run-table") {
        writeln!(w, "{line}")?;
    }
    writeln!(w, "{TABLE_COLUMNS}")?;
    for row in rows {
        writeln!(w, "{}", row.csv())?;
    }
    Ok(())
}

/// Convergence history of a single Helmholtz cell.
pub fn run_curve(spec: &ExperimentSpec, alpha: f64, n: usize) -> Result<ConvergenceLog> {
    spec.validate()?;
    run_cell(alpha, n, spec.k(), spec.tol, spec.max_iter, spec.seed).map(|(_, log)| log)
}

pub fn write_curve_csv<W: Write>(
    mut w: W,
    spec: &ExperimentSpec,
    alpha: f64,
    n: usize,
    log: &ConvergenceLog,
) -> Result<()> {
    for line in spec.header_lines("run-curve") {
        writeln!(w, "{line}")?;
    }
    writeln!(
        w,
        "# alpha={alpha} N={n} converged={} iterations={}",
        log.converged, log.iterations
    )?;
    writeln!(w, "iteration,relative_residual")?;
    for (i, r) in log.residuals.iter().enumerate() {
        writeln!(w, "{},{}", i + 1, r)?;
    }
    Ok(())
}

/// One sample of the bound functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSample {
    pub re: f64,
    pub im: f64,
    pub abs_f: f64,
    pub ratio_fg: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsGrid {
    pub samples: Vec<GridSample>,
    /// Grid points where the bounds are undefined (`z = 1`).
    pub skipped: Vec<ComplexScalar>,
}

fn axis(range: (f64, f64), resolution: usize) -> Vec<f64> {
    if resolution == 1 || range.0 == range.1 {
        return vec![range.0];
    }
    let step = (range.1 - range.0) / (resolution - 1) as f64;
    (0..resolution).map(|i| range.0 + step * i as f64).collect()
}

/// Samples `|f|`, `|f - 1| / |1 - g|` and the lemma bounds on a
/// `resolution x resolution` grid over `re_range x im_range`. A degenerate
/// range contributes a single line.
pub fn bounds_grid(
    re_range: (f64, f64),
    im_range: (f64, f64),
    resolution: usize,
) -> Result<BoundsGrid> {
    if resolution == 0 {
        return Err(Error::InvalidParameter(
            "resolution must be at least 1".into(),
        ));
    }
    let finite = [re_range.0, re_range.1, im_range.0, im_range.1]
        .iter()
        .all(|v| v.is_finite());
    if !finite || re_range.0 > re_range.1 || im_range.0 > im_range.1 {
        return Err(Error::InvalidParameter(
            "ranges must be finite with min <= max".into(),
        ));
    }
    if re_range.0 < 0.0 {
        return Err(Error::Domain("bounds grid must lie in Re(z) >= 0"));
    }
    let mut grid = BoundsGrid {
        samples: Vec::with_capacity(resolution * resolution),
        skipped: Vec::new(),
    };
    for &im in &axis(im_range, resolution) {
        for &re in &axis(re_range, resolution) {
            let z = c64(re, im);
            if z == c64(1.0, 0.0) {
                grid.skipped.push(z);
                continue;
            }
            let b = analysis::lemma_bounds(z)?;
            grid.samples.push(GridSample {
                re,
                im,
                abs_f: if on_slit(z) { 1.0 } else { f_map(z).norm() },
                ratio_fg: analysis::ratio_fg(z)?,
                lower: b.lower,
                upper: b.upper,
            });
        }
    }
    Ok(grid)
}

pub fn write_grid_csv<W: Write>(
    mut w: W,
    re_range: (f64, f64),
    im_range: (f64, f64),
    resolution: usize,
    grid: &BoundsGrid,
) -> Result<()> {
    writeln!(w, "# zsor {VERSION} bounds-grid")?;
    writeln!(
        w,
        "# re={}:{} im={}:{} resolution={}",
        re_range.0, re_range.1, im_range.0, im_range.1, resolution
    )?;
    for z in &grid.skipped {
        writeln!(w, "# skipped z={}{:+}i (bounds undefined)", z.re, z.im)?;
    }
    writeln!(w, "re,im,abs_f,ratio_fg,lower,upper")?;
    for s in &grid.samples {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            s.re, s.im, s.abs_f, s.ratio_fg, s.lower, s.upper
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec() -> ExperimentSpec {
        ExperimentSpec {
            alphas: vec![0.5, 0.25],
            ns: vec![12, 20],
            k_over_pi: 2.0,
            ..ExperimentSpec::default()
        }
    }

    #[test]
    fn spec_validation() {
        assert!(ExperimentSpec::default().validate().is_ok());
        let mut s = small_spec();
        s.alphas.clear();
        assert!(s.validate().is_err());
        let mut s = small_spec();
        s.tol = 1.0;
        assert!(s.validate().is_err());
        let mut s = small_spec();
        s.ns = vec![0];
        assert!(s.validate().is_err());
    }

    #[test]
    fn spec_from_partial_json() {
        let s: ExperimentSpec = serde_json::from_str(r#"{"alphas":[0.5],"seed":9}"#).unwrap();
        assert_eq!(s.alphas, vec![0.5]);
        assert_eq!(s.seed, 9);
        assert_eq!(s.ns, DEFAULT_NS.to_vec());
        assert!(serde_json::from_str::<ExperimentSpec>(r#"{"bogus":1}"#).is_err());
    }

    #[test]
    fn table_rows_in_order_and_bracketed() {
        let spec = small_spec();
        let rows = run_table(&spec).unwrap();
        let order: Vec<_> = rows.iter().map(|r| (r.alpha, r.n)).collect();
        assert_eq!(order, vec![(0.5, 12), (0.5, 20), (0.25, 12), (0.25, 20)]);
        for r in &rows {
            assert!(r.converged);
            assert!(r.lower_gap <= 1.0 - r.rho_formula && 1.0 - r.rho_formula <= r.upper_gap);
        }
    }

    #[test]
    fn table_csv_is_deterministic() {
        let spec = small_spec();
        let render = || {
            let rows = run_table(&spec).unwrap();
            let mut buf = Vec::new();
            write_table_csv(&mut buf, &spec, &rows).unwrap();
            String::from_utf8(buf).unwrap()
        };
        let a = render();
        assert_eq!(a, render());
        let header = a.lines().find(|l| !l.starts_with('#')).unwrap();
        assert_eq!(header, TABLE_COLUMNS);
        assert!(a.contains("# seed=0"));
    }

    #[test]
    fn non_convergent_cell_is_reported() {
        let mut spec = small_spec();
        spec.max_iter = 3;
        let rows = run_table(&spec).unwrap();
        assert!(rows.iter().all(|r| !r.converged && r.iterations == 3));
        let mut buf = Vec::new();
        write_table_csv(&mut buf, &spec, &rows).unwrap();
        assert!(String::from_utf8(buf)
            .unwrap()
            .lines()
            .last()
            .unwrap()
            .ends_with(",false"));
    }

    #[test]
    fn curve_rows_match_log() {
        let spec = small_spec();
        let log = run_curve(&spec, 0.5, 12).unwrap();
        let mut buf = Vec::new();
        write_curve_csv(&mut buf, &spec, 0.5, 12, &log).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let data: Vec<_> = text
            .lines()
            .filter(|l| !l.starts_with('#'))
            .skip(1)
            .collect();
        assert_eq!(data.len(), log.iterations);
        assert!(data[0].starts_with("1,"));
    }

    #[test]
    fn grid_examples() {
        let grid = bounds_grid((0.0, 2.0), (0.0, 0.0), 21).unwrap();
        assert_eq!(grid.skipped, vec![c64(1.0, 0.0)]);
        assert_eq!(grid.samples.len(), 20);
        let at = |re: f64| {
            *grid
                .samples
                .iter()
                .find(|s| (s.re - re).abs() < 1e-12)
                .unwrap()
        };
        assert_eq!(at(0.0).abs_f, 0.0);
        let s = at(1.5);
        assert_eq!((s.abs_f, s.lower, s.upper), (1.0, 0.0, 0.0));
        assert!((at(0.8).abs_f - 0.25).abs() < 1e-15);
    }

    #[test]
    fn grid_rejects_left_half_plane() {
        assert!(bounds_grid((-0.5, 1.0), (0.0, 1.0), 4).is_err());
        assert!(bounds_grid((0.0, 1.0), (0.0, 1.0), 0).is_err());
    }
}
