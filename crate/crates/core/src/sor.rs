//! Jacobi and SOR sweeps, the SOR driver and power-iteration estimates of
//! the spectral radius.
//!
//! One SOR sweep runs in natural row order and updates in place:
//!
//! ```text
//! x_i <- (1 - ω) x_i + (ω / a_ii) (b_i - Σ_{j<i} a_ij x_j^new - Σ_{j>i} a_ij x_j^old)
//! ```
//!
//! which realizes `x <- L_ω x + (D - ωE)^{-1} ω b` with
//! `L_ω = (D - ωE)^{-1} (ωF + (1 - ω) D)`.

use crate::complex::{c64, ComplexScalar};
use crate::error::{Error, Result};
use crate::rng;
use crate::sparse::SparseMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SorParams {
    pub omega: ComplexScalar,
    /// Relative residual threshold `‖b - Ax‖₂ / ‖b‖₂`.
    pub tol: f64,
    pub max_iter: usize,
}

impl SorParams {
    pub fn new(omega: ComplexScalar, tol: f64, max_iter: usize) -> Result<Self> {
        if !tol.is_finite() || tol <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "tol must be positive, got {tol}"
            )));
        }
        if max_iter == 0 {
            return Err(Error::InvalidParameter(
                "max_iter must be at least 1".into(),
            ));
        }
        Ok(Self {
            omega,
            tol,
            max_iter,
        })
    }
}

/// Relative residual after every sweep.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConvergenceLog {
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl ConvergenceLog {
    /// Geometric mean of the residual ratios over the last `window` sweeps,
    /// `(r_k / r_{k - window})^(1 / window)`. The window shrinks to the
    /// available history; `None` with fewer than two residuals.
    pub fn tail_contraction(&self, window: usize) -> Option<f64> {
        let k = self.residuals.len();
        let w = window.min(k.saturating_sub(1));
        if w == 0 {
            return None;
        }
        let ratio = self.residuals[k - 1] / self.residuals[k - 1 - w];
        Some(ratio.powf(1.0 / w as f64))
    }
}

/// One in-place SOR sweep.
pub fn sor_sweep(
    a: &SparseMatrix,
    omega: ComplexScalar,
    x: &mut [ComplexScalar],
    b: &[ComplexScalar],
) {
    let keep = 1.0 - omega;
    for i in 0..a.dim() {
        let (cols, vals) = a.row(i);
        let mut sigma = b[i];
        let mut diag = c64(0.0, 0.0);
        for (&j, &v) in cols.iter().zip(vals) {
            if j == i {
                diag = v;
            } else {
                sigma -= v * x[j];
            }
        }
        x[i] = keep * x[i] + omega * sigma / diag;
    }
}

/// `x' = D^{-1}((E + F) x + b)`.
pub fn jacobi_sweep(
    a: &SparseMatrix,
    x: &[ComplexScalar],
    b: &[ComplexScalar],
) -> Vec<ComplexScalar> {
    (0..a.dim())
        .map(|i| {
            let (cols, vals) = a.row(i);
            let mut sigma = b[i];
            for (&j, &v) in cols.iter().zip(vals) {
                if j != i {
                    sigma -= v * x[j];
                }
            }
            sigma / a.diag(i)
        })
        .collect()
}

/// Runs SOR sweeps from `x0` (zero when `None`) until the relative residual
/// drops to `params.tol` or `params.max_iter` sweeps have run.
///
/// Hitting `max_iter` is not an error; the log reports `converged = false`.
pub fn sor_solve(
    a: &SparseMatrix,
    b: &[ComplexScalar],
    params: &SorParams,
    x0: Option<&[ComplexScalar]>,
) -> Result<(Vec<ComplexScalar>, ConvergenceLog)> {
    a.check_len(b.len())?;
    let b_norm = b.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if b_norm == 0.0 {
        return Err(Error::ZeroRhs);
    }
    let mut x = match x0 {
        Some(x0) => {
            a.check_len(x0.len())?;
            x0.to_vec()
        }
        None => vec![ComplexScalar::default(); a.dim()],
    };
    let mut log = ConvergenceLog::default();
    for _ in 0..params.max_iter {
        sor_sweep(a, params.omega, &mut x, b);
        let rel = a.residual_norm(&x, b) / b_norm;
        log.residuals.push(rel);
        log.iterations += 1;
        if rel <= params.tol {
            log.converged = true;
            break;
        }
    }
    Ok((x, log))
}

/// Spectral radius estimate of a linear operator by power iteration.
///
/// Starts from a seeded random complex vector, renormalizes each step and
/// returns the geometric mean of the last `min(20, iters / 2)` growth
/// factors. A collapse to the zero vector triggers one reseed and then an
/// error.
pub fn power_spectral_radius<F>(mut apply: F, n: usize, iters: usize, seed: u64) -> Result<f64>
where
    F: FnMut(&[ComplexScalar], &mut [ComplexScalar]),
{
    if iters < 50 {
        return Err(Error::InvalidParameter(format!(
            "power iteration needs at least 50 steps, got {iters}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("empty operator".into()));
    }
    let window = 20.min(iters / 2);
    let mut rng = rng::seeded(seed);
    'attempt: for _ in 0..2 {
        let mut x = rng::uniform_complex_vector(&mut rng, n);
        let mut y = vec![ComplexScalar::default(); n];
        if !normalize(&mut x) {
            continue;
        }
        let mut log_sum = 0.0;
        for k in 0..iters {
            apply(&x, &mut y);
            let g = norm(&y);
            if g == 0.0 || !g.is_finite() {
                continue 'attempt;
            }
            if k >= iters - window {
                log_sum += g.ln();
            }
            let inv = 1.0 / g;
            for (xi, yi) in x.iter_mut().zip(&y) {
                *xi = yi * inv;
            }
        }
        return Ok((log_sum / window as f64).exp());
    }
    Err(Error::ZeroVector)
}

/// Power-iteration estimate of `ρ(L_ω)`.
pub fn sor_spectral_radius(
    a: &SparseMatrix,
    omega: ComplexScalar,
    iters: usize,
    seed: u64,
) -> Result<f64> {
    let zero = vec![ComplexScalar::default(); a.dim()];
    power_spectral_radius(
        |x, y| {
            y.copy_from_slice(x);
            sor_sweep(a, omega, y, &zero);
        },
        a.dim(),
        iters,
        seed,
    )
}

/// Power-iteration estimate of `ρ(J)`.
pub fn jacobi_spectral_radius(a: &SparseMatrix, iters: usize, seed: u64) -> Result<f64> {
    let zero = vec![ComplexScalar::default(); a.dim()];
    power_spectral_radius(
        |x, y| y.copy_from_slice(&jacobi_sweep(a, x, &zero)),
        a.dim(),
        iters,
        seed,
    )
}

fn norm(x: &[ComplexScalar]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(x: &mut [ComplexScalar]) -> bool {
    let n = norm(x);
    if n == 0.0 {
        return false;
    }
    x.iter_mut().for_each(|v| *v /= n);
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::dense_spectral_radius;
    use crate::helmholtz::HelmholtzParams;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn r(x: f64) -> ComplexScalar {
        c64(x, 0.0)
    }

    fn diagonal() -> SparseMatrix {
        SparseMatrix::from_triplets(3, &[(0, 0, r(2.0)), (1, 1, c64(0.0, 4.0)), (2, 2, r(-0.5))])
            .unwrap()
    }

    fn poisson_2x2() -> SparseMatrix {
        SparseMatrix::from_triplets(
            2,
            &[
                (0, 0, r(2.0)),
                (0, 1, r(-1.0)),
                (1, 0, r(-1.0)),
                (1, 1, r(2.0)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn sweep_on_diagonal_solves_exactly() {
        let a = diagonal();
        let b = vec![r(1.0), r(2.0), c64(3.0, 1.0)];
        let mut x = vec![c64(5.0, -1.0); 3];
        sor_sweep(&a, r(1.0), &mut x, &b);
        for i in 0..3 {
            assert!((x[i] - b[i] / a.diag(i)).norm() < 1e-15);
        }
    }

    #[test]
    fn sweep_on_diagonal_scales() {
        let a = diagonal();
        let omega = c64(1.3, 0.4);
        let x0 = vec![r(1.0), c64(0.0, 2.0), c64(-1.0, 1.0)];
        let mut x = x0.clone();
        sor_sweep(&a, omega, &mut x, &[ComplexScalar::default(); 3]);
        for (u, v) in x.iter().zip(&x0) {
            assert!((u - (1.0 - omega) * v).norm() < 1e-15);
        }
    }

    #[test]
    fn sweep_forward_substitution() {
        let mut x = vec![ComplexScalar::default(); 2];
        sor_sweep(&poisson_2x2(), r(1.0), &mut x, &[r(1.0), r(1.0)]);
        assert_eq!(x, vec![r(0.5), r(0.75)]);
    }

    #[test]
    fn jacobi_examples() {
        let zero = [ComplexScalar::default(); 3];
        assert_eq!(
            jacobi_sweep(&diagonal(), &[r(1.0); 3], &zero),
            vec![ComplexScalar::default(); 3]
        );
        let y = jacobi_sweep(&poisson_2x2(), &[r(1.0), r(1.0)], &zero[..2]);
        assert_eq!(y, vec![r(0.5), r(0.5)]);
        let perm = SparseMatrix::from_triplets(
            2,
            &[
                (0, 0, r(1.0)),
                (0, 1, r(-1.0)),
                (1, 0, r(-1.0)),
                (1, 1, r(1.0)),
            ],
        )
        .unwrap();
        assert_eq!(
            jacobi_sweep(&perm, &[r(1.0), r(0.0)], &zero[..2]),
            vec![r(0.0), r(1.0)]
        );
    }

    #[test]
    fn solve_diagonal_in_one_sweep() {
        let a = diagonal();
        let params = SorParams::new(r(1.0), 1e-6, 10).unwrap();
        let (x, log) = sor_solve(&a, &[r(1.0), r(1.0), r(1.0)], &params, None).unwrap();
        assert!(log.converged);
        assert_eq!(log.iterations, 1);
        assert_eq!(log.residuals.len(), 1);
        assert!((x[0] - r(0.5)).norm() < 1e-15);
    }

    #[test]
    fn solve_errors_and_budget() {
        let a = poisson_2x2();
        let params = SorParams::new(r(1.0), 1e-30, 5).unwrap();
        assert!(matches!(
            sor_solve(&a, &[ComplexScalar::default(); 2], &params, None),
            Err(Error::ZeroRhs)
        ));
        assert!(sor_solve(&a, &[r(1.0)], &params, None).is_err());
        let (_, log) = sor_solve(&a, &[r(1.0), r(0.0)], &params, None).unwrap();
        assert!(!log.converged);
        assert_eq!(log.iterations, 5);
        assert!(SorParams::new(r(1.0), 0.0, 5).is_err());
        assert!(SorParams::new(r(1.0), 1e-6, 0).is_err());
    }

    #[test]
    fn solve_from_given_start() {
        let a = poisson_2x2();
        let b = [r(1.0), r(1.0)];
        let params = SorParams::new(r(1.0), 1e-12, 100).unwrap();
        let (x, log) = sor_solve(&a, &b, &params, Some(&[r(1.0), r(1.0)])).unwrap();
        assert!(log.converged);
        assert_eq!(log.iterations, 1);
        assert_eq!(x, vec![r(1.0), r(1.0)]);
    }

    #[test]
    fn tail_contraction_of_geometric_log() {
        let log = ConvergenceLog {
            residuals: (1..=50).map(|k| 0.5f64.powi(k)).collect(),
            iterations: 50,
            converged: false,
        };
        assert!((log.tail_contraction(20).unwrap() - 0.5).abs() < 1e-14);
        assert!((log.tail_contraction(1000).unwrap() - 0.5).abs() < 1e-14);
        assert!(ConvergenceLog::default().tail_contraction(5).is_none());
    }

    #[test]
    fn power_on_scalar_operator() {
        let omega = r(1.25);
        let rho = power_spectral_radius(
            |x, y| {
                for (yi, xi) in y.iter_mut().zip(x) {
                    *yi = (1.0 - omega) * xi;
                }
            },
            10,
            50,
            1,
        )
        .unwrap();
        assert!((rho - 0.25).abs() < 1e-10);
    }

    #[test]
    fn power_errors() {
        assert!(power_spectral_radius(|_, _| {}, 4, 10, 0).is_err());
        let nilpotent =
            |_: &[ComplexScalar], y: &mut [ComplexScalar]| y.fill(ComplexScalar::default());
        assert!(matches!(
            power_spectral_radius(nilpotent, 4, 60, 0),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn power_jacobi_helmholtz() {
        let a = HelmholtzParams::new(8, 0.0, 0.0)
            .unwrap()
            .assemble()
            .unwrap();
        let rho = jacobi_spectral_radius(&a, 2000, 5).unwrap();
        assert!((rho - (PI / 9.0).cos()).abs() < 1e-6);
    }

    #[test]
    fn power_sor_helmholtz_matches_dense() {
        let p = HelmholtzParams::new(8, 2.0 * PI, 0.5).unwrap();
        let a = p.assemble().unwrap();
        let omega = p.mu_tilde().unwrap().optimal_omega().unwrap();
        let dense = dense_spectral_radius(&a, omega).unwrap();
        let power = sor_spectral_radius(&a, omega, 20_000, 11).unwrap();
        assert!((dense - (1.0 - omega).norm()).abs() < 1e-8);
        assert!((power - dense).abs() < 1e-4, "power={power} dense={dense}");
    }

    proptest! {
        #[test]
        fn sweep_is_linear(seed in 0u64..1000, s in -2.0f64..2.0, t in -2.0f64..2.0) {
            let p = HelmholtzParams::new(5, 3.0 * PI, 0.25).unwrap();
            let a = p.assemble().unwrap();
            let omega = p.mu_tilde().unwrap().optimal_omega().unwrap();
            let mut g = rng::seeded(seed);
            let x = rng::uniform_complex_vector(&mut g, a.dim());
            let y = rng::uniform_complex_vector(&mut g, a.dim());
            let zero = vec![ComplexScalar::default(); a.dim()];
            let (cs, ct) = (c64(s, 0.5), c64(-0.25, t));
            let mut combo: Vec<_> = x.iter().zip(&y).map(|(u, v)| cs * u + ct * v).collect();
            let (mut sx, mut sy) = (x.clone(), y.clone());
            sor_sweep(&a, omega, &mut combo, &zero);
            sor_sweep(&a, omega, &mut sx, &zero);
            sor_sweep(&a, omega, &mut sy, &zero);
            for i in 0..a.dim() {
                prop_assert!((combo[i] - (cs * sx[i] + ct * sy[i])).norm() <= 1e-12);
            }
        }

        #[test]
        fn solution_is_fixed_point(seed in 0u64..1000) {
            let p = HelmholtzParams::new(6, 2.0 * PI, 0.5).unwrap();
            let a = p.assemble().unwrap();
            let omega = p.mu_tilde().unwrap().optimal_omega().unwrap();
            let mut g = rng::seeded(seed);
            let x = rng::uniform_complex_vector(&mut g, a.dim());
            let b = a.matvec(&x).unwrap();
            let mut y = x.clone();
            sor_sweep(&a, omega, &mut y, &b);
            for (u, v) in y.iter().zip(&x) {
                prop_assert!((u - v).norm() <= 1e-12 * v.norm().max(1.0));
            }
        }
    }
}
