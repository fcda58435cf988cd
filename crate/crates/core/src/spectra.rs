//! From a symmetric Jacobi segment `[-μ̃, μ̃]` to the optimal SOR parameter,
//! its spectral radius, two-sided bounds on `1 - ρ` and the asymptotic rate.

use std::f64::consts::SQRT_2;

use crate::analysis::{self, on_slit};
use crate::complex::{c64, is_finite, principal_arg, ComplexScalar};
use crate::error::{Error, Result};

/// Endpoint `μ̃` of the Jacobi segment, normalized so that `Re(μ̃) >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentSpectrum {
    mu_tilde: ComplexScalar,
}

impl SegmentSpectrum {
    /// Picks the representative of `±mu` with nonnegative real part. On the
    /// imaginary axis the one with `Im >= 0` is chosen.
    pub fn normalize(mu: ComplexScalar) -> Result<Self> {
        if !is_finite(mu) {
            return Err(Error::NonFinite);
        }
        let flip = mu.re < 0.0 || (mu.re == 0.0 && mu.im < 0.0);
        let mut mu_tilde = if flip { -mu } else { mu };
        // Avoid carrying signed zeros into branch decisions downstream.
        mu_tilde.re += 0.0;
        mu_tilde.im += 0.0;
        Ok(Self { mu_tilde })
    }

    pub fn real(mu: f64) -> Result<Self> {
        Self::normalize(c64(mu, 0.0))
    }

    pub fn mu_tilde(&self) -> ComplexScalar {
        self.mu_tilde
    }

    /// `ω_opt = 2 / (1 + sqrt(1 - μ̃²))`.
    pub fn optimal_omega(&self) -> Result<ComplexScalar> {
        let s = analysis::s_map(self.mu_tilde);
        let denom = 1.0 + s;
        if denom.norm() == 0.0 {
            return Err(Error::Domain("1 + sqrt(1 - μ̃²) vanishes"));
        }
        Ok(2.0 / denom)
    }

    /// `ρ(L_ω_opt) = |1 - ω_opt|`.
    pub fn optimal_rho(&self) -> Result<f64> {
        Ok((1.0 - self.optimal_omega()?).norm())
    }

    /// Two-sided bounds on `1 - ρ(L_ω_opt)` together with `ω_opt`, `ρ` and
    /// the asymptotic rate.
    pub fn theorem_bounds(&self) -> Result<BoundReport> {
        let lemma = analysis::lemma_bounds(self.mu_tilde)?;
        let omega_opt = self.optimal_omega()?;
        Ok(BoundReport {
            omega_opt,
            rho: (1.0 - omega_opt).norm(),
            delta: lemma.delta,
            radius: lemma.radius,
            beta_m: lemma.beta_m,
            beta_max: lemma.beta_max,
            lower_gap: lemma.lower,
            upper_gap: lemma.upper,
            asymptotic_rate: rate_from(lemma.delta, lemma.radius),
        })
    }

    /// `2√2 sin(δ/2) sqrt|1 - μ̃|`; zero on the slit.
    pub fn asymptotic_rate(&self) -> Result<f64> {
        let z = self.mu_tilde;
        if z == c64(1.0, 0.0) {
            return Err(Error::Domain("asymptotic rate undefined at μ̃ = 1"));
        }
        if on_slit(z) {
            return Ok(0.0);
        }
        let delta = principal_arg(z - 1.0)?.abs();
        Ok(rate_from(delta, (z - 1.0).norm()))
    }

    /// Sweeps needed to reduce the error by `tol` at rate `ρ`:
    /// `ceil(ln tol / ln ρ)`.
    pub fn predicted_iterations(&self, tol: f64) -> Result<u64> {
        if !(tol > 0.0 && tol < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "tol must lie in (0, 1), got {tol}"
            )));
        }
        iterations_for_rho(self.optimal_rho()?, tol)
    }
}

pub(crate) fn iterations_for_rho(rho: f64, tol: f64) -> Result<u64> {
    if rho.is_nan() || rho >= 1.0 {
        return Err(Error::NonConvergent { rho });
    }
    if rho == 0.0 {
        return Ok(1);
    }
    Ok((tol.ln() / rho.ln()).ceil().max(1.0) as u64)
}

fn rate_from(delta: f64, radius: f64) -> f64 {
    2.0 * SQRT_2 * (0.5 * delta).sin() * radius.sqrt()
}

/// Classical real-case optimum `2 / (1 + sqrt(1 - ρ(J)²))` for `ρ(J) < 1`.
pub fn real_optimal_omega(rho_jacobi: f64) -> f64 {
    2.0 / (1.0 + (1.0 - rho_jacobi * rho_jacobi).sqrt())
}

/// Everything known about optimal SOR for one segment endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub omega_opt: ComplexScalar,
    pub rho: f64,
    pub delta: f64,
    pub radius: f64,
    pub beta_m: f64,
    pub beta_max: f64,
    /// Lower bound on `1 - rho`.
    pub lower_gap: f64,
    /// Upper bound on `1 - rho`.
    pub upper_gap: f64,
    pub asymptotic_rate: f64,
}
