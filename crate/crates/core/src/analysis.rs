//! Scalar complex maps behind the SOR rate bounds.
//!
//! With `s(z) = sqrt(1 - z²)` on the principal branch,
//!
//! ```text
//! f(z) = 2 / (1 + s(z)) - 1        g(z) = 1 - 2 sqrt(2 (1 - z))
//! ```
//!
//! For `Re z >= 0`, `|f(z)|` is the spectral radius of optimal SOR when the
//! Jacobi spectrum fills `[-z, z]`, and `|1 - g(z)| = 2√2 sqrt|1 - z|` is the
//! reference scale for `|f(z) - 1|` and `1 - |f(z)|`.
//!
//! The slit `[1, ∞)` is detected exactly (`Im z == 0 && Re z >= 1`).

use std::f64::consts::{FRAC_PI_2, SQRT_2};

use crate::complex::{c64, is_finite, principal_arg, principal_sqrt, ComplexScalar};
use crate::error::{Error, Result};

/// Two-sided bounds on `1 - |f(z)|` with the quantities used to build them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaBounds {
    pub lower: f64,
    pub upper: f64,
    /// `|Arg(z - 1)|`
    pub delta: f64,
    /// `|z - 1|`
    pub radius: f64,
    pub beta_m: f64,
    pub beta_max: f64,
}

/// `true` when `z` lies exactly on the ray `[1, ∞)`.
#[inline]
pub fn on_slit(z: ComplexScalar) -> bool {
    z.im == 0.0 && z.re >= 1.0
}

/// `s(z) = sqrt(1 - z²)`, with `1 - z²` formed as `(1 - z)(1 + z)` to keep
/// accuracy near `z = 1`.
#[inline]
pub fn s_map(z: ComplexScalar) -> ComplexScalar {
    let one = c64(1.0, 0.0);
    principal_sqrt((one - z) * (one + z))
}

/// `f(z) = 2 / (1 + sqrt(1 - z²)) - 1`. Exactly `1` at `z = 1`.
pub fn f_map(z: ComplexScalar) -> ComplexScalar {
    let s = s_map(z);
    2.0 / (1.0 + s) - 1.0
}

/// `g(z) = 1 - 2 sqrt(2 (1 - z))`.
pub fn g_map(z: ComplexScalar) -> ComplexScalar {
    1.0 - 2.0 * principal_sqrt(2.0 * (1.0 - z))
}

fn check_radius(r: f64) -> Result<()> {
    if !r.is_finite() {
        return Err(Error::NonFinite);
    }
    if r < 0.0 {
        return Err(Error::Domain("R must be nonnegative"));
    }
    Ok(())
}

/// Lower-bound constant for `|f(z) - 1| / |1 - g(z)|`, nonincreasing in `R`.
pub fn c_r(r: f64) -> Result<f64> {
    check_radius(r)?;
    let denom = if r <= 1.0 {
        1.0 / (2.0 - r).sqrt() + r.sqrt()
    } else {
        1.0 / r.sqrt() + r.sqrt()
    };
    Ok(1.0 / (SQRT_2 * denom))
}

/// `c*_R = c_R / (1 + sqrt(R (2 + R)))`.
pub fn c_r_star(r: f64) -> Result<f64> {
    Ok(c_r(r)? / (1.0 + (r * (2.0 + r)).sqrt()))
}

/// `|f(z) - 1| / |1 - g(z)|`, evaluated directly from [`f_map`] and [`g_map`].
pub fn ratio_fg(z: ComplexScalar) -> Result<f64> {
    if !is_finite(z) {
        return Err(Error::NonFinite);
    }
    if z == c64(1.0, 0.0) {
        return Err(Error::Domain("ratio_fg is 0/0 at z = 1"));
    }
    Ok((f_map(z) - 1.0).norm() / (1.0 - g_map(z)).norm())
}

/// `p(z) = (1 + z)^(-1/2) + (1 - z)^(1/2)`.
pub fn p_map(z: ComplexScalar) -> ComplexScalar {
    1.0 / principal_sqrt(1.0 + z) + principal_sqrt(1.0 - z)
}

/// The same ratio as [`ratio_fg`] through the closed form `1 / (√2 |p(z)|)`.
pub fn ratio_via_p(z: ComplexScalar) -> Result<f64> {
    if !is_finite(z) {
        return Err(Error::NonFinite);
    }
    Ok(1.0 / (SQRT_2 * p_map(z).norm()))
}

/// Minimizer and maximizer of `sin(δ/2 + β)` over `β ∈ [0, ½ arctan|Im z|]`,
/// with `δ = |Arg(z - 1)|`. Returns `(β_m, β_M)`.
pub fn beta_interval(z: ComplexScalar) -> Result<(f64, f64)> {
    let delta = delta_of(z)?;
    Ok(beta_extremizers(delta, 0.5 * z.im.abs().atan()))
}

fn delta_of(z: ComplexScalar) -> Result<f64> {
    if !is_finite(z) {
        return Err(Error::NonFinite);
    }
    if z == c64(1.0, 0.0) {
        return Err(Error::Domain("δ = |Arg(z - 1)| is undefined at z = 1"));
    }
    Ok(principal_arg(z - 1.0)?.abs())
}

fn beta_extremizers(delta: f64, upper: f64) -> (f64, f64) {
    let half = 0.5 * delta;
    let mut candidates = [0.0, upper, f64::NAN];
    let crest = FRAC_PI_2 - half;
    if (0.0..=upper).contains(&crest) {
        candidates[2] = crest;
    }
    let mut min = (f64::INFINITY, 0.0);
    let mut max = (f64::NEG_INFINITY, 0.0);
    for beta in candidates.into_iter().filter(|b| !b.is_nan()) {
        let v = (half + beta).sin();
        if v < min.0 {
            min = (v, beta);
        }
        if v > max.0 {
            max = (v, beta);
        }
    }
    (min.1, max.1)
}

/// Bounds `lower <= 1 - |f(z)| <= upper` with `R = |z - 1|`.
pub fn lemma_bounds(z: ComplexScalar) -> Result<LemmaBounds> {
    if !is_finite(z) {
        return Err(Error::NonFinite);
    }
    if z.re < 0.0 {
        return Err(Error::Domain("lemma bounds require Re(z) >= 0"));
    }
    let delta = delta_of(z)?;
    let radius = (z - 1.0).norm();
    let (beta_m, beta_max) = beta_extremizers(delta, 0.5 * z.im.abs().atan());
    let scale = (1.0 - g_map(z)).norm();
    let lower = c_r_star(radius)? * (0.5 * delta + beta_m).sin() * scale;
    let upper = (0.5 * delta + beta_max).sin() * scale;
    Ok(LemmaBounds {
        lower,
        upper,
        delta,
        radius,
        beta_m,
        beta_max,
    })
}
