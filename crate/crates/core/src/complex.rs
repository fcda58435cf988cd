//! Principal branches of `Arg` and `sqrt`.
//!
//! `Arg` takes values in `(-π, π]` and the square root has its branch cut on
//! the negative real axis, with points on the cut mapped to the root with
//! positive imaginary part (regardless of the sign of a zero imaginary part).

use std::f64::consts::PI;

use crate::error::{Error, Result};

pub type ComplexScalar = num_complex::Complex64;

#[inline]
pub fn c64(re: f64, im: f64) -> ComplexScalar {
    ComplexScalar::new(re, im)
}

#[inline]
pub fn is_finite(z: ComplexScalar) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Principal argument in `(-π, π]`.
pub fn principal_arg(z: ComplexScalar) -> Result<f64> {
    if !is_finite(z) {
        return Err(Error::NonFinite);
    }
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::Domain("Arg(0) is undefined"));
    }
    let a = z.im.atan2(z.re);
    // atan2(-0.0, x<0) = -π; the cut belongs to the upper half plane.
    Ok(if a <= -PI { PI } else { a })
}

/// Principal square root: `Re(w) >= 0`, and `Im(w) > 0` on the negative
/// real axis.
pub fn principal_sqrt(z: ComplexScalar) -> ComplexScalar {
    if z.re == 0.0 && z.im == 0.0 {
        return ComplexScalar::new(0.0, 0.0);
    }
    let m = z.norm();
    if z.re >= 0.0 {
        let t = (0.5 * (m + z.re)).sqrt();
        ComplexScalar::new(t, z.im / (2.0 * t))
    } else {
        let t = (0.5 * (m - z.re)).sqrt();
        let re = z.im.abs() / (2.0 * t);
        ComplexScalar::new(re, if z.im < 0.0 { -t } else { t })
    }
}
