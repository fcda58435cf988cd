//! Damped Helmholtz model problem `-Δu - (1 - iα) k² u = f` on the unit
//! square with Dirichlet boundaries, discretized by the 5-point stencil on
//! an `N x N` interior grid with `h = 1 / (N + 1)`.
//!
//! Unknowns are numbered lexicographically (row-major), which makes the
//! matrix consistently ordered 2-cyclic. The assembled matrix is the
//! `h²`-scaled stencil: diagonal `4 - (1 - iα) k² h²`, neighbours `-1`.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use crate::complex::{c64, principal_arg, ComplexScalar};
use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;
use crate::spectra::SegmentSpectrum;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelmholtzParams {
    n: usize,
    k: f64,
    alpha: f64,
}

impl HelmholtzParams {
    pub fn new(n: usize, k: f64, alpha: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("grid needs N >= 1".into()));
        }
        if !k.is_finite() || !alpha.is_finite() {
            return Err(Error::NonFinite);
        }
        if k < 0.0 || alpha < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "k and alpha must be nonnegative, got k={k}, alpha={alpha}"
            )));
        }
        Ok(Self { n, k, alpha })
    }

    /// Grid points per direction.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn h(&self) -> f64 {
        1.0 / (self.n + 1) as f64
    }

    /// Number of unknowns, `N²`.
    pub fn dim(&self) -> usize {
        self.n * self.n
    }

    /// `γ = (1 - iα) k² / 4`.
    pub fn gamma(&self) -> ComplexScalar {
        c64(1.0, -self.alpha) * (self.k * self.k / 4.0)
    }

    /// `true` when `kh <= π/5`, the usual guard against pollution error.
    pub fn pollution_ok(&self) -> bool {
        self.k * self.h() <= PI / 5.0
    }

    /// Scaled diagonal entry `4 - (1 - iα) k² h²`.
    pub fn diagonal(&self) -> ComplexScalar {
        let h2 = self.h() * self.h();
        4.0 - c64(1.0, -self.alpha) * (self.k * self.k * h2)
    }

    fn checked_diagonal(&self) -> Result<ComplexScalar> {
        let d = self.diagonal();
        if d == c64(0.0, 0.0) {
            return Err(Error::SingularDiagonal { row: 0 });
        }
        Ok(d)
    }

    /// Assembles the `N² x N²` matrix in lexicographic order.
    pub fn assemble(&self) -> Result<SparseMatrix> {
        let diag = self.checked_diagonal()?;
        let n = self.n;
        let dim = n * n;
        let neg = c64(-1.0, 0.0);
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut col_idx = Vec::with_capacity(5 * dim);
        let mut values = Vec::with_capacity(5 * dim);
        row_ptr.push(0);
        for i in 0..n {
            for j in 0..n {
                let p = i * n + j;
                let mut push = |col: usize, v: ComplexScalar| {
                    col_idx.push(col);
                    values.push(v);
                };
                if i > 0 {
                    push(p - n, neg);
                }
                if j > 0 {
                    push(p - 1, neg);
                }
                push(p, diag);
                if j + 1 < n {
                    push(p + 1, neg);
                }
                if i + 1 < n {
                    push(p + n, neg);
                }
                row_ptr.push(col_idx.len());
            }
        }
        SparseMatrix::from_csr(dim, row_ptr, col_idx, values)
    }

    /// `λ_{j,ℓ} = 2 (cos(jπh) + cos(ℓπh)) / (4 - (1 - iα) k² h²)` for
    /// `1 <= j, ℓ <= N`, in row-major `(j, ℓ)` order.
    pub fn closed_form_jacobi_eigs(&self) -> Result<Vec<ComplexScalar>> {
        let d = self.checked_diagonal()?;
        let h = self.h();
        let cosines: Vec<f64> = (1..=self.n).map(|j| (j as f64 * PI * h).cos()).collect();
        Ok(cosines
            .iter()
            .flat_map(|&cj| cosines.iter().map(move |&cl| 2.0 * (cj + cl) / d))
            .collect())
    }

    /// `μ̃ = cos(πh) / (1 - γh²)`, normalized.
    pub fn mu_tilde(&self) -> Result<SegmentSpectrum> {
        let h = self.h();
        let denom = 1.0 - self.gamma() * (h * h);
        if denom == c64(0.0, 0.0) {
            return Err(Error::Domain("1 - γh² vanishes"));
        }
        SegmentSpectrum::normalize((PI * h).cos() / denom)
    }

    /// Exact `|μ̃ - 1|`, `|Arg(μ̃ - 1)|` beside their leading-order forms
    /// `(k²/4) sqrt(α² + (1 - 2π²/k²)²) h²` and `arctan|α / (1 - 2π²/k²)|`.
    pub fn mu_diagnostics(&self) -> Result<MuDiagnostics> {
        if self.k <= 0.0 {
            return Err(Error::Domain("mu diagnostics need k > 0"));
        }
        let mu = self.mu_tilde()?.mu_tilde();
        let h = self.h();
        let k2 = self.k * self.k;
        let shape = 1.0 - 2.0 * PI * PI / k2;
        let leading_gap = k2 / 4.0 * self.alpha.hypot(shape) * h * h;
        let degenerate_arg = shape == 0.0;
        let leading_arg = if degenerate_arg {
            FRAC_PI_2
        } else {
            (self.alpha / shape).abs().atan()
        };
        Ok(MuDiagnostics {
            exact_gap: (mu - 1.0).norm(),
            exact_arg: principal_arg(mu - 1.0)?.abs(),
            leading_gap,
            leading_arg,
            degenerate_arg,
        })
    }

    /// Small-`α`, small-`h` rate `αkh / √2`.
    pub fn expected_rate(&self) -> Result<f64> {
        if !(self.k > 0.0 && self.alpha > 0.0) {
            return Err(Error::Domain("expected rate needs k > 0 and alpha > 0"));
        }
        Ok(self.alpha * self.k * self.h() / SQRT_2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuDiagnostics {
    pub exact_gap: f64,
    pub exact_arg: f64,
    pub leading_gap: f64,
    pub leading_arg: f64,
    /// Set when `k² = 2π²`, where the leading arg is the limit `π/2`.
    pub degenerate_arg: bool,
}
