//! Dense complex matrices and an eigenvalue solver for small systems.
//!
//! Eigenvalues come from a Householder reduction to upper Hessenberg form
//! followed by single-shift complex QR sweeps (Wilkinson shift, Givens
//! rotations, exceptional shifts every tenth stalled sweep). Used as an
//! oracle for iteration matrices of at most [`MAX_DENSE_DIM`] rows.

use crate::complex::{c64, ComplexScalar};
use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

pub const MAX_DENSE_DIM: usize = 256;

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<ComplexScalar>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![ComplexScalar::default(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = c64(1.0, 0.0);
        }
        m
    }

    pub fn from_sparse(a: &SparseMatrix) -> Self {
        let mut m = Self::zeros(a.dim());
        for i in 0..a.dim() {
            let (cols, vals) = a.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// All eigenvalues, in no particular order.
    pub fn eigenvalues(&self) -> Result<Vec<ComplexScalar>> {
        let mut h = self.clone();
        h.reduce_to_hessenberg();
        h.hessenberg_qr()
    }

    pub fn spectral_radius(&self) -> Result<f64> {
        Ok(self
            .eigenvalues()?
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max))
    }

    /// Spectral radius after replacing each cluster of eigenvalues closer
    /// than `CLUSTER_TOL * max(1, |z|)` by its mean.
    ///
    /// A defective eigenvalue of multiplicity m comes back from QR split by
    /// about eps^(1/m); the cluster mean is accurate to roundoff.
    pub fn clustered_spectral_radius(&self) -> Result<f64> {
        Ok(cluster_means(&self.eigenvalues()?)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max))
    }

    fn reduce_to_hessenberg(&mut self) {
        let n = self.n;
        if n < 3 {
            return;
        }
        let mut v = vec![ComplexScalar::default(); n];
        for k in 0..n - 2 {
            let alpha_norm = (k + 1..n)
                .map(|i| self[(i, k)].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if alpha_norm == 0.0 {
                continue;
            }
            let x0 = self[(k + 1, k)];
            let phase = if x0.norm() == 0.0 {
                c64(1.0, 0.0)
            } else {
                x0 / x0.norm()
            };
            // v = x + phase ‖x‖ e1 avoids cancellation in the leading entry.
            for i in k + 1..n {
                v[i] = self[(i, k)];
            }
            v[k + 1] += phase * alpha_norm;
            let vnorm = (k + 1..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
            for vi in &mut v[k + 1..n] {
                *vi /= vnorm;
            }
            // A <- (I - 2vv*) A
            for j in 0..n {
                let s: ComplexScalar = (k + 1..n).map(|i| v[i].conj() * self[(i, j)]).sum();
                for i in k + 1..n {
                    self[(i, j)] -= 2.0 * v[i] * s;
                }
            }
            // A <- A (I - 2vv*)
            for i in 0..n {
                let s: ComplexScalar = (k + 1..n).map(|j| self[(i, j)] * v[j]).sum();
                for j in k + 1..n {
                    self[(i, j)] -= 2.0 * s * v[j].conj();
                }
            }
            for i in k + 2..n {
                self[(i, k)] = ComplexScalar::default();
            }
        }
    }

    fn hessenberg_qr(mut self) -> Result<Vec<ComplexScalar>> {
        let n = self.n;
        let mut eig = vec![ComplexScalar::default(); n];
        if n == 0 {
            return Ok(eig);
        }
        let anorm = self
            .data
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let max_sweeps = 60 * n.max(1);
        let mut sweeps = 0usize;
        let mut stalled = 0usize;
        let mut hi = n - 1;
        let mut rot = Vec::with_capacity(n);
        loop {
            if hi == 0 {
                eig[0] = self[(0, 0)];
                break;
            }
            // Find the start of the unreduced block ending at `hi`.
            let mut lo = hi;
            while lo > 0 {
                let sub = self[(lo, lo - 1)].norm();
                let mut scale = self[(lo - 1, lo - 1)].norm() + self[(lo, lo)].norm();
                if scale == 0.0 {
                    scale = anorm;
                }
                if sub <= f64::EPSILON * scale {
                    self[(lo, lo - 1)] = ComplexScalar::default();
                    break;
                }
                lo -= 1;
            }
            if lo == hi {
                eig[hi] = self[(hi, hi)];
                hi -= 1;
                stalled = 0;
                continue;
            }

            sweeps += 1;
            stalled += 1;
            if sweeps > max_sweeps {
                return Err(Error::EigenNoConvergence);
            }

            let shift = if stalled % 10 == 0 {
                self[(hi, hi)] + c64(0.75, 0.25) * self[(hi, hi - 1)].norm()
            } else {
                wilkinson_shift(
                    self[(hi - 1, hi - 1)],
                    self[(hi - 1, hi)],
                    self[(hi, hi - 1)],
                    self[(hi, hi)],
                )
            };

            for i in lo..=hi {
                self[(i, i)] -= shift;
            }
            rot.clear();
            for k in lo..hi {
                let (c, s) = givens(self[(k, k)], self[(k + 1, k)]);
                rot.push((c, s));
                for j in k..=hi {
                    let x = self[(k, j)];
                    let y = self[(k + 1, j)];
                    self[(k, j)] = c * x + s * y;
                    self[(k + 1, j)] = -s.conj() * x + c * y;
                }
            }
            for (idx, &(c, s)) in rot.iter().enumerate() {
                let k = lo + idx;
                for i in lo..=(k + 1).min(hi) {
                    let x = self[(i, k)];
                    let y = self[(i, k + 1)];
                    self[(i, k)] = x * c + y * s.conj();
                    self[(i, k + 1)] = -x * s + y * c;
                }
            }
            for i in lo..=hi {
                self[(i, i)] += shift;
            }
        }
        Ok(eig)
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = ComplexScalar;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &ComplexScalar {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut ComplexScalar {
        &mut self.data[i * self.n + j]
    }
}

/// Rotation `[[c, s], [-s̄, c]]` (real `c`) mapping `(a, b)` to `(r, 0)`.
fn givens(a: ComplexScalar, b: ComplexScalar) -> (f64, ComplexScalar) {
    let an = a.norm();
    if b.norm() == 0.0 {
        return (1.0, ComplexScalar::default());
    }
    if an == 0.0 {
        return (0.0, c64(1.0, 0.0));
    }
    let r = an.hypot(b.norm());
    (an / r, (a / an) * b.conj() / r)
}

/// Eigenvalue of `[[a, b], [c, d]]` closer to `d`.
fn wilkinson_shift(
    a: ComplexScalar,
    b: ComplexScalar,
    c: ComplexScalar,
    d: ComplexScalar,
) -> ComplexScalar {
    let half = 0.5 * (a - d);
    let disc = crate::complex::principal_sqrt(half * half + b * c);
    let mean = 0.5 * (a + d);
    let l1 = mean + disc;
    let l2 = mean - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

fn check_size(a: &SparseMatrix) -> Result<()> {
    if a.dim() > MAX_DENSE_DIM {
        return Err(Error::TooLarge {
            n: a.dim(),
            max: MAX_DENSE_DIM,
        });
    }
    Ok(())
}

/// Explicit SOR iteration matrix `L_ω = (D - ωE)^{-1} (ωF + (1 - ω) D)`.
pub fn sor_iteration_matrix(a: &SparseMatrix, omega: ComplexScalar) -> Result<DenseMatrix> {
    check_size(a)?;
    let n = a.dim();
    let dense = DenseMatrix::from_sparse(a);
    // E = -strict lower(A), F = -strict upper(A).
    let mut rhs = DenseMatrix::zeros(n);
    for i in 0..n {
        rhs[(i, i)] = (1.0 - omega) * dense[(i, i)];
        for j in i + 1..n {
            rhs[(i, j)] = -omega * dense[(i, j)];
        }
    }
    // Forward substitution with the lower-triangular (D - ωE) = D + ω·lower(A).
    let mut l = DenseMatrix::zeros(n);
    for col in 0..n {
        for i in 0..n {
            let mut acc = rhs[(i, col)];
            for k in 0..i {
                acc -= omega * dense[(i, k)] * l[(k, col)];
            }
            l[(i, col)] = acc / dense[(i, i)];
        }
    }
    Ok(l)
}

/// Explicit Jacobi matrix `J = I - D^{-1} A`.
pub fn jacobi_iteration_matrix(a: &SparseMatrix) -> Result<DenseMatrix> {
    check_size(a)?;
    let n = a.dim();
    let mut j = DenseMatrix::identity(n);
    for i in 0..n {
        let d = a.diag(i);
        let (cols, vals) = a.row(i);
        for (&c, &v) in cols.iter().zip(vals) {
            j[(i, c)] -= v / d;
        }
    }
    Ok(j)
}

/// `ρ(L_ω)` from all eigenvalues of the explicitly formed iteration matrix.
pub fn dense_spectral_radius(a: &SparseMatrix, omega: ComplexScalar) -> Result<f64> {
    sor_iteration_matrix(a, omega)?.clustered_spectral_radius()
}

pub const CLUSTER_TOL: f64 = 1e-6;

/// Greedy single-link clustering; returns one mean per cluster.
pub fn cluster_means(eigs: &[ComplexScalar]) -> Vec<ComplexScalar> {
    let mut assigned = vec![false; eigs.len()];
    let mut means = Vec::new();
    for i in 0..eigs.len() {
        if assigned[i] {
            continue;
        }
        assigned[i] = true;
        let mut members = vec![eigs[i]];
        let mut head = 0;
        while head < members.len() {
            let z = members[head];
            head += 1;
            for j in 0..eigs.len() {
                if !assigned[j] && (eigs[j] - z).norm() <= CLUSTER_TOL * z.norm().max(1.0) {
                    assigned[j] = true;
                    members.push(eigs[j]);
                }
            }
        }
        means.push(members.iter().sum::<ComplexScalar>() / members.len() as f64);
    }
    means
}

/// Eigenvalues of the Jacobi matrix of `a`.
pub fn dense_jacobi_eigenvalues(a: &SparseMatrix) -> Result<Vec<ComplexScalar>> {
    jacobi_iteration_matrix(a)?.eigenvalues()
}

/// Greedy multiset matching: the largest distance between paired entries,
/// or `None` when the lengths differ.
pub fn multiset_distance(a: &[ComplexScalar], b: &[ComplexScalar]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.sort_by(|&i, &j| {
        a[i].re
            .total_cmp(&a[j].re)
            .then(a[i].im.total_cmp(&a[j].im))
    });
    for i in order {
        let (k, d) = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, z)| (k, (a[i] - z).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))?;
        used[k] = true;
        worst = worst.max(d);
    }
    Some(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> ComplexScalar {
        c64(x, 0.0)
    }

    fn sorted_by_re(mut v: Vec<ComplexScalar>) -> Vec<ComplexScalar> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn triangular_eigenvalues_are_diagonal() {
        let mut m = DenseMatrix::zeros(4);
        for i in 0..4 {
            m[(i, i)] = c64(i as f64, -(i as f64));
            for j in i + 1..4 {
                m[(i, j)] = c64(1.0, 0.5);
            }
        }
        let e = m.eigenvalues().unwrap();
        let want: Vec<_> = (0..4).map(|i| c64(i as f64, -(i as f64))).collect();
        assert!(multiset_distance(&e, &want).unwrap() < 1e-12);
    }

    #[test]
    fn rotation_has_imaginary_pair() {
        let mut m = DenseMatrix::zeros(2);
        m[(0, 1)] = r(-1.0);
        m[(1, 0)] = r(1.0);
        let e = sorted_by_re(m.eigenvalues().unwrap());
        assert!(multiset_distance(&e, &[c64(0.0, 1.0), c64(0.0, -1.0)]).unwrap() < 1e-14);
    }

    #[test]
    fn second_difference_spectrum() {
        // tridiag(-1, 2, -1) of size n has eigenvalues 2 - 2cos(kπ/(n+1)).
        let n = 12;
        let mut m = DenseMatrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = r(2.0);
            if i + 1 < n {
                m[(i, i + 1)] = r(-1.0);
                m[(i + 1, i)] = r(-1.0);
            }
        }
        let want: Vec<_> = (1..=n)
            .map(|k| r(2.0 - 2.0 * (k as f64 * std::f64::consts::PI / (n + 1) as f64).cos()))
            .collect();
        assert!(multiset_distance(&m.eigenvalues().unwrap(), &want).unwrap() < 1e-12);
    }

    #[test]
    fn companion_matrix_roots() {
        // (z - 1)(z - 2i)(z + 3)(z - 0.5 + 0.5i) via its companion matrix.
        let roots = [r(1.0), c64(0.0, 2.0), r(-3.0), c64(0.5, -0.5)];
        let mut coeffs = vec![r(1.0)];
        for &z in &roots {
            let mut next = vec![ComplexScalar::default(); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k] += c;
                next[k + 1] -= c * z;
            }
            coeffs = next;
        }
        let n = roots.len();
        let mut m = DenseMatrix::zeros(n);
        for j in 0..n {
            m[(0, j)] = -coeffs[j + 1];
        }
        for i in 1..n {
            m[(i, i - 1)] = r(1.0);
        }
        assert!(multiset_distance(&m.eigenvalues().unwrap(), &roots).unwrap() < 1e-12);
    }

    #[test]
    fn diagonal_sor_radius() {
        let a = SparseMatrix::from_triplets(
            3,
            &[(0, 0, r(2.0)), (1, 1, r(3.0)), (2, 2, c64(1.0, 1.0))],
        )
        .unwrap();
        let omega = c64(1.3, -0.2);
        let rho = dense_spectral_radius(&a, omega).unwrap();
        assert!((rho - (1.0 - omega).norm()).abs() < 1e-15);
    }

    #[test]
    fn size_guard() {
        let n = MAX_DENSE_DIM + 1;
        let t: Vec<_> = (0..n).map(|i| (i, i, r(1.0))).collect();
        let a = SparseMatrix::from_triplets(n, &t).unwrap();
        assert!(matches!(
            dense_spectral_radius(&a, r(1.0)),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn multiset_distance_mismatch() {
        assert!(multiset_distance(&[r(1.0)], &[]).is_none());
        assert_eq!(
            multiset_distance(&[r(1.0), r(2.0)], &[r(2.0), r(1.0)]),
            Some(0.0)
        );
    }

    #[test]
    fn jordan_block_radius() {
        // [[l, 1], [0, l]] perturbed by d in the corner splits by 2 sqrt(d).
        let l = c64(0.3, 0.4);
        let mut m = DenseMatrix::zeros(2);
        m[(0, 0)] = l;
        m[(1, 1)] = l;
        m[(0, 1)] = r(1.0);
        m[(1, 0)] = r(1e-14);
        let e = m.eigenvalues().unwrap();
        assert!((e[0] - e[1]).norm() > 1e-9);
        assert!((m.clustered_spectral_radius().unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn clusters_keep_separated_values() {
        let means = cluster_means(&[r(1.0), r(1.0 + 1e-9), r(-1.0), r(0.5)]);
        assert_eq!(means.len(), 3);
        assert!((means[0] - r(1.0 + 5e-10)).norm() < 1e-15);
    }
}
