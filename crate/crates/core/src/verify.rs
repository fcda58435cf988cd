//! Randomized property runner behind `zsor verify`.
//!
//! Each property records how many cases it checked and the worst slack it
//! saw: the distance to its tolerance boundary, negative on violation.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};
use std::fmt;

use rand::Rng;

use crate::analysis::{c_r, c_r_star, f_map, g_map, lemma_bounds, on_slit, ratio_fg, ratio_via_p};
use crate::complex::{c64, principal_sqrt, ComplexScalar};
use crate::dense::{dense_jacobi_eigenvalues, dense_spectral_radius, multiset_distance};
use crate::helmholtz::HelmholtzParams;
use crate::rng::{self, SeededRng};
use crate::sor::sor_sweep;
use crate::spectra::{real_optimal_omega, SegmentSpectrum};

/// Roundoff slack for every inequality.
pub const SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub checked: usize,
    pub worst_slack: f64,
}

impl PropertyOutcome {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checked: 0,
            worst_slack: f64::INFINITY,
        }
    }

    fn record(&mut self, slack: f64) {
        self.checked += 1;
        if slack.is_nan() || slack < self.worst_slack {
            self.worst_slack = if slack.is_nan() {
                f64::NEG_INFINITY
            } else {
                slack
            };
        }
    }

    /// `a <= b` within `tol`.
    fn le(&mut self, a: f64, b: f64, tol: f64) {
        self.record(b + tol - a);
    }

    /// `|a - b| <= tol`.
    fn close(&mut self, a: f64, b: f64, tol: f64) {
        self.record(tol - (a - b).abs());
    }

    pub fn passed(&self) -> bool {
        self.checked > 0 && self.worst_slack >= 0.0
    }
}

impl fmt::Display for PropertyOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<44} checked={:<8} worst_slack={:.3e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.checked,
            self.worst_slack
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub samples: usize,
    pub seed: u64,
    pub properties: Vec<PropertyOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyOutcome::passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "zsor verify: samples={} seed={}",
            self.samples, self.seed
        )?;
        for p in &self.properties {
            writeln!(f, "{p}")?;
        }
        write!(
            f,
            "{}",
            if self.passed() {
                "ALL PASS"
            } else {
                "FAILURES"
            }
        )
    }
}

/// Uniform sample from `{Re z >= 0, |z - 1| <= radius}` by rejection.
pub fn sample_right_disk(rng: &mut SeededRng, radius: f64) -> ComplexScalar {
    loop {
        let z = c64(
            rng.gen_range(1.0 - radius..=1.0 + radius),
            rng.gen_range(-radius..=radius),
        );
        if z.re >= 0.0 && (z - 1.0).norm() <= radius && z != c64(1.0, 0.0) && !on_slit(z) {
            return z;
        }
    }
}

/// Runs every property suite with `samples` random cases per sampled
/// property.
pub fn run(samples: usize, seed: u64) -> VerifyReport {
    let mut rng = rng::seeded(seed);
    let properties = vec![
        branch_consistency(&mut rng, samples),
        ratio_between_c_r_and_one(&mut rng, samples),
        gap_bracketed(&mut rng, samples),
        modulus_bound(&mut rng, samples),
        constants_monotone(),
        g_identity(&mut rng, samples),
        ratio_identity(&mut rng, samples),
        omega_consistency(&mut rng, samples),
        theorem_sandwich(&mut rng, samples),
        asymptotic_tightness(),
        real_case_regression(),
        dense_oracle(),
        jacobi_spectrum(),
        sweep_properties(&mut rng),
        helmholtz_structure(),
        taylor_consistency(),
    ];
    VerifyReport {
        samples,
        seed,
        properties,
    }
}

fn branch_consistency(rng: &mut SeededRng, samples: usize) -> PropertyOutcome {
    let mut p = PropertyOutcome::new("principal sqrt: w^2 = z, Re w >= 0");
    for _ in 0..samples {
        let z = c64(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        let w = principal_sqrt(z);
        p.le(0.0, w.re, 0.0);
        p.le((w * w - z).norm(), 0.0, 1e-14 * z.norm());
    }
    p
}

fn ratio_between_c_r_and_one(rng: &mut SeededRng, samples: usize) -> PropertyOutcome {
    let mut p = PropertyOutcome::new("c_R <= |f-1|/|1-g| <= 1");
    for _ in 0..samples {
        let z = sample_right_disk(rng, 2.0);
        let r = ratio_fg(z).expect("z != 1");
        p.le(c_r((z - 1.0).norm()).expect("R >= 0"), r, SLACK);
        p.le(r, 1.0, SLACK);
    }
    p
}

fn gap_bracketed(rng: &mut SeededRng, samples: usize) -> PropertyOutcome {
    let mut p = PropertyOutcome::new("lower <= 1-|f| <= upper");
    for _ in 0..samples {
        let z = sample_right_disk(rng, 2.0);
        let b = lemma_bounds(z).expect("z in domain");
        let gap = 1.0 - f_map(z).norm();
        p.le(b.lower, gap, SLACK);
        p.le(gap, b.upper, SLACK);
    }
    p
}

fn modulus_bound(rng: &mut SeededRng, samples: usize) -> PropertyOutcome {
    let mut p = PropertyOutcome::new("|f| <= 1, equality exactly on the slit");
    for _ in 0..samples {
        let z = sample_right_disk(rng, 2.0);
        let m = f_map(z).norm();
        p.le(m, 1.0, SLACK);
        // Strictly inside the unit disk off the slit.
        p.record(if m < 1.0 { 1.0 - m } else { -1.0 });
    }
    for i in 0..=100 {
        let z = c64(1.0 + 0.02 * i as f64, 0.0);
        p.close(f_map(z).norm(), 1.0, SLACK);
    }
    p
}

fn constants_monotone() -> PropertyOutcome {
    let mut p = PropertyOutcome::new("c_R, c*_R nonincreasing; c*_R <= c_R");
    let grid: Vec<f64> = (0..1000).map(|i| i as f64 * 5e-3).collect();
    for w in grid.windows(2) {
        let (a, b) = (c_r(w[0]).unwrap(), c_r(w[1]).unwrap());
        let (sa, sb) = (c_r_star(w[0]).unwrap(), c_r_star(w[1]).unwrap());
        p.le(b, a, 0.0);
        p.le(sb, sa, 0.0);
        p.le(sa, a, 0.0);
    }
    p.close(c_r(0.0).unwrap(), 1.0, 1e-15);
    p.close(c_r_star(0.0).unwrap(), 1.0, 1e-15);
    p
}

fn g_identity(rng: &mut SeededRng, samples: usize) -> PropertyOutcome {
    let mut p = PropertyOutcome::new("|1-g(z)| = 2*sqrt(2)*sqrt|1-z|");
    for _ in 0..samples {
        let z = c64(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        let lhs = (1.0 - g_map(z)).norm();
        let rhs = 2.0 * SQRT_2 * (1.0 - z).norm().sqrt();
        p.close(lhs, rhs, 1e-13 * rhs);
    }
    p
}

fn ratio_identity(rng: &mut SeededRng, samples: usize) -> PropertyOutcome {
    let mut p = PropertyOutcome::new("|f-1|/|1-g| = 1/(sqrt(2)|p(z)|)");
    for _ in 0..samples {
        let z = sample_right_disk(rng, 2.0);
        let closed = ratio_via_p(z).unwrap();
        p.close(ratio_fg(z).unwrap(), closed, 1e-12 * closed);
    }
    p
}

fn omega_consistency(rng: &mut SeededRng, samples: usize) -> PropertyOutcome {
    let mut p = PropertyOutcome::new("|1-omega_opt| = |f(mu)|");
    for _ in 0..samples {
        let mu = c64(rng.gen_range(0.0..3.0), rng.gen_range(-2.0..2.0));
        let rho = SegmentSpectrum::normalize(mu)
            .unwrap()
            .optimal_rho()
            .unwrap();
        p.close(rho, f_map(mu).norm(), 1e-14);
    }
    p
}

fn theorem_sandwich(rng: &mut SeededRng, samples: usize) -> PropertyOutcome {
    let mut p = PropertyOutcome::new("lower_gap <= 1-rho <= upper_gap, rho < 1");
    for _ in 0..samples {
        let mu = sample_right_disk(rng, 1.0);
        let r = SegmentSpectrum::normalize(mu)
            .unwrap()
            .theorem_bounds()
            .unwrap();
        let gap = 1.0 - r.rho;
        p.le(r.lower_gap, gap, SLACK);
        p.le(gap, r.upper_gap, SLACK);
        p.record(if r.rho < 1.0 { 1.0 - r.rho } else { -1.0 });
    }
    p
}

fn asymptotic_tightness() -> PropertyOutcome {
    let mut p = PropertyOutcome::new("(1-rho)/rate within 10*sqrt(r) of 1");
    for theta in [PI, FRAC_PI_2, FRAC_PI_4] {
        for r in [1e-2, 1e-4, 1e-6] {
            let mu = 1.0 + r * c64(theta.cos(), theta.sin());
            let s = SegmentSpectrum::normalize(mu).unwrap();
            let ratio = (1.0 - s.optimal_rho().unwrap()) / s.asymptotic_rate().unwrap();
            p.close(ratio, 1.0, 10.0 * r.sqrt());
        }
    }
    p
}

fn real_case_regression() -> PropertyOutcome {
    let mut p = PropertyOutcome::new("real mu: classical omega and rate");
    for mu in [0.5, 0.8, 0.9, 0.99, 0.999] {
        let s = SegmentSpectrum::real(mu).unwrap();
        let w = s.optimal_omega().unwrap();
        p.close((w - real_optimal_omega(mu)).norm(), 0.0, 1e-14);
        p.close(
            s.asymptotic_rate().unwrap() / (2.0 * SQRT_2 * (1.0 - mu).sqrt()),
            1.0,
            0.0,
        );
    }
    let s = SegmentSpectrum::real(0.8).unwrap();
    p.close(s.optimal_omega().unwrap().re, 1.25, 1e-14);
    p.close(s.optimal_rho().unwrap(), 0.25, 1e-14);
    p
}

/// Small Helmholtz cases shared by the dense oracle checks.
pub fn oracle_cases() -> Vec<HelmholtzParams> {
    let mut cases = Vec::new();
    for n in [4, 6, 8] {
        for alpha in [0.0, 0.5] {
            for k in [0.0, 2.0 * PI] {
                cases.push(HelmholtzParams::new(n, k, alpha).expect("valid oracle case"));
            }
        }
    }
    cases
}

fn dense_oracle() -> PropertyOutcome {
    let mut p = PropertyOutcome::new("dense rho(L_opt) = |1-omega_opt| (N<=8)");
    for params in oracle_cases() {
        let a = params.assemble().unwrap();
        let omega = params.mu_tilde().unwrap().optimal_omega().unwrap();
        match dense_spectral_radius(&a, omega) {
            Ok(rho) => p.close(rho, (1.0 - omega).norm(), 1e-8),
            Err(_) => p.record(f64::NEG_INFINITY),
        }
    }
    p
}

fn jacobi_spectrum() -> PropertyOutcome {
    let mut p = PropertyOutcome::new("dense Jacobi = closed form, symmetric");
    for params in oracle_cases() {
        let a = params.assemble().unwrap();
        let dense = match dense_jacobi_eigenvalues(&a) {
            Ok(e) => e,
            Err(_) => {
                p.record(f64::NEG_INFINITY);
                continue;
            }
        };
        let closed = params.closed_form_jacobi_eigs().unwrap();
        p.le(
            multiset_distance(&dense, &closed).unwrap_or(f64::INFINITY),
            0.0,
            1e-10,
        );
        let negated: Vec<_> = dense.iter().map(|z| -z).collect();
        p.le(
            multiset_distance(&dense, &negated).unwrap_or(f64::INFINITY),
            0.0,
            1e-10,
        );
    }
    p
}

fn sweep_properties(rng: &mut SeededRng) -> PropertyOutcome {
    let mut p = PropertyOutcome::new("SOR sweep linear; solution is fixed point");
    let params = HelmholtzParams::new(6, 2.0 * PI, 0.5).unwrap();
    let a = params.assemble().unwrap();
    let n = a.dim();
    let omega = params.mu_tilde().unwrap().optimal_omega().unwrap();
    let zero = vec![ComplexScalar::default(); n];
    for _ in 0..20 {
        let x = rng::uniform_complex_vector(rng, n);
        let y = rng::uniform_complex_vector(rng, n);
        let (s, t) = (
            c64(rng.gen_range(-2.0..2.0), 0.3),
            c64(0.7, rng.gen_range(-2.0..2.0)),
        );
        let mut combo: Vec<_> = x.iter().zip(&y).map(|(a, b)| s * a + t * b).collect();
        let (mut sx, mut sy) = (x.clone(), y.clone());
        sor_sweep(&a, omega, &mut combo, &zero);
        sor_sweep(&a, omega, &mut sx, &zero);
        sor_sweep(&a, omega, &mut sy, &zero);
        let worst = combo
            .iter()
            .zip(sx.iter().zip(&sy))
            .map(|(c, (u, v))| (c - (s * u + t * v)).norm())
            .fold(0.0, f64::max);
        p.le(worst, 0.0, 1e-12);

        let b = a.matvec(&x).unwrap();
        let mut fixed = x.clone();
        sor_sweep(&a, omega, &mut fixed, &b);
        let scale = x.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let drift = fixed
            .iter()
            .zip(&x)
            .map(|(u, v)| (u - v).norm())
            .fold(0.0, f64::max);
        p.le(drift, 0.0, 1e-12 * scale);
    }
    p
}

fn helmholtz_structure() -> PropertyOutcome {
    let mut p = PropertyOutcome::new("Helmholtz: 2-cyclic, mu on segment, attained");
    for (n, kp, alpha) in [
        (1, 0.0, 0.0),
        (5, 2.0, 0.5),
        (16, 16.0, 0.0625),
        (33, 8.0, 0.25),
    ] {
        let params = HelmholtzParams::new(n, kp * PI, alpha).unwrap();
        p.record(if params.assemble().unwrap().verify_2cyclic().is_some() {
            1.0
        } else {
            -1.0
        });
        let mu = params.mu_tilde().unwrap().mu_tilde();
        let eigs = params.closed_form_jacobi_eigs().unwrap();
        let hit = |target: ComplexScalar| {
            eigs.iter()
                .map(|z| (z - target).norm())
                .fold(f64::INFINITY, f64::min)
        };
        p.le(hit(mu), 0.0, 1e-14);
        p.le(hit(-mu), 0.0, 1e-14);
        if mu.norm() > 0.0 {
            for z in &eigs {
                let t = z / mu;
                p.le(t.im.abs(), 0.0, SLACK);
                p.le(t.re.abs(), 1.0, SLACK);
            }
        }
    }
    p
}

fn taylor_consistency() -> PropertyOutcome {
    let mut p = PropertyOutcome::new("|mu-1| Taylor remainder = O(h^4)");
    let scaled: Vec<f64> = [40, 80, 160, 320]
        .into_iter()
        .map(|n| {
            let params = HelmholtzParams::new(n, 16.0 * PI, 0.5).unwrap();
            let d = params.mu_diagnostics().unwrap();
            (d.exact_gap - d.leading_gap).abs() / params.h().powi(4)
        })
        .collect();
    let bound = 2.0 * scaled[0];
    for s in &scaled {
        p.le(*s, bound, 0.0);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outcome_bookkeeping() {
        let mut p = PropertyOutcome::new("x");
        assert!(!p.passed());
        p.le(1.0, 2.0, 0.0);
        assert!(p.passed());
        p.close(1.0, 1.1, 1e-3);
        assert!(!p.passed());
        p.record(f64::NAN);
        assert_eq!(p.worst_slack, f64::NEG_INFINITY);
    }

    #[test]
    fn small_run_passes() {
        let report = run(2000, 3);
        for p in &report.properties {
            assert!(p.passed(), "{p}");
        }
        assert!(report.to_string().ends_with("ALL PASS"));
    }

    #[test]
    fn disk_samples_stay_in_domain() {
        let mut rng = rng::seeded(1);
        for _ in 0..1000 {
            let z = sample_right_disk(&mut rng, 2.0);
            assert!(z.re >= 0.0 && (z - 1.0).norm() <= 2.0 && !on_slit(z));
        }
    }
}
