//! Sparse complex successive overrelaxation (SOR) with optimal complex
//! relaxation parameters.
//!
//! The crate is organised bottom-up:
//!
//! * [`complex`] – principal-branch argument and square root.
//! * [`analysis`] – the scalar maps `f`, `g`, the constants `c_R`, `c*_R`
//!   and the two-sided bounds on `1 - |f(z)|`.
//! * [`spectra`] – optimal `ω` for a Jacobi spectrum on a symmetric complex
//!   segment `[-μ̃, μ̃]`, the resulting SOR spectral radius and its bounds.
//! * [`sparse`] / [`sor`] / [`dense`] – CSR storage, Jacobi and SOR sweeps,
//!   power iteration and a dense eigenvalue oracle for small systems.
//! * [`helmholtz`] – the damped Helmholtz 5-point model problem.
//! * [`harness`] / [`verify`] – table and curve experiments and the
//!   randomized property runner used by the `zsor` CLI.

pub mod analysis;
pub mod complex;
pub mod dense;
pub mod error;
pub mod harness;
pub mod helmholtz;
pub mod rng;
pub mod sor;
pub mod sparse;
pub mod spectra;
pub mod verify;

pub use analysis::LemmaBounds;
pub use complex::ComplexScalar;
pub use error::{Error, Result};
pub use harness::{ExperimentSpec, TableRow};
pub use helmholtz::HelmholtzParams;
pub use sor::{ConvergenceLog, SorParams};
pub use sparse::SparseMatrix;
pub use spectra::{BoundReport, SegmentSpectrum};
