//! Seeded random vectors.
//!
//! All randomness goes through ChaCha8 seeded from a single `u64`, so a
//! seed reproduces the same vectors on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{c64, ComplexScalar};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Real entries uniform on `[0, 1)`, stored as complex numbers.
pub fn uniform_real_vector(n: usize, seed: u64) -> Vec<ComplexScalar> {
    let mut rng = seeded(seed);
    (0..n).map(|_| c64(rng.gen::<f64>(), 0.0)).collect()
}

/// Real and imaginary parts independently uniform on `[-1, 1)`.
pub fn uniform_complex_vector(rng: &mut SeededRng, n: usize) -> Vec<ComplexScalar> {
    (0..n)
        .map(|_| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        assert_eq!(uniform_real_vector(16, 7), uniform_real_vector(16, 7));
        assert_ne!(uniform_real_vector(16, 7), uniform_real_vector(16, 8));
        assert!(uniform_real_vector(100, 1)
            .iter()
            .all(|z| z.im == 0.0 && (0.0..1.0).contains(&z.re)));
    }
}
