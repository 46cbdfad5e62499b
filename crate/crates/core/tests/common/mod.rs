#![allow(dead_code)]

use dirac_qca::numeric::{c64, CMatrix};
use dirac_qca::{Complex64, SpinorState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Dense step written out by hand on a ring of `n` sites:
/// `U|j,+> = s|j-1,+> - ic|j,->` and `U|j,-> = s|j+1,-> - ic|j,+>`.
pub fn step_matrix(theta: f64, n: usize) -> CMatrix {
    let (c, s) = (theta.cos(), theta.sin());
    let mut u = CMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        let (plus, minus) = (2 * j, 2 * j + 1);
        u[(2 * ((j + n - 1) % n), plus)] += c64(s, 0.0);
        u[(minus, plus)] += c64(0.0, -c);
        u[(2 * ((j + 1) % n) + 1, minus)] += c64(s, 0.0);
        u[(plus, minus)] += c64(0.0, -c);
    }
    u
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_amplitudes(rng: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..len).map(|_| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / norm).collect()
}

pub fn random_spinor(rng: &mut ChaCha8Rng, n_sites: usize) -> SpinorState {
    SpinorState::from_amplitudes(random_amplitudes(rng, 2 * n_sites)).unwrap()
}

pub fn matvec(m: &CMatrix, v: &[Complex64]) -> Vec<Complex64> {
    (m * nalgebra::DVector::from_column_slice(v)).as_slice().to_vec()
}
