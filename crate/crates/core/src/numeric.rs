//! Small numerical helpers shared across modules.
//!
//! Reductions go through [`pairwise_sum`] so that results do not depend on how
//! the work was split between threads.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type Block = Matrix2<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn real(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

const PAIRWISE_LEAF: usize = 32;

/// Fixed-order pairwise summation.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= PAIRWISE_LEAF {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

pub fn pairwise_sum_complex(values: &[Complex64]) -> Complex64 {
    if values.len() <= PAIRWISE_LEAF {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum_complex(&values[..mid]) + pairwise_sum_complex(&values[mid..])
}

pub fn norm_sqr(values: &[Complex64]) -> f64 {
    let sq: Vec<f64> = values.iter().map(|z| z.norm_sqr()).collect();
    pairwise_sum(&sq)
}

/// `<a|b>` with fixed-order reduction.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let terms: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x.conj() * y).collect();
    pairwise_sum_complex(&terms)
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_slice(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `max |U^dagger U - I|`.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    let n = u.nrows();
    let prod = u.adjoint() * u;
    max_abs(&(prod - CMatrix::identity(n, n)))
}

/// `max |H - H^dagger|`.
pub fn hermiticity_residual(h: &CMatrix) -> f64 {
    max_abs(&(h - h.adjoint()))
}

/// Applies a real function to a 2x2 Hermitian matrix through its spectral
/// decomposition `H = a I + b.sigma`.
pub fn hermitian_2x2_map<F: Fn(f64) -> f64>(h: &Block, f: F) -> Block {
    let (a, b) = pauli_components(h);
    let r = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
    let (fp, fm) = (f(a + r), f(a - r));
    let mean = 0.5 * (fp + fm);
    let mut out = Block::identity() * real(mean);
    if r > 0.0 {
        let k = 0.5 * (fp - fm) / r;
        out += pauli_vector(b) * real(k);
    }
    out
}

/// Same as [`hermitian_2x2_map`] for complex-valued functions of the
/// eigenvalues.
pub fn hermitian_2x2_map_complex<F: Fn(f64) -> Complex64>(h: &Block, f: F) -> Block {
    let (a, b) = pauli_components(h);
    let r = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
    let (fp, fm) = (f(a + r), f(a - r));
    let mut out = Block::identity() * ((fp + fm) * 0.5);
    if r > 0.0 {
        out += pauli_vector(b) * ((fp - fm) * (0.5 / r));
    }
    out
}

/// Decomposes a Hermitian 2x2 matrix as `a I + b_x sigma_x + b_y sigma_y + b_z sigma_z`.
pub fn pauli_components(h: &Block) -> (f64, [f64; 3]) {
    let a = 0.5 * (h[(0, 0)].re + h[(1, 1)].re);
    let bz = 0.5 * (h[(0, 0)].re - h[(1, 1)].re);
    let off = 0.5 * (h[(0, 1)] + h[(1, 0)].conj());
    // h01 = bx - i by
    (a, [off.re, -off.im, bz])
}

pub fn pauli_vector(b: [f64; 3]) -> Block {
    Block::new(
        real(b[2]),
        c64(b[0], -b[1]),
        c64(b[0], b[1]),
        real(-b[2]),
    )
}

pub fn block_max_abs(b: &Block) -> f64 {
    b.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Von Neumann entropy (nats) of a Hermitian density matrix.
pub fn von_neumann_entropy(rho: &CMatrix) -> f64 {
    let eig = rho.clone().symmetric_eigen();
    eig.eigenvalues
        .iter()
        .filter(|&&p| p > 1e-15)
        .map(|&p| -p * p.ln())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_sum_matches_naive_on_integers() {
        let v: Vec<f64> = (1..=1000).map(|k| k as f64).collect();
        assert_eq!(pairwise_sum(&v), 500_500.0);
    }

    #[test]
    fn spectral_map_of_sigma_x() {
        let sx = pauli_vector([1.0, 0.0, 0.0]);
        let out = hermitian_2x2_map(&sx, |x| x.asin());
        let expected = sx * real(std::f64::consts::FRAC_PI_2);
        assert!(block_max_abs(&(out - expected)) < 1e-15);
    }

    #[test]
    fn pauli_components_roundtrip() {
        let h = Block::new(real(0.3), c64(0.2, -0.7), c64(0.2, 0.7), real(-1.1));
        let (a, b) = pauli_components(&h);
        let back = Block::identity() * real(a) + pauli_vector(b);
        assert!(block_max_abs(&(back - h)) < 1e-15);
    }
}
