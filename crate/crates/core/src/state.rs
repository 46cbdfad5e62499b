//! One- and two-particle amplitude containers.

use crate::error::{QcaError, Result};
use crate::numeric::{self, max_abs, CMatrix};
use crate::params::{mode_index, Component};
use num_complex::Complex64;

pub const NORM_TOL: f64 = 1e-12;

/// Single-particle amplitudes `Psi[n, alpha]` stored in flat mode order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorState {
    amps: Vec<Complex64>,
}

impl SpinorState {
    pub fn zeros(n_sites: usize) -> Self {
        Self { amps: vec![Complex64::default(); 2 * n_sites] }
    }

    /// `|n, alpha>`.
    pub fn delta(n_sites: usize, n: usize, alpha: Component) -> Result<Self> {
        let mut s = Self::zeros(n_sites);
        s.amps[mode_index(n, alpha, n_sites)?] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() || amps.len() % 2 != 0 {
            return Err(QcaError::Invalid(format!(
                "amplitude vector length {} is not a positive even number",
                amps.len()
            )));
        }
        if amps.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(QcaError::Invalid("non-finite amplitude".into()));
        }
        Ok(Self { amps })
    }

    pub fn n_sites(&self) -> usize {
        self.amps.len() / 2
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn get(&self, n: usize, alpha: Component) -> Complex64 {
        self.amps[2 * n + alpha.offset()]
    }

    pub fn norm_sqr(&self) -> f64 {
        numeric::norm_sqr(&self.amps)
    }

    pub fn normalized(mut self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(QcaError::ZeroNorm);
        }
        let inv = 1.0 / norm;
        self.amps.iter_mut().for_each(|z| *z *= inv);
        Ok(self)
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOL
    }

    /// `sum_alpha |Psi[n, alpha]|^2` per site.
    pub fn site_probabilities(&self) -> Vec<f64> {
        self.amps
            .chunks_exact(2)
            .map(|p| p[0].norm_sqr() + p[1].norm_sqr())
            .collect()
    }

    /// `(|Psi[n, +]|^2, |Psi[n, -]|^2)` per site.
    pub fn component_probabilities(&self) -> Vec<(f64, f64)> {
        self.amps
            .chunks_exact(2)
            .map(|p| (p[0].norm_sqr(), p[1].norm_sqr()))
            .collect()
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        numeric::inner(&self.amps, &other.amps)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        numeric::max_abs_diff(&self.amps, &other.amps)
    }
}

/// Antisymmetric two-particle amplitudes over flat modes.
///
/// Normalization is `sum_{i,j} |Psi_ij|^2 = 1`, which equals
/// `2 sum_{i<j} |Psi_ij|^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoParticleState {
    amps: CMatrix,
}

impl TwoParticleState {
    pub fn from_matrix(amps: CMatrix) -> Result<Self> {
        if !amps.is_square() || amps.nrows() % 2 != 0 || amps.nrows() == 0 {
            return Err(QcaError::Invalid(format!(
                "two-particle matrix must be square with even dimension, got {}x{}",
                amps.nrows(),
                amps.ncols()
            )));
        }
        let residual = max_abs(&(&amps + amps.transpose()));
        if residual > NORM_TOL {
            return Err(QcaError::NotAntisymmetric { residual });
        }
        Ok(Self { amps })
    }

    pub(crate) fn from_matrix_unchecked(amps: CMatrix) -> Self {
        Self { amps }
    }

    pub fn n_sites(&self) -> usize {
        self.amps.nrows() / 2
    }

    pub fn n_modes(&self) -> usize {
        self.amps.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.amps
    }

    pub fn into_matrix(self) -> CMatrix {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        numeric::norm_sqr(self.amps.as_slice())
    }

    pub fn antisymmetry_residual(&self) -> f64 {
        max_abs(&(&self.amps + self.amps.transpose()))
    }

    /// `|Psi_ij|^2` indexed by flat modes.
    pub fn probability_matrix(&self) -> Vec<Vec<f64>> {
        let m = self.n_modes();
        (0..m)
            .map(|i| (0..m).map(|j| self.amps[(i, j)].norm_sqr()).collect())
            .collect()
    }

    /// Site-resolved joint probabilities, summed over both components.
    pub fn site_probability_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.n_sites();
        let mut out = vec![vec![0.0; n]; n];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let mut acc = 0.0;
                for a in 0..2 {
                    for b in 0..2 {
                        acc += self.amps[(2 * i + a, 2 * j + b)].norm_sqr();
                    }
                }
                *cell = acc;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{c64, ZERO};

    #[test]
    fn delta_state_is_normalized() {
        let s = SpinorState::delta(4, 3, Component::Minus).unwrap();
        assert!(s.is_normalized());
        assert_eq!(s.get(3, Component::Minus), c64(1.0, 0.0));
        assert!(SpinorState::delta(4, 4, Component::Plus).is_err());
    }

    #[test]
    fn zero_state_cannot_normalize() {
        assert_eq!(SpinorState::zeros(3).normalized(), Err(QcaError::ZeroNorm));
    }

    #[test]
    fn rejects_odd_length() {
        assert!(SpinorState::from_amplitudes(vec![ZERO; 3]).is_err());
        assert!(SpinorState::from_amplitudes(vec![c64(f64::NAN, 0.0), ZERO]).is_err());
    }

    #[test]
    fn two_particle_rejects_symmetric() {
        let m = CMatrix::from_element(4, 4, c64(0.5, 0.0));
        assert!(matches!(
            TwoParticleState::from_matrix(m),
            Err(QcaError::NotAntisymmetric { .. })
        ));
    }

    #[test]
    fn site_probabilities_sum_components() {
        let s = SpinorState::from_amplitudes(vec![c64(0.6, 0.0), c64(0.0, 0.8), ZERO, ZERO])
            .unwrap();
        let p = s.site_probabilities();
        assert!((p[0] - 1.0).abs() < 1e-15);
        assert_eq!(p[1], 0.0);
    }
}
