use serde::Serialize;

use crate::error::{QcaError, Result};
use crate::numeric::{hermiticity_residual, max_abs, CMatrix};

const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalityProfile {
    /// Largest entry magnitude among 2x2 blocks at each wrapped site offset.
    pub profile: Vec<f64>,
    /// Largest offset whose coupling reaches the threshold; zero if none do.
    pub max_offset: usize,
}

/// Scans block offsets of a Hermitian operator on `N` field sites.
pub fn locality_profile(h: &CMatrix, threshold: f64) -> Result<LocalityProfile> {
    if !h.is_square() || h.nrows() % 2 != 0 {
        return Err(QcaError::Invalid(format!(
            "expected a square matrix of even dimension, got {}x{}",
            h.nrows(),
            h.ncols()
        )));
    }
    let residual = hermiticity_residual(h);
    if residual > HERMITIAN_TOL * max_abs(h).max(1.0) {
        return Err(QcaError::NotHermitian { residual });
    }
    let n = h.nrows() / 2;
    let mut profile = vec![0.0f64; n / 2 + 1];
    for m in 0..n {
        for site in 0..n {
            let raw = m.abs_diff(site);
            let d = raw.min(n - raw);
            for beta in 0..2 {
                for alpha in 0..2 {
                    let v = h[(2 * m + beta, 2 * site + alpha)].norm();
                    if v > profile[d] {
                        profile[d] = v;
                    }
                }
            }
        }
    }
    let max_offset = profile.iter().rposition(|&v| v >= threshold && v > 0.0).unwrap_or(0);
    Ok(LocalityProfile { profile, max_offset })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::emergent_h;
    use crate::numeric::c64;
    use crate::params::AutomatonParams;

    #[test]
    fn emergent_h_is_nearest_neighbour() {
        let h = emergent_h(&AutomatonParams::new(0.5, 16).unwrap());
        let prof = locality_profile(&h.dense(), 1e-12).unwrap();
        assert_eq!(prof.max_offset, 1);
    }

    #[test]
    fn zero_matrix_has_offset_zero() {
        let prof = locality_profile(&CMatrix::zeros(8, 8), 1e-12).unwrap();
        assert_eq!(prof.max_offset, 0);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 1)] = c64(1.0, 0.0);
        assert!(matches!(locality_profile(&m, 1e-12), Err(QcaError::NotHermitian { .. })));
        assert!(locality_profile(&CMatrix::zeros(3, 3), 1e-12).is_err());
    }
}
