//! Self-adjoint Jordan-Wigner dressing on a two-dimensional patch.
//!
//! Every site carries a Dirac mode `phi` and an auxiliary mode `theta`. Both
//! are represented by an ordinary one-dimensional Jordan-Wigner chain over
//! the total order (row-major sites, `phi` before `theta`), so site `idx`
//! uses qubit `2 idx` for `phi` and `2 idx + 1` for `theta`. The dressing is
//! then built on top of that faithful representation.

mod links;
mod phase;
mod vacuum;

pub use links::{oriented_links, p_commutation_table_2d, p_observables_2d, OrientedLinks};
pub use phase::{
    alpha, dressed_operator_checks, dressed_operators_2d, phase_factor_2d, step_phase,
    DressedOperators, DressedReport, StepPhase,
};
pub use vacuum::{joint_vacuum_2d, locality_identity_2d, JointVacuum, LocalityReport};

use crate::error::{QcaError, Result};

/// Integer lattice point `(x, y)`.
pub type Site = (i64, i64);

/// Largest patch the dense oracle handles (`2^14` amplitudes).
pub const MAX_SITES: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lattice2D {
    width: usize,
    height: usize,
}

impl Lattice2D {
    pub fn new(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(QcaError::Invalid("lattice sides must be positive".into()));
        }
        let sites = width * height;
        if sites > MAX_SITES {
            return Err(QcaError::LatticeTooLarge { sites, limit: MAX_SITES });
        }
        Ok(Self { width, height })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn n_sites(&self) -> usize {
        self.width * self.height
    }

    pub fn n_qubits(&self) -> usize {
        2 * self.n_sites()
    }

    pub fn contains(&self, site: Site) -> bool {
        (0..self.width as i64).contains(&site.0) && (0..self.height as i64).contains(&site.1)
    }

    /// Row-major index.
    pub fn index(&self, site: Site) -> Result<usize> {
        if !self.contains(site) {
            return Err(QcaError::Invalid(format!("site {site:?} is outside the {}x{} patch", self.width, self.height)));
        }
        Ok(site.1 as usize * self.width + site.0 as usize)
    }

    pub fn site(&self, idx: usize) -> Site {
        ((idx % self.width) as i64, (idx / self.width) as i64)
    }

    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        (0..self.n_sites()).map(|i| self.site(i))
    }

    pub fn sigma_qubit(&self, site: Site) -> Result<usize> {
        Ok(2 * self.index(site)?)
    }

    pub fn tau_qubit(&self, site: Site) -> Result<usize> {
        Ok(2 * self.index(site)? + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_major_layout() {
        let l = Lattice2D::new(2, 3).unwrap();
        assert_eq!(l.index((1, 0)).unwrap(), 1);
        assert_eq!(l.index((0, 1)).unwrap(), 2);
        assert_eq!(l.site(5), (1, 2));
        assert_eq!(l.tau_qubit((1, 1)).unwrap(), 7);
        assert!(l.index((2, 0)).is_err());
    }

    #[test]
    fn size_guard() {
        assert!(matches!(Lattice2D::new(2, 4), Err(QcaError::LatticeTooLarge { .. })));
        assert!(Lattice2D::new(0, 3).is_err());
        assert!(Lattice2D::new(7, 1).is_ok());
    }
}
