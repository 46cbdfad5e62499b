use num_complex::Complex64;

use crate::error::{QcaError, Result};
use crate::numeric::{self, von_neumann_entropy, CMatrix, ZERO};
use crate::qubit::PauliOp;

/// Memory guard for state vectors.
pub const MAX_QUBITS: usize = 24;
/// Largest register for which full dense matrices are built.
pub const DENSE_QUBIT_LIMIT: usize = 10;
/// Largest register for explicit column-compressed operator checks.
pub const SPARSE_QUBIT_LIMIT: usize = 16;

/// Dense state vector; basis index bit `j` set means qubit `j` is up.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitState {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

pub(crate) fn check_qubits(n_qubits: usize) -> Result<()> {
    if n_qubits > MAX_QUBITS {
        return Err(QcaError::TooManyQubits { n_qubits, limit: MAX_QUBITS });
    }
    Ok(())
}

pub(crate) fn check_dense(n_qubits: usize) -> Result<()> {
    if n_qubits > DENSE_QUBIT_LIMIT {
        return Err(QcaError::TooManyQubits { n_qubits, limit: DENSE_QUBIT_LIMIT });
    }
    Ok(())
}

pub(crate) fn check_sparse(n_qubits: usize) -> Result<()> {
    if n_qubits > SPARSE_QUBIT_LIMIT {
        return Err(QcaError::TooManyQubits { n_qubits, limit: SPARSE_QUBIT_LIMIT });
    }
    Ok(())
}

impl QubitState {
    /// All qubits down.
    pub fn vacuum(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, mask: u64) -> Result<Self> {
        check_qubits(n_qubits)?;
        let dim = 1usize << n_qubits;
        if mask as usize >= dim {
            return Err(QcaError::Invalid(format!("basis mask {mask:#b} exceeds {n_qubits} qubits")));
        }
        let mut amps = vec![ZERO; dim];
        amps[mask as usize] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_qubits(n_qubits)?;
        if amps.len() != 1usize << n_qubits {
            return Err(QcaError::SizeMismatch { expected: 1 << n_qubits, actual: amps.len() });
        }
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        numeric::norm_sqr(&self.amps)
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 {
            return Err(QcaError::ZeroNorm);
        }
        self.amps.iter_mut().for_each(|z| *z /= n);
        Ok(self)
    }

    pub fn apply(&self, op: &PauliOp) -> Self {
        Self { n_qubits: self.n_qubits, amps: op.apply(&self.amps) }
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        numeric::inner(&self.amps, &other.amps)
    }

    /// Reduced density matrix of the listed qubits; bit `k` of the result
    /// index is `keep[k]`.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<CMatrix> {
        if keep.iter().any(|&q| q >= self.n_qubits) {
            return Err(QcaError::Invalid("reduced_density: qubit out of range".into()));
        }
        let keep_mask: usize = keep.iter().map(|&q| 1usize << q).sum();
        let env: Vec<usize> = (0..self.n_qubits).filter(|q| keep_mask >> q & 1 == 0).collect();
        let dk = 1usize << keep.len();
        let compose = |sys: usize, e: usize| {
            let mut idx = 0usize;
            for (k, &q) in keep.iter().enumerate() {
                idx |= (sys >> k & 1) << q;
            }
            for (k, &q) in env.iter().enumerate() {
                idx |= (e >> k & 1) << q;
            }
            idx
        };
        let mut rho = CMatrix::zeros(dk, dk);
        for e in 0..1usize << env.len() {
            for i in 0..dk {
                let a = self.amps[compose(i, e)];
                if a == ZERO {
                    continue;
                }
                for j in 0..dk {
                    rho[(i, j)] += a * self.amps[compose(j, e)].conj();
                }
            }
        }
        Ok(rho)
    }

    /// Von Neumann entropy (nats) of the listed qubits.
    pub fn entanglement_entropy(&self, subsystem: &[usize]) -> Result<f64> {
        Ok(von_neumann_entropy(&self.reduced_density(subsystem)?))
    }
}
