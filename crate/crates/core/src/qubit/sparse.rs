use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{QcaError, Result};
use crate::numeric::{real, CMatrix, ZERO};
use crate::qubit::{PauliOp, MAX_QUBITS};

/// Column-compressed operator on `n` qubits.
///
/// This is the explicit matrix of an operator: products are formed column by
/// column from basis-state images, never through the Pauli multiplication
/// table, so comparing a [`PauliOp`] identity here is an independent check.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOp {
    n_qubits: usize,
    cols: Vec<Vec<(usize, Complex64)>>,
}

fn merge(mut entries: Vec<(usize, Complex64)>) -> Vec<(usize, Complex64)> {
    entries.sort_by_key(|e| e.0);
    let mut out: Vec<(usize, Complex64)> = Vec::with_capacity(entries.len());
    for (r, v) in entries {
        match out.last_mut() {
            Some(last) if last.0 == r => last.1 += v,
            _ => out.push((r, v)),
        }
    }
    out.retain(|e| e.1 != ZERO);
    out
}

impl SparseOp {
    pub fn from_pauli(op: &PauliOp, n_qubits: usize) -> Result<Self> {
        if n_qubits > MAX_QUBITS {
            return Err(QcaError::TooManyQubits { n_qubits, limit: MAX_QUBITS });
        }
        if let Some(top) = op.max_site() {
            if top >= n_qubits {
                return Err(QcaError::SiteOutOfRange { site: top, n_sites: n_qubits });
            }
        }
        let dim = 1usize << n_qubits;
        let cols = (0..dim)
            .into_par_iter()
            .map(|b| {
                merge(
                    op.terms()
                        .iter()
                        .map(|t| {
                            let (r, v) = t.apply_basis(b as u64);
                            (r as usize, v)
                        })
                        .collect(),
                )
            })
            .collect();
        Ok(Self { n_qubits, cols })
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self { n_qubits, cols: (0..1usize << n_qubits).map(|b| vec![(b, real(1.0))]).collect() }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn column(&self, b: usize) -> &[(usize, Complex64)] {
        &self.cols[b]
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.n_qubits, other.n_qubits, "operators act on different registers");
    }

    /// `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let cols = other
            .cols
            .par_iter()
            .map(|col| {
                let mut acc = Vec::new();
                for &(r, v) in col {
                    acc.extend(self.cols[r].iter().map(|&(r2, w)| (r2, w * v)));
                }
                merge(acc)
            })
            .collect();
        Self { n_qubits: self.n_qubits, cols }
    }

    pub fn lin_comb(&self, a: Complex64, other: &Self, b: Complex64) -> Self {
        self.check(other);
        let cols = self
            .cols
            .par_iter()
            .zip(&other.cols)
            .map(|(x, y)| {
                merge(x.iter().map(|&(r, v)| (r, a * v)).chain(y.iter().map(|&(r, v)| (r, b * v))).collect())
            })
            .collect();
        Self { n_qubits: self.n_qubits, cols }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.lin_comb(real(1.0), other, real(1.0))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.lin_comb(real(1.0), other, real(-1.0))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            n_qubits: self.n_qubits,
            cols: self.cols.iter().map(|col| merge(col.iter().map(|&(r, v)| (r, c * v)).collect())).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); self.cols.len()];
        for (b, col) in self.cols.iter().enumerate() {
            for &(r, v) in col {
                rows[r].push((b, v.conj()));
            }
        }
        Self { n_qubits: self.n_qubits, cols: rows.into_iter().map(merge).collect() }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        self.mul(other).add(&other.mul(self))
    }

    pub fn max_abs(&self) -> f64 {
        self.cols.iter().flatten().map(|e| e.1.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.sub(other).max_abs()
    }

    /// `max |A - c I|`.
    pub fn distance_to_scalar(&self, c: Complex64) -> f64 {
        self.sub(&Self::identity(self.n_qubits).scale(c)).max_abs()
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; v.len()];
        for (b, col) in self.cols.iter().enumerate() {
            if v[b] == ZERO {
                continue;
            }
            for &(r, w) in col {
                out[r] += w * v[b];
            }
        }
        out
    }

    pub fn to_dense(&self) -> CMatrix {
        let dim = self.cols.len();
        let mut m = CMatrix::zeros(dim, dim);
        for (b, col) in self.cols.iter().enumerate() {
            for &(r, v) in col {
                m[(r, b)] = v;
            }
        }
        m
    }
}
