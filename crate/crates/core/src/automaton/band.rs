use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{QcaError, Result};
use crate::numeric::{real, unitarity_residual, Block, CMatrix, I, ZERO};
use crate::params::{AutomatonParams, Boundary};
use crate::state::SpinorState;

/// Below this many sites a step runs on the calling thread.
const PAR_THRESHOLD: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// Three-block band unitary.
///
/// Block `a_d` couples site `n` to site `n + d`:
/// `U|n, alpha> = sum_{d, beta} (a_d)[alpha, beta] |n + d, beta>`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandUnitary {
    pub a_minus: Block,
    pub a_zero: Block,
    pub a_plus: Block,
    n_sites: usize,
    boundary: Boundary,
}

/// Dirac automaton blocks: left shift of `+`, right shift of `-`, and the
/// `-i c sigma_x` mass mixing.
pub fn build_band_unitary(params: &AutomatonParams) -> BandUnitary {
    let (c, s) = (params.c(), params.s());
    let mix = -I * c;
    BandUnitary {
        a_minus: Block::new(real(s), ZERO, ZERO, ZERO),
        a_zero: Block::new(ZERO, mix, mix, ZERO),
        a_plus: Block::new(ZERO, ZERO, ZERO, real(s)),
        n_sites: params.n_sites(),
        boundary: params.boundary(),
    }
}

impl BandUnitary {
    pub fn from_blocks(
        a_minus: Block,
        a_zero: Block,
        a_plus: Block,
        n_sites: usize,
        boundary: Boundary,
    ) -> Self {
        Self { a_minus, a_zero, a_plus, n_sites, boundary }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub(crate) fn blocks(&self) -> [(i64, &Block); 3] {
        [(-1, &self.a_minus), (0, &self.a_zero), (1, &self.a_plus)]
    }

    fn source_site(&self, m: usize, delta: i64) -> Option<usize> {
        let n = self.n_sites as i64;
        let t = m as i64 + delta;
        match self.boundary {
            Boundary::Periodic => Some(t.rem_euclid(n) as usize),
            Boundary::Open => (0..n).contains(&t).then_some(t as usize),
        }
    }

    /// Applies the step (or its adjoint) to a flat amplitude slice.
    pub fn apply_slice(&self, input: &[Complex64], out: &mut [Complex64], direction: Direction) {
        debug_assert_eq!(input.len(), 2 * self.n_sites);
        debug_assert_eq!(out.len(), input.len());
        let site = |m: usize, pair: &mut [Complex64]| {
            let mut acc = [ZERO; 2];
            for (d, a) in self.blocks() {
                // forward: out_m = a_d^T in_{m-d}; backward: out_m = conj(a_d) in_{m+d}
                let src = match direction {
                    Direction::Forward => self.source_site(m, -d),
                    Direction::Backward => self.source_site(m, d),
                };
                let Some(src) = src else { continue };
                let v = [input[2 * src], input[2 * src + 1]];
                for (beta, slot) in acc.iter_mut().enumerate() {
                    for (alpha, x) in v.iter().enumerate() {
                        let coeff = match direction {
                            Direction::Forward => a[(alpha, beta)],
                            Direction::Backward => a[(beta, alpha)].conj(),
                        };
                        *slot += coeff * x;
                    }
                }
            }
            pair[0] = acc[0];
            pair[1] = acc[1];
        };
        if self.n_sites >= PAR_THRESHOLD {
            out.par_chunks_mut(2).enumerate().for_each(|(m, p)| site(m, p));
        } else {
            out.chunks_mut(2).enumerate().for_each(|(m, p)| site(m, p));
        }
    }

    pub fn apply_step(&self, state: &SpinorState, direction: Direction) -> Result<SpinorState> {
        if state.n_sites() != self.n_sites {
            return Err(QcaError::SizeMismatch { expected: self.n_sites, actual: state.n_sites() });
        }
        let mut out = vec![ZERO; 2 * self.n_sites];
        self.apply_slice(state.amplitudes(), &mut out, direction);
        SpinorState::from_amplitudes(out)
    }

    pub fn evolve(&self, state: &SpinorState, steps: usize, direction: Direction) -> Result<SpinorState> {
        let mut cur = state.clone();
        for _ in 0..steps {
            cur = self.apply_step(&cur, direction)?;
        }
        Ok(cur)
    }

    /// Dense `2N x 2N` matrix acting on flat amplitude vectors.
    pub fn dense(&self) -> CMatrix {
        let dim = 2 * self.n_sites;
        let mut m = CMatrix::zeros(dim, dim);
        for n in 0..self.n_sites {
            for (d, a) in self.blocks() {
                let Some(target) = self.source_site(n, d) else { continue };
                for alpha in 0..2 {
                    for beta in 0..2 {
                        // offsets coincide on tiny periodic lattices, so accumulate
                        m[(2 * target + beta, 2 * n + alpha)] += a[(alpha, beta)];
                    }
                }
            }
        }
        m
    }

    /// `max |U^dagger U - I|` of the dense matrix.
    ///
    /// An open lattice loses amplitude at its edges whenever `s > 0`; that
    /// case is reported as [`QcaError::NonUnitaryBoundary`].
    pub fn unitarity_residual(&self) -> Result<f64> {
        let residual = unitarity_residual(&self.dense());
        if self.boundary == Boundary::Open && residual > 1e-12 {
            return Err(QcaError::NonUnitaryBoundary { residual });
        }
        Ok(residual)
    }
}
