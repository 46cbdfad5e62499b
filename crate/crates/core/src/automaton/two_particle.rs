use rayon::prelude::*;

use crate::automaton::{build_band_unitary, BandUnitary, Direction};
use crate::error::{QcaError, Result};
use crate::numeric::{norm_sqr, real, CMatrix};
use crate::params::AutomatonParams;
use crate::state::{SpinorState, TwoParticleState};

/// Normalized antisymmetrized product `a_i b_j - a_j b_i`.
pub fn two_particle_from_singles(a: &SpinorState, b: &SpinorState) -> Result<TwoParticleState> {
    if a.n_sites() != b.n_sites() {
        return Err(QcaError::SizeMismatch { expected: a.n_sites(), actual: b.n_sites() });
    }
    let (va, vb) = (a.amplitudes(), b.amplitudes());
    let m = va.len();
    let mut psi = CMatrix::from_fn(m, m, |i, j| va[i] * vb[j] - va[j] * vb[i]);
    let norm = norm_sqr(psi.as_slice()).sqrt();
    if norm < 1e-12 {
        return Err(QcaError::ParallelStates);
    }
    psi /= real(norm);
    Ok(TwoParticleState::from_matrix_unchecked(psi))
}

/// Applies the step to every column of a column-major matrix.
fn apply_columns(u: &BandUnitary, m: &CMatrix) -> CMatrix {
    let dim = m.nrows();
    let mut out = CMatrix::zeros(dim, dim);
    out.as_mut_slice()
        .par_chunks_mut(dim)
        .zip(m.as_slice().par_chunks(dim))
        .for_each(|(dst, src)| u.apply_slice(src, dst, Direction::Forward));
    out
}

/// `Psi -> U Psi U^T` per step, as two one-sided band applications.
pub fn evolve_two_particle(
    state: &TwoParticleState,
    params: &AutomatonParams,
    steps: usize,
) -> Result<TwoParticleState> {
    if state.n_sites() != params.n_sites() {
        return Err(QcaError::SizeMismatch { expected: params.n_sites(), actual: state.n_sites() });
    }
    let u = build_band_unitary(params);
    let mut psi = state.matrix().clone();
    for _ in 0..steps {
        let left = apply_columns(&u, &psi);
        psi = apply_columns(&u, &left.transpose()).transpose();
    }
    Ok(TwoParticleState::from_matrix_unchecked(psi))
}
