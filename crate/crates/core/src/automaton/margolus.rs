use num_complex::Complex64;

use crate::error::{QcaError, Result};
use crate::numeric::{c64, real, Block, CMatrix, ZERO};
use crate::params::{AutomatonParams, Boundary};
use crate::state::SpinorState;

/// Two-mode gates of the Margolus decomposition.
///
/// `gate_a` mixes `(psi-_{n-1}, psi+_n)`, `gate_b` mixes `(psi+_n, psi-_n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GatePair {
    pub gate_a: Block,
    pub gate_b: Block,
}

impl GatePair {
    pub fn new(params: &AutomatonParams) -> Self {
        let (c, s) = (params.c(), params.s());
        let is = c64(0.0, s);
        let mi = c64(0.0, -1.0);
        Self {
            gate_a: Block::new(real(c), is, is, real(c)),
            gate_b: Block::new(ZERO, mi, mi, ZERO),
        }
    }
}

fn mix(gate: &Block, x: &mut Complex64, y: &mut Complex64) {
    let (a, b) = (*x, *y);
    *x = gate[(0, 0)] * a + gate[(0, 1)] * b;
    *y = gate[(1, 0)] * a + gate[(1, 1)] * b;
}

fn check(params: &AutomatonParams) -> Result<()> {
    if params.boundary() != Boundary::Periodic {
        return Err(QcaError::RequiresPeriodic("margolus_step"));
    }
    if params.n_sites() % 2 != 0 {
        return Err(QcaError::OddSites { what: "margolus_step", n_sites: params.n_sites() });
    }
    Ok(())
}

fn apply_rows(gates: &GatePair, amps: &mut [Complex64]) {
    let n_sites = amps.len() / 2;
    // A row first: it must see the untouched amplitudes of both neighbours
    for n in 0..n_sites {
        let left_minus = 2 * ((n + n_sites - 1) % n_sites) + 1;
        let (lo, hi) = if left_minus < 2 * n { (left_minus, 2 * n) } else { (2 * n, left_minus) };
        let (head, tail) = amps.split_at_mut(hi);
        let (x, y) = (&mut head[lo], &mut tail[0]);
        if lo == left_minus {
            mix(&gates.gate_a, x, y);
        } else {
            mix(&gates.gate_a, y, x);
        }
    }
    for pair in amps.chunks_exact_mut(2) {
        let (plus, minus) = pair.split_at_mut(1);
        mix(&gates.gate_b, &mut plus[0], &mut minus[0]);
    }
}

/// One step as an A-gate row followed by a B-gate row.
pub fn margolus_step(params: &AutomatonParams, state: &SpinorState) -> Result<SpinorState> {
    check(params)?;
    if state.n_sites() != params.n_sites() {
        return Err(QcaError::SizeMismatch { expected: params.n_sites(), actual: state.n_sites() });
    }
    let mut amps = state.amplitudes().to_vec();
    apply_rows(&GatePair::new(params), &mut amps);
    SpinorState::from_amplitudes(amps)
}

/// Dense matrix of the composed gate rows.
pub fn margolus_dense(params: &AutomatonParams) -> Result<CMatrix> {
    check(params)?;
    let dim = params.n_modes();
    let gates = GatePair::new(params);
    let mut m = CMatrix::zeros(dim, dim);
    for j in 0..dim {
        let mut v = vec![ZERO; dim];
        v[j] = real(1.0);
        apply_rows(&gates, &mut v);
        for (i, z) in v.into_iter().enumerate() {
            m[(i, j)] = z;
        }
    }
    Ok(m)
}
