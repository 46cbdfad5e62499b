use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

use crate::automaton::{momentum_unitary, wrap_phase};
use crate::error::{QcaError, Result};
use crate::hamiltonian::{emergent_h, locality_profile};
use crate::numeric::{
    block_max_abs, c64, hermitian_2x2_map, hermitian_2x2_map_complex, real, Block, CMatrix,
};
use crate::params::{AutomatonParams, Boundary};

const MATCH_TOL: f64 = 1e-12;
/// Modes whose `xi` falls below this are treated as degenerate.
const XI_FLOOR: f64 = 1e-13;
const BRANCH_NUDGE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BranchStatus {
    Match,
    /// `s cos phi < 0`: principal arcsin returns `pi - E`.
    ExpectedBranchFailure,
    UnexpectedMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentialCheck {
    pub phi: f64,
    pub energy: f64,
    pub cos_energy: f64,
    pub residual: f64,
    pub status: BranchStatus,
}

/// Compares `exp(-i arcsin(H(phi) tau / hbar))` with the momentum symbol.
pub fn discrete_exponential_check(params: &AutomatonParams, phi: f64) -> ExponentialCheck {
    let units = params.units();
    let sym = emergent_h(params).symbol(phi) * real(units.tau() / units.hbar());
    // both eigenvalues have |x| = xi, and 1 - xi^2 = (s cos phi)^2; using that
    // avoids the cancellation that costs asin ~1e-8 near |x| = 1
    let complement = (params.s() * phi.cos()).abs();
    let arc = hermitian_2x2_map(&sym, |x| x.signum() * x.abs().atan2(complement));
    let u_exp = hermitian_2x2_map_complex(&arc, |x| Complex64::from_polar(1.0, -x));
    let mode = momentum_unitary(params, phi);
    let residual = block_max_abs(&(u_exp - mode.u_phi));
    let cos_energy = params.s() * phi.cos();
    let status = if residual <= MATCH_TOL {
        BranchStatus::Match
    } else if cos_energy < 0.0 {
        BranchStatus::ExpectedBranchFailure
    } else {
        BranchStatus::UnexpectedMismatch
    };
    ExponentialCheck { phi, energy: mode.energy, cos_energy, residual, status }
}

/// Principal-logarithm generator of one momentum mode, `(E / xi) H(phi)`
/// in units of `hbar / tau`.
///
/// At the branch point `E = pi` (only `s = 1`, `phi = pi`) the phase is
/// moved by `1e-12` toward zero; the returned phase is `Some` in that case.
pub fn interpolating_symbol(params: &AutomatonParams, phi: f64) -> (Block, Option<f64>) {
    let (c, s) = (params.c(), params.s());
    let mut phi_used = phi;
    let mut nudged = None;
    let mut xi = c.hypot(s * phi.sin());
    if xi < XI_FLOOR {
        if s * phi.cos() > 0.0 {
            return (Block::zeros(), None);
        }
        phi_used = phi - BRANCH_NUDGE * phi.signum();
        log::warn!("mode phi = {phi} sits on the logarithm branch point; using {phi_used}");
        nudged = Some(phi_used);
        xi = c.hypot(s * phi_used.sin());
    }
    let energy = xi.atan2(s * phi_used.cos());
    let h = Block::new(
        real(-s * phi_used.sin()),
        real(c),
        real(c),
        real(s * phi_used.sin()),
    );
    (h * real(energy / xi), nudged)
}

/// Dense generator `H~` with `exp(-i H~ tau / hbar) = U` on a periodic lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolatingH {
    pub matrix: CMatrix,
    /// Largest coupling magnitude at each wrapped site offset.
    pub profile: Vec<f64>,
    /// Phases that were moved off the logarithm branch point.
    pub nudged_modes: Vec<f64>,
    params: AutomatonParams,
}

pub fn interpolating_h(params: &AutomatonParams) -> Result<InterpolatingH> {
    if params.boundary() != Boundary::Periodic {
        return Err(QcaError::RequiresPeriodic("interpolating_h"));
    }
    let n = params.n_sites();
    let units = params.units();
    let scale = units.hbar() / units.tau();
    let phis: Vec<f64> = (0..n).map(|k| wrap_phase(2.0 * PI * k as f64 / n as f64)).collect();
    let symbols: Vec<(Block, Option<f64>)> =
        phis.par_iter().map(|&phi| interpolating_symbol(params, phi)).collect();
    let nudged_modes = symbols.iter().filter_map(|(_, p)| *p).collect();
    // g_d^T = (1/N) sum_k G(phi_k) e^{i d phi_k}
    let offsets: Vec<Block> = (0..n)
        .into_par_iter()
        .map(|d| {
            let mut acc = Block::zeros();
            for (k, (g, _)) in symbols.iter().enumerate() {
                // reduce d k mod N so the phase is an exact lattice fraction
                let w = (d * k) % n;
                acc += g * Complex64::from_polar(1.0, 2.0 * PI * w as f64 / n as f64);
            }
            acc * real(scale / n as f64)
        })
        .collect();
    let dim = 2 * n;
    let mut matrix = CMatrix::zeros(dim, dim);
    for m in 0..n {
        for site in 0..n {
            let g = &offsets[(m + n - site) % n];
            for beta in 0..2 {
                for alpha in 0..2 {
                    matrix[(2 * m + beta, 2 * site + alpha)] = g[(beta, alpha)];
                }
            }
        }
    }
    // symmetrize away roundoff so downstream Hermitian checks see an exact adjoint pair
    let matrix = (&matrix + matrix.adjoint()) * c64(0.5, 0.0);
    let profile = locality_profile(&matrix, 0.0)?.profile;
    Ok(InterpolatingH { matrix, profile, nudged_modes, params: *params })
}

impl InterpolatingH {
    /// `exp(-i H~ tau / hbar)` by dense matrix exponential.
    pub fn propagator(&self) -> CMatrix {
        let units = self.params.units();
        (&self.matrix * c64(0.0, -units.tau() / units.hbar())).exp()
    }
}
