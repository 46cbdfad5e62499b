use num_complex::Complex64;

use crate::automaton::{build_band_unitary, BandUnitary, Direction};
use crate::error::{QcaError, Result};
use crate::numeric::{c64, Block, CMatrix};
use crate::params::AutomatonParams;
use crate::state::SpinorState;

/// Band blocks of `(i hbar / 2 tau) (U - U^dagger)`, in the same block
/// convention as [`BandUnitary`].
#[derive(Debug, Clone, PartialEq)]
pub struct EmergentH {
    band: BandUnitary,
    params: AutomatonParams,
}

pub fn emergent_h(params: &AutomatonParams) -> EmergentH {
    let u = build_band_unitary(params);
    let units = params.units();
    let k = c64(0.0, units.hbar() / (2.0 * units.tau()));
    // the adjoint's block at offset d is a_{-d}^dagger
    let h_minus = (u.a_minus - u.a_plus.adjoint()) * k;
    let h_zero = (u.a_zero - u.a_zero.adjoint()) * k;
    let h_plus = (u.a_plus - u.a_minus.adjoint()) * k;
    EmergentH {
        band: BandUnitary::from_blocks(h_minus, h_zero, h_plus, params.n_sites(), params.boundary()),
        params: *params,
    }
}

impl EmergentH {
    pub fn h_minus(&self) -> &Block {
        &self.band.a_minus
    }

    pub fn h_zero(&self) -> &Block {
        &self.band.a_zero
    }

    pub fn h_plus(&self) -> &Block {
        &self.band.a_plus
    }

    pub fn params(&self) -> &AutomatonParams {
        &self.params
    }

    /// `(hbar / tau) [[-s sin phi, c], [c, s sin phi]]`.
    pub fn symbol(&self, phi: f64) -> Block {
        let mut out = Block::zeros();
        for (d, h) in self.band.blocks() {
            out += h.transpose() * Complex64::from_polar(1.0, -(d as f64) * phi);
        }
        out
    }

    pub fn dense(&self) -> CMatrix {
        self.band.dense()
    }

    pub fn apply(&self, state: &SpinorState) -> Result<SpinorState> {
        self.band.apply_step(state, Direction::Forward)
    }
}

fn check_sizes(a: &SpinorState, b: &SpinorState, h: &EmergentH) -> Result<()> {
    let n = h.params.n_sites();
    for s in [a, b] {
        if s.n_sites() != n {
            return Err(QcaError::SizeMismatch { expected: n, actual: s.n_sites() });
        }
    }
    Ok(())
}

fn combine(base: &SpinorState, h_psi: &SpinorState, k: Complex64) -> Result<SpinorState> {
    let amps = base
        .amplitudes()
        .iter()
        .zip(h_psi.amplitudes())
        .map(|(b, x)| b + k * x)
        .collect();
    SpinorState::from_amplitudes(amps)
}

/// `Psi(t + tau) = Psi(t - tau) - (2 i tau / hbar) H Psi(t)`.
pub fn three_point_step(
    state_t: &SpinorState,
    state_t_minus: &SpinorState,
    h: &EmergentH,
) -> Result<SpinorState> {
    check_sizes(state_t, state_t_minus, h)?;
    let units = h.params.units();
    let k = c64(0.0, -2.0 * units.tau() / units.hbar());
    combine(state_t_minus, &h.apply(state_t)?, k)
}

/// Time-reversed rule `Psi(t - tau) = Psi(t + tau) + (2 i tau / hbar) H Psi(t)`.
pub fn three_point_reverse(
    state_t_plus: &SpinorState,
    state_t: &SpinorState,
    h: &EmergentH,
) -> Result<SpinorState> {
    check_sizes(state_t_plus, state_t, h)?;
    let units = h.params.units();
    let k = c64(0.0, 2.0 * units.tau() / units.hbar());
    combine(state_t_plus, &h.apply(state_t)?, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{gaussian_packet, momentum_unitary};
    use crate::numeric::{block_max_abs, hermiticity_residual, real, I, ZERO};
    use crate::params::{Boundary, Component, UnitSystem};
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn blocks_are_hermitian_pairs() {
        let h = emergent_h(&AutomatonParams::new(0.6, 8).unwrap());
        assert!(block_max_abs(&(h.h_minus() - h.h_plus().adjoint())) < 1e-16);
        assert!(block_max_abs(&(h.h_zero() - h.h_zero().adjoint())) < 1e-16);
        assert!(hermiticity_residual(&h.dense()) <= 1e-14);
    }

    #[test]
    fn symbol_closed_form() {
        let p = AutomatonParams::new(0.6, 8).unwrap();
        let h = emergent_h(&p);
        for phi in [-2.0, -0.3, 0.0, 1.1, PI] {
            let (c, s) = (p.c(), p.s());
            let expected = Block::new(
                real(-s * f64::sin(phi)),
                real(c),
                real(c),
                real(s * f64::sin(phi)),
            );
            assert!(block_max_abs(&(h.symbol(phi) - expected)) < 1e-15);
        }
    }

    #[test]
    fn limits() {
        let h0 = emergent_h(&AutomatonParams::new(0.0, 4).unwrap());
        let sx = Block::new(ZERO, real(1.0), real(1.0), ZERO);
        assert!(block_max_abs(&(h0.symbol(0.7) - sx)) < 1e-16);
        let h1 = emergent_h(&AutomatonParams::new(FRAC_PI_2, 4).unwrap());
        let d = Block::new(real(-(0.7f64).sin()), ZERO, ZERO, real((0.7f64).sin()));
        assert!(block_max_abs(&(h1.symbol(0.7) - d)) < 1e-16);
    }

    #[test]
    fn spectrum_is_sine_of_eigenphase() {
        let p = AutomatonParams::new(0.9, 4).unwrap();
        let h = emergent_h(&p);
        for phi in [-2.5, -1.0, 0.0, 0.4, 2.9] {
            let sym = h.symbol(phi);
            let disc = ((sym[(0, 0)] - sym[(1, 1)]).norm_sqr() / 4.0 + sym[(0, 1)].norm_sqr()).sqrt();
            let e = momentum_unitary(&p, phi).energy;
            assert!((disc - e.sin()).abs() < 1e-13);
        }
    }

    #[test]
    fn three_point_reproduces_step() {
        let units = UnitSystem::new(1.0, 0.5, 2.0).unwrap();
        let p = AutomatonParams::with_options(PI / 8.0, 16, Boundary::Periodic, units).unwrap();
        let u = build_band_unitary(&p);
        let h = emergent_h(&p);
        let prev = gaussian_packet(&p, 3, 1.5, 5, Component::Plus).unwrap();
        let cur = u.apply_step(&prev, Direction::Forward).unwrap();
        let next = three_point_step(&cur, &prev, &h).unwrap();
        let direct = u.apply_step(&cur, Direction::Forward).unwrap();
        assert!(next.max_abs_diff(&direct) <= 1e-12);
        let back = three_point_reverse(&next, &cur, &h).unwrap();
        assert!(back.max_abs_diff(&prev) <= 1e-12);
    }

    #[test]
    fn stationary_three_point() {
        let p = AutomatonParams::new(0.0, 4).unwrap();
        let u = build_band_unitary(&p);
        let prev = SpinorState::delta(4, 1, Component::Plus).unwrap();
        let cur = u.apply_step(&prev, Direction::Forward).unwrap();
        let next = three_point_step(&cur, &prev, &emergent_h(&p)).unwrap();
        // Psi(t+1) = Psi(t-1) - 2i sigma_x Psi(t)
        let mut expected = prev.amplitudes().to_vec();
        expected[2] += -2.0 * I * cur.amplitudes()[3];
        expected[3] += -2.0 * I * cur.amplitudes()[2];
        assert!(crate::numeric::max_abs_diff(next.amplitudes(), &expected) < 1e-15);
    }

    #[test]
    fn size_mismatch() {
        let h = emergent_h(&AutomatonParams::new(0.3, 4).unwrap());
        let a = SpinorState::zeros(4);
        let b = SpinorState::zeros(5);
        assert!(three_point_step(&a, &b, &h).is_err());
    }
}
