use nalgebra::Vector2;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{QcaError, Result};
use crate::numeric::{c64, real, Block, I};
use crate::params::{AutomatonParams, Boundary, Component};
use crate::state::SpinorState;

/// One momentum sector of the automaton.
///
/// Eigenvalue and eigenvector slots are indexed by [`Component::offset`]:
/// the `Plus` branch has eigenvalue `exp(-iE)`, the `Minus` branch `exp(+iE)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumMode {
    pub phi: f64,
    pub u_phi: Block,
    /// `sqrt(1 - s^2 cos^2 phi)`, evaluated as `hypot(c, s sin phi)`.
    pub xi: f64,
    /// Eigenphase `E = arccos(s cos phi)` in `[0, pi]`.
    pub energy: f64,
    pub eigenvalues: [Complex64; 2],
    pub eigenvectors: [Vector2<Complex64>; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DispersionRow {
    pub phi: f64,
    pub energy: f64,
    pub group_velocity: f64,
}

/// `[[s e^{i phi}, -ic], [-ic, s e^{-i phi}]]`, the action of one step on a
/// plane wave `v e^{i n phi}`.
pub fn momentum_symbol(params: &AutomatonParams, phi: f64) -> Block {
    let (c, s) = (params.c(), params.s());
    let mix = -I * c;
    Block::new(
        Complex64::from_polar(s, phi),
        mix,
        mix,
        Complex64::from_polar(s, -phi),
    )
}

pub(crate) fn xi_energy(c: f64, s: f64, phi: f64) -> (f64, f64) {
    let xi = c.hypot(s * phi.sin());
    (xi, xi.atan2(s * phi.cos()))
}

/// Normalized eigenvector of the momentum symbol for branch `alpha`.
pub(crate) fn branch_spinor(c: f64, s: f64, phi: f64, alpha: Component) -> Vector2<Complex64> {
    let (xi, _) = xi_energy(c, s, phi);
    let a = alpha.sign();
    let ss = s * phi.sin();
    // two forms from the two rows of the eigen-equation; take the better conditioned one
    let first = (c, ss + a * xi);
    let second = (a * xi - ss, c);
    let n1 = first.0.hypot(first.1);
    let n2 = second.0.hypot(second.1);
    let (v, n) = if n1 >= n2 { (first, n1) } else { (second, n2) };
    if n == 0.0 {
        // c = 0 and sin phi = 0: the symbol is a multiple of the identity
        return match alpha {
            Component::Plus => Vector2::new(real(0.0), real(1.0)),
            Component::Minus => Vector2::new(real(1.0), real(0.0)),
        };
    }
    Vector2::new(real(v.0 / n), real(v.1 / n))
}

pub fn momentum_unitary(params: &AutomatonParams, phi: f64) -> MomentumMode {
    let phi = wrap_phase(phi);
    let (c, s) = (params.c(), params.s());
    let (xi, energy) = xi_energy(c, s, phi);
    let cos_e = s * phi.cos();
    MomentumMode {
        phi,
        u_phi: momentum_symbol(params, phi),
        xi,
        energy,
        eigenvalues: [c64(cos_e, -xi), c64(cos_e, xi)],
        eigenvectors: [
            branch_spinor(c, s, phi, Component::Plus),
            branch_spinor(c, s, phi, Component::Minus),
        ],
    }
}

/// Maps a phase into `(-pi, pi]`.
pub fn wrap_phase(phi: f64) -> f64 {
    let w = (phi + PI).rem_euclid(2.0 * PI) - PI;
    if w == -PI {
        PI
    } else {
        w
    }
}

/// `E'(phi) = s sin phi / xi`; zero where `xi` vanishes.
pub fn group_velocity(params: &AutomatonParams, phi: f64) -> f64 {
    let (xi, _) = xi_energy(params.c(), params.s(), phi);
    if xi == 0.0 {
        0.0
    } else {
        params.s() * phi.sin() / xi
    }
}

/// Maximum of `|E'(phi)|` by ternary search on `[0, pi]`.
///
/// `|E'|` increases with `|sin phi|`, so it is unimodal there.
pub fn max_group_velocity(params: &AutomatonParams) -> f64 {
    let (mut lo, mut hi) = (0.0f64, PI);
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if group_velocity(params, m1).abs() < group_velocity(params, m2).abs() {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    group_velocity(params, 0.5 * (lo + hi)).abs()
}

/// `phi_i = -pi + 2 pi i / n` for `i = 1..=n`.
pub fn momentum_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|i| -PI + 2.0 * PI * i as f64 / n as f64).collect()
}

pub fn dispersion_scan(params: &AutomatonParams, n_samples: usize) -> Result<Vec<DispersionRow>> {
    if n_samples < 2 {
        return Err(QcaError::OutOfRange {
            name: "n_samples",
            value: n_samples as f64,
            range: "[2, inf)",
        });
    }
    Ok(momentum_grid(n_samples)
        .into_iter()
        .map(|phi| DispersionRow {
            phi,
            energy: xi_energy(params.c(), params.s(), phi).1,
            group_velocity: group_velocity(params, phi),
        })
        .collect())
}

/// Commensurate plane-wave eigenstate `v_alpha e^{i n phi} / sqrt(N)`.
pub fn invariant_state(params: &AutomatonParams, phi: f64, alpha: Component) -> Result<SpinorState> {
    if params.boundary() != Boundary::Periodic {
        return Err(QcaError::RequiresPeriodic("invariant_state"));
    }
    let n_sites = params.n_sites();
    let k = phi * n_sites as f64 / (2.0 * PI);
    if (k - k.round()).abs() > 1e-9 {
        return Err(QcaError::IncommensurateMomentum { phi, n_sites });
    }
    let k = (k.round() as i64).rem_euclid(n_sites as i64);
    let phi = wrap_phase(2.0 * PI * k as f64 / n_sites as f64);
    let v = branch_spinor(params.c(), params.s(), phi, alpha);
    let scale = 1.0 / (n_sites as f64).sqrt();
    let mut amps = Vec::with_capacity(2 * n_sites);
    for n in 0..n_sites {
        // reduce n k mod N before forming the phase to keep it exact for large n
        let nk = (n as i64 * k).rem_euclid(n_sites as i64);
        let wave = Complex64::from_polar(scale, 2.0 * PI * nk as f64 / n_sites as f64);
        amps.push(v[0] * wave);
        amps.push(v[1] * wave);
    }
    SpinorState::from_amplitudes(amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{build_band_unitary, Direction};
    use crate::numeric::block_max_abs;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn params(theta: f64, n: usize) -> AutomatonParams {
        AutomatonParams::new(theta, n).unwrap()
    }

    #[test]
    fn zero_momentum_eigenpairs() {
        let p = params(0.9, 4);
        let m = momentum_unitary(&p, 0.0);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((m.eigenvectors[0] - Vector2::new(real(r), real(r))).norm() < 1e-15);
        assert!((m.eigenvectors[1] - Vector2::new(real(-r), real(r))).norm() < 1e-15
            || (m.eigenvectors[1] - Vector2::new(real(r), real(-r))).norm() < 1e-15);
        assert!((m.eigenvalues[0] - c64(p.s(), -p.c())).norm() < 1e-15);
        assert!((m.eigenvalues[1] - c64(p.s(), p.c())).norm() < 1e-15);
    }

    #[test]
    fn quarter_phase_energy() {
        let m = momentum_unitary(&params(0.4, 4), FRAC_PI_2);
        assert_eq!(m.energy, FRAC_PI_2);
    }

    #[test]
    fn xi_at_pi_over_eight() {
        let p = params(PI / 8.0, 4);
        let m = momentum_unitary(&p, FRAC_PI_4);
        let s = (PI / 8.0).sin();
        assert!((m.xi - (1.0 - s * s / 2.0).sqrt()).abs() < 1e-15);
        assert!((m.xi - 0.96269).abs() < 1e-5);
        assert!((m.xi - m.eigenvalues[1].im).abs() < 1e-15);
    }

    #[test]
    fn massless_dispersion_is_linear() {
        let p = params(FRAC_PI_2, 4);
        for row in dispersion_scan(&p, 64).unwrap() {
            assert!((row.energy - row.phi.abs()).abs() < 1e-14);
            if row.phi != 0.0 && row.phi != PI {
                assert!((row.group_velocity.abs() - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn scan_requires_two_samples() {
        assert!(dispersion_scan(&params(0.3, 4), 1).is_err());
    }

    #[test]
    fn max_velocity_is_zeta() {
        for theta in [0.0, 0.1, PI / 8.0, FRAC_PI_4, 1.3, FRAC_PI_2] {
            let p = params(theta, 4);
            assert!((max_group_velocity(&p) - p.s()).abs() < 1e-12, "theta={theta}");
        }
    }

    #[test]
    fn near_massless_matches_continuum() {
        let p = params(FRAC_PI_2 - 0.05, 4);
        for phi in [0.01, 0.05, 0.1] {
            let e = momentum_unitary(&p, phi).energy;
            let cont = (p.c() * p.c() + p.s() * p.s() * phi * phi).sqrt();
            assert!(((e - cont) / cont).abs() < 0.01);
        }
    }

    #[test]
    fn invariant_states_are_eigenvectors() {
        let p = params(PI / 8.0, 16);
        let u = build_band_unitary(&p);
        for k in 0..16 {
            let phi = 2.0 * PI * k as f64 / 16.0;
            for alpha in Component::BOTH {
                let psi = invariant_state(&p, phi, alpha).unwrap();
                let lambda = momentum_unitary(&p, phi).eigenvalues[alpha.offset()];
                let out = u.apply_step(&psi, Direction::Forward).unwrap();
                let res = out
                    .amplitudes()
                    .iter()
                    .zip(psi.amplitudes())
                    .map(|(a, b)| (a - lambda * b).norm())
                    .fold(0.0, f64::max);
                assert!(res <= 1e-12, "k={k} alpha={alpha:?} res={res}");
                assert!((psi.norm_sqr() - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn degenerate_massless_modes() {
        let p = params(FRAC_PI_2, 8);
        let u = build_band_unitary(&p);
        for phi in [0.0, PI] {
            for alpha in Component::BOTH {
                let psi = invariant_state(&p, phi, alpha).unwrap();
                let lambda = momentum_unitary(&p, phi).eigenvalues[alpha.offset()];
                let out = u.apply_step(&psi, Direction::Forward).unwrap();
                for (a, b) in out.amplitudes().iter().zip(psi.amplitudes()) {
                    assert!((a - lambda * b).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn invariant_state_errors() {
        let p = params(0.3, 16);
        assert!(matches!(
            invariant_state(&p, 0.1, Component::Plus),
            Err(QcaError::IncommensurateMomentum { .. })
        ));
        let open = p.with_boundary(Boundary::Open);
        assert!(invariant_state(&open, 0.0, Component::Plus).is_err());
    }

    proptest! {
        #[test]
        fn symbol_is_special_unitary(theta in 0.0f64..=FRAC_PI_2, phi in -PI..PI) {
            let p = params(theta, 4);
            let m = momentum_unitary(&p, phi);
            let u = m.u_phi;
            prop_assert!(block_max_abs(&(u.adjoint() * u - Block::identity())) < 1e-14);
            prop_assert!((u.determinant() - c64(1.0, 0.0)).norm() < 1e-14);
            for a in 0..2 {
                prop_assert!((m.eigenvalues[a].norm() - 1.0).abs() < 1e-13);
                let v = m.eigenvectors[a];
                prop_assert!((u * v - v * m.eigenvalues[a]).norm() < 1e-13);
            }
        }
    }
}
