use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{QcaError, Result};
use crate::numeric::{real, ZERO};
use crate::params::{signed_coordinate, AutomatonParams, Component};
use crate::state::SpinorState;

/// Gaussian packet `exp(2 pi i x / k - (x - n0)^2 / (2 delta^2)) (|+> +/- |->)`.
///
/// `x` is measured from `n0` along the shortest way round the ring, so the
/// carrier phase stays continuous across the packet even when it straddles
/// the seam.
pub fn gaussian_packet(
    params: &AutomatonParams,
    n0: i64,
    delta: f64,
    k: i64,
    sign: Component,
) -> Result<SpinorState> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(QcaError::OutOfRange { name: "delta", value: delta, range: "(0, inf)" });
    }
    if k == 0 {
        return Err(QcaError::OutOfRange { name: "k", value: 0.0, range: "k != 0" });
    }
    let n_sites = params.n_sites();
    let center = n0.rem_euclid(n_sites as i64) as usize;
    let mut amps = vec![ZERO; 2 * n_sites];
    for n in 0..n_sites {
        let dx = signed_coordinate((n + n_sites - center) % n_sites, n_sites) as f64;
        let x = n0 as f64 + dx;
        let envelope = (-dx * dx / (2.0 * delta * delta)).exp();
        let z = Complex64::from_polar(envelope, 2.0 * PI * x / k as f64);
        amps[2 * n] = z;
        amps[2 * n + 1] = z * sign.sign();
    }
    SpinorState::from_amplitudes(amps)?.normalized()
}

/// Equal superposition of both components at sites `+n` and `-n`.
pub fn double_slit_state(params: &AutomatonParams, n: usize) -> Result<SpinorState> {
    let n_sites = params.n_sites();
    if n == 0 || 2 * n >= n_sites {
        return Err(QcaError::OutOfRange {
            name: "slit offset",
            value: n as f64,
            range: "0 < n < N/2",
        });
    }
    let mut amps = vec![ZERO; 2 * n_sites];
    for site in [n, n_sites - n] {
        amps[2 * site] = real(0.5);
        amps[2 * site + 1] = real(0.5);
    }
    SpinorState::from_amplitudes(amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::invariant_state;
    use proptest::prelude::*;

    #[test]
    fn default_packet_is_centered() {
        let p = AutomatonParams::new(PI / 8.0, 64).unwrap();
        let psi = gaussian_packet(&p, 0, 2.0, 8, Component::Plus).unwrap();
        let probs = psi.site_probabilities();
        let argmax = (0..64).max_by(|&a, &b| probs[a].total_cmp(&probs[b])).unwrap();
        assert_eq!(argmax, 0);
        assert!((probs[1] - probs[63]).abs() < 1e-15);
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn flat_envelope_is_plane_wave_mixture() {
        let p = AutomatonParams::new(0.6, 32).unwrap();
        let psi = gaussian_packet(&p, 0, 1e9, 8, Component::Plus).unwrap();
        let phi = 2.0 * PI / 8.0;
        let a = invariant_state(&p, phi, Component::Plus).unwrap();
        let b = invariant_state(&p, phi, Component::Minus).unwrap();
        let weight = a.inner(&psi).norm_sqr() + b.inner(&psi).norm_sqr();
        assert!((weight - 1.0).abs() < 1e-9);
    }

    #[test]
    fn packet_rejects_bad_inputs() {
        let p = AutomatonParams::new(0.6, 32).unwrap();
        assert!(gaussian_packet(&p, 0, 0.0, 8, Component::Plus).is_err());
        assert!(gaussian_packet(&p, 0, 2.0, 0, Component::Plus).is_err());
    }

    #[test]
    fn double_slit_layout() {
        let p = AutomatonParams::new(PI / 10.0, 64).unwrap();
        let psi = double_slit_state(&p, 10).unwrap();
        for (n, a) in [(10, Component::Plus), (10, Component::Minus), (54, Component::Plus), (54, Component::Minus)] {
            assert_eq!(psi.get(n, a), real(0.5));
        }
        assert_eq!(psi.norm_sqr(), 1.0);
        let small = double_slit_state(&AutomatonParams::new(0.1, 8).unwrap(), 1).unwrap();
        let probs = small.site_probabilities();
        assert_eq!(probs[1], 0.5);
        assert_eq!(probs[7], 0.5);
    }

    #[test]
    fn double_slit_bounds() {
        let p = AutomatonParams::new(0.1, 8).unwrap();
        assert!(double_slit_state(&p, 0).is_err());
        assert!(double_slit_state(&p, 4).is_err());
    }

    proptest! {
        #[test]
        fn packets_are_normalized(n0 in -50i64..50, delta in 0.3f64..20.0, k in 1i64..16, neg in any::<bool>()) {
            let p = AutomatonParams::new(0.5, 40).unwrap();
            let k = if neg { -k } else { k };
            let psi = gaussian_packet(&p, n0, delta, k, Component::Minus).unwrap();
            prop_assert!((psi.norm_sqr() - 1.0).abs() <= 1e-12);
        }
    }
}
