use num_complex::Complex64;
use serde::Serialize;

use super::{Lattice2D, Site};
use crate::error::{QcaError, Result};
use crate::numeric::real;
use crate::qubit::{jw_fermion, Pauli, PauliOp, PauliString, SparseOp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum StepPhase {
    Zero,
    Pi,
}

impl StepPhase {
    pub fn angle(self) -> f64 {
        match self {
            StepPhase::Zero => 0.0,
            StepPhase::Pi => std::f64::consts::PI,
        }
    }

    /// `exp(i angle)`, exactly.
    pub fn sign(self) -> f64 {
        match self {
            StepPhase::Zero => 1.0,
            StepPhase::Pi => -1.0,
        }
    }
}

/// `0` on the upper half-plane including the positive x axis, `pi` elsewhere.
pub fn step_phase(k: Site) -> Result<StepPhase> {
    match k {
        (0, 0) => Err(QcaError::ZeroVector),
        (x, y) if y > 0 || (y == 0 && x > 0) => Ok(StepPhase::Zero),
        _ => Ok(StepPhase::Pi),
    }
}

/// Angle attached to site `m` in the phase factor of site `n`: the step
/// phase of `m - n`, and zero on the diagonal.
pub fn alpha(m: Site, n: Site) -> StepPhase {
    step_phase((m.0 - n.0, m.1 - n.1)).unwrap_or(StepPhase::Zero)
}

/// `Phi(n)`: `Z` on both qubits of every site with `alpha = pi`.
///
/// Each such site contributes `(-1)^(occupation)` for both of its modes,
/// i.e. `(-Z)(-Z) = Z Z`. Self-adjoint and squaring to one by construction.
pub fn phase_factor_2d(n: Site, lattice: &Lattice2D) -> Result<PauliString> {
    lattice.index(n)?;
    let mut letters = Vec::new();
    for m in lattice.sites() {
        if alpha(m, n) == StepPhase::Pi {
            letters.push((lattice.sigma_qubit(m)?, Pauli::Z));
            letters.push((lattice.tau_qubit(m)?, Pauli::Z));
        }
    }
    Ok(PauliString::from_letters(real(1.0), letters))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DressedOperators {
    pub sigma_plus: PauliOp,
    pub tau_plus: PauliOp,
}

/// `sigma+_n = phi_n^dagger Phi(n)` and `tau+_n = theta_n^dagger Phi(n)`.
pub fn dressed_operators_2d(n: Site, lattice: &Lattice2D) -> Result<DressedOperators> {
    let nq = lattice.n_qubits();
    let phase = PauliOp::from(phase_factor_2d(n, lattice)?);
    Ok(DressedOperators {
        sigma_plus: jw_fermion(lattice.sigma_qubit(n)?, true, nq)? * phase.clone(),
        tau_plus: jw_fermion(lattice.tau_qubit(n)?, true, nq)? * phase,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DressedReport {
    /// `max |Phi - Phi^dagger|` over sites.
    pub phase_hermiticity: f64,
    /// `max |Phi^2 - I|` over sites.
    pub phase_square: f64,
    /// Ordered pairs violating `alpha_m^(n) = alpha_n^(m) + pi`.
    pub alpha_violations: usize,
    /// Largest commutator between dressed operators (`sigma+-`, `tau+-`) at distinct sites.
    pub distinct_site_commutator: f64,
    /// Largest anticommutator between `sigma` and `tau` operators at one site.
    pub same_site_anticommutator: f64,
    /// Canonical relations of the bare `phi` modes.
    pub bare_car_residual: f64,
    /// `max |phi_n Phi(m) - e^{i alpha_n^(m)} Phi(m) phi_n|`.
    pub exchange_residual: f64,
}

/// Checks the algebra of the dressing on every site pair, with explicit matrices.
pub fn dressed_operator_checks(lattice: &Lattice2D) -> Result<DressedReport> {
    let nq = lattice.n_qubits();
    let sp = |op: &PauliOp| SparseOp::from_pauli(op, nq);
    let sites: Vec<Site> = lattice.sites().collect();
    let mut phases = Vec::new();
    let mut dressed = Vec::new();
    let mut bare = Vec::new();
    for &n in &sites {
        phases.push(sp(&PauliOp::from(phase_factor_2d(n, lattice)?))?);
        let d = dressed_operators_2d(n, lattice)?;
        let sig = sp(&d.sigma_plus)?;
        let tau = sp(&d.tau_plus)?;
        dressed.push([sig.adjoint(), sig, tau.adjoint(), tau]);
        bare.push(sp(&jw_fermion(lattice.sigma_qubit(n)?, false, nq)?)?);
    }
    let mut r = DressedReport {
        phase_hermiticity: 0.0,
        phase_square: 0.0,
        alpha_violations: 0,
        distinct_site_commutator: 0.0,
        same_site_anticommutator: 0.0,
        bare_car_residual: 0.0,
        exchange_residual: 0.0,
    };
    for (a, &n) in sites.iter().enumerate() {
        r.phase_hermiticity = r.phase_hermiticity.max(phases[a].max_abs_diff(&phases[a].adjoint()));
        r.phase_square = r.phase_square.max(phases[a].mul(&phases[a]).distance_to_scalar(real(1.0)));
        for x in &dressed[a][0..2] {
            for y in &dressed[a][2..4] {
                r.same_site_anticommutator = r.same_site_anticommutator.max(x.anticommutator(y).max_abs());
            }
        }
        for (b, &m) in sites.iter().enumerate() {
            if a == b {
                if alpha(n, n) != StepPhase::Zero {
                    r.alpha_violations += 1;
                }
            } else {
                if alpha(m, n).sign() != -alpha(n, m).sign() {
                    r.alpha_violations += 1;
                }
                for x in &dressed[a] {
                    for y in &dressed[b] {
                        r.distinct_site_commutator = r.distinct_site_commutator.max(x.commutator(y).max_abs());
                    }
                }
            }
            let delta = if a == b { real(1.0) } else { Complex64::default() };
            r.bare_car_residual = r
                .bare_car_residual
                .max(bare[a].anticommutator(&bare[b].adjoint()).distance_to_scalar(delta))
                .max(bare[a].anticommutator(&bare[b]).max_abs());
            // phi_n Phi(m) = Phi(m) phi_n e^{i alpha_n^(m)}
            let lhs = bare[a].mul(&phases[b]);
            let rhs = phases[b].mul(&bare[a]).scale(real(alpha(n, m).sign()));
            r.exchange_residual = r.exchange_residual.max(lhs.max_abs_diff(&rhs));
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_phase_examples() {
        assert_eq!(step_phase((1, 0)).unwrap(), StepPhase::Zero);
        assert_eq!(step_phase((-1, 0)).unwrap(), StepPhase::Pi);
        assert_eq!(step_phase((0, 1)).unwrap(), StepPhase::Zero);
        assert_eq!(step_phase((0, -1)).unwrap(), StepPhase::Pi);
        assert_eq!(step_phase((-3, 2)).unwrap(), StepPhase::Zero);
        assert_eq!(step_phase((3, -2)).unwrap(), StepPhase::Pi);
        assert_eq!(step_phase((0, 0)), Err(QcaError::ZeroVector));
    }

    #[test]
    fn alpha_is_antisymmetric_mod_pi() {
        for x in -3..=3 {
            for y in -3..=3 {
                if (x, y) != (0, 0) {
                    assert_ne!(alpha((x, y), (0, 0)), alpha((0, 0), (x, y)));
                }
            }
        }
        assert_eq!(alpha((2, 1), (2, 1)), StepPhase::Zero);
    }

    #[test]
    fn origin_phase_is_trivial_on_small_patch() {
        // every other site of a 2x2 patch lies in the upper half-plane of the origin
        let l = Lattice2D::new(2, 2).unwrap();
        assert!(phase_factor_2d((0, 0), &l).unwrap().is_identity());
        let top_right = phase_factor_2d((1, 1), &l).unwrap();
        let zs: Vec<usize> = top_right.letters().keys().copied().collect();
        assert_eq!(zs, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn one_row_reduces_to_chain_string() {
        let l = Lattice2D::new(4, 1).unwrap();
        let nq = l.n_qubits();
        for n in 0..4usize {
            let site = (n as i64, 0);
            let mut chain = PauliOp::identity();
            for k in 0..2 * n {
                chain = chain * (-&PauliOp::z(k));
            }
            assert_eq!(PauliOp::from(phase_factor_2d(site, &l).unwrap()), chain);
            let d = dressed_operators_2d(site, &l).unwrap();
            let a = SparseOp::from_pauli(&d.sigma_plus, nq).unwrap();
            let b = SparseOp::from_pauli(&PauliOp::sigma_plus(2 * n), nq).unwrap();
            assert_eq!(a.max_abs_diff(&b), 0.0);
            let t = SparseOp::from_pauli(&d.tau_plus, nq).unwrap();
            let expected = SparseOp::from_pauli(&(-&PauliOp::z(2 * n) * PauliOp::sigma_plus(2 * n + 1)), nq).unwrap();
            assert_eq!(t.max_abs_diff(&expected), 0.0);
        }
    }

    #[test]
    fn dressing_algebra_on_square() {
        let r = dressed_operator_checks(&Lattice2D::new(2, 2).unwrap()).unwrap();
        assert_eq!(r.phase_hermiticity, 0.0);
        assert_eq!(r.phase_square, 0.0);
        assert_eq!(r.alpha_violations, 0);
        assert!(r.distinct_site_commutator <= 1e-14);
        assert!(r.same_site_anticommutator <= 1e-14);
        assert!(r.bare_car_residual <= 1e-14);
        assert!(r.exchange_residual <= 1e-14);
    }
}
