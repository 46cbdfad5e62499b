use crate::error::{QcaError, Result};
use crate::hamiltonian::emergent_h;
use crate::numeric::{c64, real, CMatrix, ZERO};
use crate::params::{AutomatonParams, Boundary};
use crate::qubit::state::{check_dense, check_qubits};
use crate::qubit::{jw_fermion, PauliOp};

fn check(n_qubits: usize) -> Result<()> {
    check_qubits(n_qubits)?;
    if n_qubits < 4 || n_qubits % 2 != 0 {
        return Err(QcaError::Invalid(format!("spin model needs an even qubit count >= 4, got {n_qubits}")));
    }
    Ok(())
}

/// Spin-chain form of the emergent Hamiltonian on an open chain:
///
/// `(i hbar s / 2 tau) sum_n (-1)^n s+_n Z_{n-1} s-_{n-2} + hbar omega sum_m s+_{2m+1} s-_{2m} + h.c.`
///
/// The three-site terms are next-nearest-neighbour hops within one spinor
/// component; the two-site terms are the on-site mass coupling.
pub fn spin_model_op(params: &AutomatonParams, n_qubits: usize) -> Result<PauliOp> {
    check(n_qubits)?;
    let units = params.units();
    let hop = 0.5 * units.hbar() * params.s() / units.tau();
    let mass = units.hbar() * params.omega();
    let mut h = PauliOp::zero();
    for n in 2..n_qubits {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let term = &(&PauliOp::sigma_plus(n) * &PauliOp::z(n - 1)) * &PauliOp::sigma_minus(n - 2);
        h = &h + &term.scale(c64(0.0, sign * hop));
    }
    for m in 0..n_qubits / 2 {
        let term = &PauliOp::sigma_plus(2 * m + 1) * &PauliOp::sigma_minus(2 * m);
        h = &h + &term.scale(real(mass));
    }
    Ok(&h + &h.adjoint())
}

/// Jordan-Wigner image of `sum_ij H_ij phi_i^dagger phi_j` for the emergent
/// Hamiltonian on an open chain of `n_qubits / 2` field sites.
pub fn emergent_h_jw(params: &AutomatonParams, n_qubits: usize) -> Result<PauliOp> {
    check(n_qubits)?;
    let p = params.with_boundary(Boundary::Open).with_sites(n_qubits / 2)?;
    let dense = emergent_h(&p).dense();
    let mut h = PauliOp::zero();
    for i in 0..n_qubits {
        for j in 0..n_qubits {
            let v = dense[(i, j)];
            if v == ZERO {
                continue;
            }
            let bilinear = jw_fermion(i, true, n_qubits)? * jw_fermion(j, false, n_qubits)?;
            h = &h + &bilinear.scale(v);
        }
    }
    Ok(h)
}

/// Dense spin-model Hamiltonian.
pub fn spin_model_h(params: &AutomatonParams, n_qubits: usize) -> Result<CMatrix> {
    check_dense(n_qubits)?;
    Ok(spin_model_op(params, n_qubits)?.to_dense(n_qubits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{hermiticity_residual, max_abs};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn matches_fermion_form() {
        for theta in [0.0, 0.3, FRAC_PI_4, FRAC_PI_2] {
            let p = AutomatonParams::new(theta, 4).unwrap();
            for n_q in [4, 6, 8] {
                let spin = spin_model_h(&p, n_q).unwrap();
                let fermi = emergent_h_jw(&p, n_q).unwrap().to_dense(n_q);
                assert!(max_abs(&(spin - fermi)) <= 1e-12, "theta={theta} n_q={n_q}");
            }
        }
    }

    #[test]
    fn massless_has_only_three_site_terms() {
        let p = AutomatonParams::new(FRAC_PI_2, 4).unwrap();
        let h = spin_model_op(&p, 6).unwrap();
        for t in h.terms() {
            assert_eq!(t.letters().len(), 3);
        }
    }

    #[test]
    fn hermitian() {
        let h = spin_model_h(&AutomatonParams::new(0.8, 4).unwrap(), 8).unwrap();
        assert!(hermiticity_residual(&h) <= 1e-14);
    }

    #[test]
    fn rejects_small_or_odd() {
        let p = AutomatonParams::new(0.8, 4).unwrap();
        assert!(spin_model_op(&p, 3).is_err());
        assert!(spin_model_op(&p, 5).is_err());
    }
}
