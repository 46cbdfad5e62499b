use serde::Serialize;

use crate::error::{QcaError, Result};
use crate::numeric::{max_abs_slice, real, ZERO};
use crate::qubit::state::{check_dense, check_qubits, check_sparse};
use crate::qubit::{PauliOp, QubitState, SparseOp};

/// `phi_j = prod_{k<j} (-Z_k) sigma-_j`, or its adjoint.
pub fn jw_fermion(j: usize, dagger: bool, n_qubits: usize) -> Result<PauliOp> {
    check_qubits(n_qubits)?;
    if j >= n_qubits {
        return Err(QcaError::SiteOutOfRange { site: j, n_sites: n_qubits });
    }
    let mut op = if dagger { PauliOp::sigma_plus(j) } else { PauliOp::sigma_minus(j) };
    for k in 0..j {
        op = &(-&PauliOp::z(k)) * &op;
    }
    Ok(op)
}

/// `phi_j^dagger phi_j`.
pub fn jw_number(j: usize, n_qubits: usize) -> Result<PauliOp> {
    Ok(jw_fermion(j, true, n_qubits)? * jw_fermion(j, false, n_qubits)?)
}

/// Largest deviations of `{phi_i, phi_j^dagger} - delta_ij` and
/// `{phi_i, phi_j}` over all mode pairs, from explicit matrices.
pub fn anticommutation_residuals(n_qubits: usize) -> Result<(f64, f64)> {
    check_sparse(n_qubits)?;
    let ann: Vec<SparseOp> = (0..n_qubits)
        .map(|j| SparseOp::from_pauli(&jw_fermion(j, false, n_qubits)?, n_qubits))
        .collect::<Result<_>>()?;
    let cre: Vec<SparseOp> = ann.iter().map(SparseOp::adjoint).collect();
    let (mut mixed, mut same) = (0.0f64, 0.0f64);
    for i in 0..n_qubits {
        for j in 0..n_qubits {
            let delta = if i == j { real(1.0) } else { ZERO };
            mixed = mixed.max(ann[i].anticommutator(&cre[j]).distance_to_scalar(delta));
            same = same.max(ann[i].anticommutator(&ann[j]).max_abs());
        }
    }
    Ok((mixed, same))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StringIdentityReport {
    pub j: usize,
    pub l: usize,
    /// Residual of `phi_{j+l}^dagger phi_j = (-1)^(l-1) sigma-_j S sigma+_{j+l}`.
    pub residual: f64,
    /// Residual of the same identity with the overall sign `(-1)^l`.
    pub flipped_sign_residual: f64,
}

/// Compares the fermion hop with its string form as explicit matrices.
///
/// `S` is the product of `Z` over the qubits strictly between `j` and `j+l`.
/// With `Z = +1` on the occupied state the sign is `(-1)^(l-1)`; the report
/// also carries the residual for the opposite sign.
pub fn string_identity_check(j: usize, l: usize, n_qubits: usize) -> Result<StringIdentityReport> {
    check_sparse(n_qubits)?;
    if l == 0 || j + l >= n_qubits {
        return Err(QcaError::Invalid(format!("string identity needs 1 <= l and j + l < n_q (j={j}, l={l})")));
    }
    let lhs = SparseOp::from_pauli(&jw_fermion(j + l, true, n_qubits)?, n_qubits)?
        .mul(&SparseOp::from_pauli(&jw_fermion(j, false, n_qubits)?, n_qubits)?);
    let mut rhs = SparseOp::from_pauli(&PauliOp::sigma_minus(j), n_qubits)?;
    for k in j + 1..j + l {
        rhs = rhs.mul(&SparseOp::from_pauli(&PauliOp::z(k), n_qubits)?);
    }
    rhs = rhs.mul(&SparseOp::from_pauli(&PauliOp::sigma_plus(j + l), n_qubits)?);
    let sign = if (l - 1) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(StringIdentityReport {
        j,
        l,
        residual: lhs.max_abs_diff(&rhs.scale(real(sign))),
        flipped_sign_residual: lhs.max_abs_diff(&rhs.scale(real(-sign))),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VacuumReport {
    pub n_qubits: usize,
    /// `max_n |phi_n |Omega>|`.
    pub annihilation_residual: f64,
    /// Dimension of the common kernel of all `phi_n`.
    pub kernel_dimension: usize,
    /// `max_n |phi_n^dagger |Omega> - sigma+_n |Omega>|`.
    pub creation_identity_residual: f64,
}

/// Vacuum annihilation, uniqueness and the creation identity.
///
/// The common kernel of the `phi_n` equals the kernel of the positive
/// operator `sum_n phi_n^dagger phi_n`, which is diagonalized densely.
pub fn vacuum_theorem_check(n_qubits: usize) -> Result<VacuumReport> {
    check_dense(n_qubits)?;
    if n_qubits == 0 {
        return Err(QcaError::Invalid("vacuum check needs at least one qubit".into()));
    }
    let omega = QubitState::vacuum(n_qubits)?;
    let mut annihilation_residual = 0.0f64;
    let mut creation_identity_residual = 0.0f64;
    let mut number = SparseOp::identity(n_qubits).scale(ZERO);
    for n in 0..n_qubits {
        let phi = SparseOp::from_pauli(&jw_fermion(n, false, n_qubits)?, n_qubits)?;
        annihilation_residual = annihilation_residual.max(max_abs_slice(&phi.apply(omega.amplitudes())));
        let created = phi.adjoint().apply(omega.amplitudes());
        let raised = omega.apply(&PauliOp::sigma_plus(n));
        creation_identity_residual = creation_identity_residual
            .max(crate::numeric::max_abs_diff(&created, raised.amplitudes()));
        number = number.add(&phi.adjoint().mul(&phi));
    }
    let eig = number.to_dense().symmetric_eigen();
    let kernel_dimension = eig.eigenvalues.iter().filter(|v| v.abs() < 1e-10).count();
    Ok(VacuumReport { n_qubits, annihilation_residual, kernel_dimension, creation_identity_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::max_abs;

    #[test]
    fn first_mode_has_no_string() {
        assert_eq!(jw_fermion(0, false, 3).unwrap(), PauliOp::sigma_minus(0));
    }

    #[test]
    fn third_mode_string_signs_cancel() {
        let expected = &(&PauliOp::z(0) * &PauliOp::z(1)) * &PauliOp::sigma_minus(2);
        assert_eq!(jw_fermion(2, false, 4).unwrap(), expected);
    }

    #[test]
    fn distinct_modes_anticommute() {
        let a = jw_fermion(1, false, 4).unwrap().to_dense(4);
        let b = jw_fermion(3, true, 4).unwrap().to_dense(4);
        assert!(max_abs(&(&a * &b + &b * &a)) <= 1e-15);
    }

    #[test]
    fn canonical_relations() {
        let (mixed, same) = anticommutation_residuals(6).unwrap();
        assert!(mixed <= 1e-15 && same <= 1e-15);
    }

    #[test]
    fn nearest_neighbour_hop_has_no_string() {
        let r = string_identity_check(1, 1, 4).unwrap();
        assert!(r.residual <= 1e-15);
        assert!(r.flipped_sign_residual > 0.5);
    }

    #[test]
    fn longer_strings() {
        for l in 1..=4 {
            let r = string_identity_check(0, l, 5).unwrap();
            assert!(r.residual <= 1e-14, "l={l}");
        }
        assert!(string_identity_check(0, 3, 5).unwrap().residual <= 1e-14);
        assert!(string_identity_check(2, 3, 5).is_err());
    }

    #[test]
    fn vacuum_is_unique() {
        let r = vacuum_theorem_check(4).unwrap();
        assert_eq!(r.kernel_dimension, 1);
        assert_eq!(r.annihilation_residual, 0.0);
        assert!(r.creation_identity_residual <= 1e-15);
    }

    #[test]
    fn out_of_range_mode() {
        assert!(jw_fermion(4, false, 4).is_err());
    }
}
