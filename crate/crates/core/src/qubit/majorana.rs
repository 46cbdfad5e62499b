use serde::Serialize;

use crate::error::{QcaError, Result};
use crate::numeric::{c64, real};
use crate::qubit::state::check_sparse;
use crate::qubit::{jw_fermion, PauliOp, SparseOp};

/// `phi^dagger + phi`.
pub fn majorana_1(j: usize, n_qubits: usize) -> Result<PauliOp> {
    Ok(jw_fermion(j, true, n_qubits)? + jw_fermion(j, false, n_qubits)?)
}

/// `i (phi^dagger - phi)`.
pub fn majorana_2(j: usize, n_qubits: usize) -> Result<PauliOp> {
    Ok((jw_fermion(j, true, n_qubits)? - jw_fermion(j, false, n_qubits)?).scale(c64(0.0, 1.0)))
}

/// `P_ij = i phi1_i phi2_j` for distinct modes.
pub fn p_observable(i: usize, j: usize, n_qubits: usize) -> Result<PauliOp> {
    if i == j {
        return Err(QcaError::CoincidentSites);
    }
    Ok((majorana_1(i, n_qubits)? * majorana_2(j, n_qubits)?).scale(c64(0.0, 1.0)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MajoranaReport {
    #[serde(skip)]
    pub p: PauliOp,
    pub hermiticity_residual: f64,
    pub square_residual: f64,
    /// Residual of `phi_{j+2l}^dagger phi_j P_{j+2l+1, j+1} = -i s-_j s+_{j+2l} Y_{j+1} X_{j+2l+1}`.
    pub identity_residual: f64,
}

/// Dirac modes on even qubits, auxiliary Majorana modes on odd ones.
pub fn majorana_p_observables_1d(j: usize, l: usize, n_qubits: usize) -> Result<MajoranaReport> {
    check_sparse(n_qubits)?;
    if j % 2 != 0 || l == 0 || j + 2 * l + 1 >= n_qubits {
        return Err(QcaError::Invalid(format!(
            "need even j, l >= 1 and j + 2l + 1 < n_q (j={j}, l={l}, n_q={n_qubits})"
        )));
    }
    let sp = |op: &PauliOp| SparseOp::from_pauli(op, n_qubits);
    let p_op = p_observable(j + 2 * l + 1, j + 1, n_qubits)?;
    let p = sp(&p_op)?;
    let hermiticity_residual = p.max_abs_diff(&p.adjoint());
    let square_residual = p.mul(&p).distance_to_scalar(real(1.0));
    let lhs = sp(&jw_fermion(j + 2 * l, true, n_qubits)?)?
        .mul(&sp(&jw_fermion(j, false, n_qubits)?)?)
        .mul(&p);
    let rhs = sp(&PauliOp::sigma_minus(j))?
        .mul(&sp(&PauliOp::sigma_plus(j + 2 * l))?)
        .mul(&sp(&PauliOp::y(j + 1))?)
        .mul(&sp(&PauliOp::x(j + 2 * l + 1))?)
        .scale(c64(0.0, -1.0));
    Ok(MajoranaReport {
        p: p_op,
        hermiticity_residual,
        square_residual,
        identity_residual: lhs.max_abs_diff(&rhs),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PCommutationTable {
    /// Largest `|[P, P']|` over pairs with no shared Majorana operator.
    pub commuting_max: f64,
    /// Largest `|{P, P'}|` over pairs sharing the first or the second index.
    pub anticommuting_max: f64,
    pub pairs_checked: usize,
}

/// Commutation table of all `P_ij` built on the listed modes.
pub fn p_commutation_table(modes: &[usize], n_qubits: usize) -> Result<PCommutationTable> {
    check_sparse(n_qubits)?;
    let mut ps = Vec::new();
    for &i in modes {
        for &j in modes {
            if i != j {
                ps.push(((i, j), SparseOp::from_pauli(&p_observable(i, j, n_qubits)?, n_qubits)?));
            }
        }
    }
    let mut table = PCommutationTable { commuting_max: 0.0, anticommuting_max: 0.0, pairs_checked: 0 };
    for (a, ((i, j), pa)) in ps.iter().enumerate() {
        for ((k, l), pb) in &ps[a + 1..] {
            let shares = i == k || j == l;
            if shares {
                table.anticommuting_max = table.anticommuting_max.max(pa.anticommutator(pb).max_abs());
            } else {
                table.commuting_max = table.commuting_max.max(pa.commutator(pb).max_abs());
            }
            table.pairs_checked += 1;
        }
    }
    Ok(table)
}
