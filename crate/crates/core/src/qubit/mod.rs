//! Qubit realisation of the automaton.
//!
//! Basis index bit `j` is qubit `j`; a set bit is spin up, which is the
//! occupied state of flat mode `j`. `Z` is `+1` on up, so
//! `sigma+ = (X + iY)/2` raises down to up and the vacuum is all-down.

mod gates;
mod jw;
mod majorana;
mod pauli;
mod sparse;
mod spin_model;
mod state;

pub use gates::{gate_unitaries_qubit, mqca_step, Mqca, QubitGate};
pub use jw::{
    anticommutation_residuals, jw_fermion, jw_number, string_identity_check, vacuum_theorem_check,
    StringIdentityReport, VacuumReport,
};
pub use majorana::{
    majorana_1, majorana_2, majorana_p_observables_1d, p_commutation_table, p_observable,
    MajoranaReport, PCommutationTable,
};
pub use pauli::{Pauli, PauliOp, PauliString};
pub use sparse::SparseOp;
pub use spin_model::{emergent_h_jw, spin_model_h, spin_model_op};
pub use state::{QubitState, DENSE_QUBIT_LIMIT, MAX_QUBITS, SPARSE_QUBIT_LIMIT};
