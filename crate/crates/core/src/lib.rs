//! Dirac quantum cellular automaton in one space dimension.
//!
//! The crate is organised around the single-step band unitary of the Dirac
//! automaton and the machinery needed to cross-check it:
//!
//! * [`params`] and [`state`]: parameters, units, mode bookkeeping and the
//!   one- and two-particle amplitude containers.
//! * [`automaton`]: the band unitary, its momentum-space symbol, Margolus gate
//!   rows, packet states, observables and two-particle evolution.
//! * [`hamiltonian`]: the emergent Hamiltonian, the three-point update rule,
//!   the arcsin exponential map and the time-interpolating Hamiltonian.
//! * [`qubit`]: Pauli algebra, Jordan-Wigner fermions, the qubit (MQCA)
//!   realisation of the automaton and the vacuum/Majorana identities.
//! * [`lattice2d`]: the self-adjoint two-dimensional phase factor with
//!   auxiliary Majorana modes.
//! * [`fock`]: a brute-force occupation-number simulator that never touches
//!   Pauli operators and serves as the independent oracle.
//!
//! Amplitude vectors use the flat mode index `j = 2n` for the `+` component
//! and `j = 2n + 1` for the `-` component of site `n`. Qubit `j` carries mode
//! `j`; basis index bit `j` set means qubit `j` is up (occupied).

pub mod automaton;
pub mod error;
pub mod fock;
pub mod hamiltonian;
pub mod lattice2d;
pub mod numeric;
pub mod params;
pub mod qubit;
pub mod state;

pub use error::{QcaError, Result};
pub use num_complex::Complex64;
pub use params::{AutomatonParams, Boundary, Component, UnitSystem};
pub use state::{SpinorState, TwoParticleState};
