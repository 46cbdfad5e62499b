//! The Dirac automaton on a one-dimensional lattice of field sites.

mod band;
mod margolus;
mod momentum;
mod observables;
mod states;
mod two_particle;

pub use band::{build_band_unitary, BandUnitary, Direction};
pub use margolus::{margolus_dense, margolus_step, GatePair};
pub use momentum::{
    dispersion_scan, group_velocity, invariant_state, max_group_velocity, momentum_grid,
    momentum_symbol, momentum_unitary, wrap_phase, DispersionRow, MomentumMode,
};
pub use observables::{position_momentum_expect, typical_path, Expectations, PathPoint};
pub use states::{double_slit_state, gaussian_packet};
pub use two_particle::{evolve_two_particle, two_particle_from_singles};
