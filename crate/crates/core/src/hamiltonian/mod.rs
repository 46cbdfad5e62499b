//! Emergent and time-interpolating Hamiltonians of the automaton.

mod emergent;
mod exponential;
mod locality;

pub use emergent::{emergent_h, three_point_reverse, three_point_step, EmergentH};
pub use exponential::{
    discrete_exponential_check, interpolating_h, interpolating_symbol, BranchStatus,
    ExponentialCheck, InterpolatingH,
};
pub use locality::{locality_profile, LocalityProfile};
