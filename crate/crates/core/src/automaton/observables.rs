use serde::Serialize;

use crate::error::{QcaError, Result};
use crate::numeric::{c64, pairwise_sum, pairwise_sum_complex, ZERO};
use crate::params::AutomatonParams;
use crate::state::SpinorState;

/// Probabilities this close to the maximum count as ties in [`typical_path`].
const TIE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Expectations {
    pub x_mean: f64,
    pub p_mean: f64,
    pub x_var: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathPoint {
    pub t: usize,
    /// Position of the most probable site.
    pub x_star: f64,
    pub x_mean: f64,
}

/// `<X>`, `<P>` and `Var X` with site spacing `d = a`.
///
/// Positions are the signed coordinates `n` or `n - N`. Momentum uses the
/// symmetric difference `-i hbar (Psi_{n+1} - Psi_{n-1}) / 2d`.
pub fn position_momentum_expect(state: &SpinorState, params: &AutomatonParams) -> Result<Expectations> {
    let n_sites = params.n_sites();
    if state.n_sites() != n_sites {
        return Err(QcaError::SizeMismatch { expected: n_sites, actual: state.n_sites() });
    }
    let d = params.units().a();
    let hbar = params.units().hbar();
    let probs = state.site_probabilities();
    let xs: Vec<f64> = (0..n_sites).map(|n| d * params.signed_coordinate(n) as f64).collect();
    let x_terms: Vec<f64> = probs.iter().zip(&xs).map(|(p, x)| p * x).collect();
    let x_mean = pairwise_sum(&x_terms);
    let var_terms: Vec<f64> = probs.iter().zip(&xs).map(|(p, x)| p * (x - x_mean).powi(2)).collect();
    let x_var = pairwise_sum(&var_terms);

    let amps = state.amplitudes();
    let mut p_terms = Vec::with_capacity(2 * n_sites);
    for n in 0..n_sites {
        let right = params.shifted_site(n, 1);
        let left = params.shifted_site(n, -1);
        for a in 0..2 {
            let fwd = right.map_or(ZERO, |r| amps[2 * r + a]);
            let bwd = left.map_or(ZERO, |l| amps[2 * l + a]);
            p_terms.push(amps[2 * n + a].conj() * (fwd - bwd));
        }
    }
    // <P> = -i hbar/(2d) sum conj(Psi) (Psi_{n+1} - Psi_{n-1})
    let raw = pairwise_sum_complex(&p_terms);
    let p_mean = (raw * c64(0.0, -hbar / (2.0 * d))).re;
    Ok(Expectations { x_mean, p_mean, x_var })
}

/// Most probable site and mean position for every state of a trajectory.
pub fn typical_path(history: &[SpinorState], params: &AutomatonParams) -> Result<Vec<PathPoint>> {
    if history.is_empty() {
        return Err(QcaError::Invalid("typical_path needs a non-empty history".into()));
    }
    let d = params.units().a();
    history
        .iter()
        .enumerate()
        .map(|(t, state)| {
            let e = position_momentum_expect(state, params)?;
            let probs = state.site_probabilities();
            let pmax = probs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let best = (0..probs.len())
                .filter(|&n| probs[n] >= pmax - TIE_TOL)
                .map(|n| params.signed_coordinate(n))
                .min_by_key(|&x| (x.abs(), x))
                .expect("non-empty lattice");
            Ok(PathPoint { t, x_star: d * best as f64, x_mean: e.x_mean })
        })
        .collect()
}
