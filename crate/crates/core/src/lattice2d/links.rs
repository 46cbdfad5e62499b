use serde::Serialize;

use super::{step_phase, Lattice2D, Site, StepPhase};
use crate::error::{QcaError, Result};
use crate::qubit::{p_commutation_table, p_observable, PCommutationTable, PauliOp, SparseOp};

/// Auxiliary parity `P_mn = i theta1_m theta2_n` on two distinct sites.
pub fn p_observables_2d(m: Site, n: Site, lattice: &Lattice2D) -> Result<PauliOp> {
    if m == n {
        return Err(QcaError::CoincidentSites);
    }
    p_observable(lattice.tau_qubit(m)?, lattice.tau_qubit(n)?, lattice.n_qubits())
}

/// Commutation table of every `P_mn` on the patch.
pub fn p_commutation_table_2d(lattice: &Lattice2D) -> Result<PCommutationTable> {
    let modes: Vec<usize> = lattice.sites().map(|s| lattice.tau_qubit(s)).collect::<Result<_>>()?;
    p_commutation_table(&modes, lattice.n_qubits())
}

/// A validated link family and the site pairs `(n, n + l)` it couples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrientedLinks {
    pub links: Vec<Site>,
    pub pairs: Vec<(Site, Site)>,
}

impl OrientedLinks {
    pub fn contains_pair(&self, from: Site, to: Site) -> bool {
        self.pairs.contains(&(from, to))
    }
}

/// Orients every link into the half-plane where the step phase vanishes,
/// removes duplicates, and checks that all parities on the patch commute.
pub fn oriented_links(lattice: &Lattice2D, links: &[Site]) -> Result<OrientedLinks> {
    if links.is_empty() {
        return Err(QcaError::Invalid("at least one link is required".into()));
    }
    let mut oriented: Vec<Site> = Vec::new();
    for &l in links {
        let l = match step_phase(l)? {
            StepPhase::Zero => l,
            StepPhase::Pi => (-l.0, -l.1),
        };
        if oriented.contains(&l) {
            continue;
        }
        if let Some(&first) = oriented.iter().find(|o| o.0 * l.1 - o.1 * l.0 == 0) {
            return Err(QcaError::ParallelLinks { first, second: l });
        }
        oriented.push(l);
    }

    let mut pairs = Vec::new();
    for &l in &oriented {
        for n in lattice.sites() {
            let m = (n.0 + l.0, n.1 + l.1);
            if lattice.contains(m) {
                pairs.push((n, m));
            }
        }
    }
    let nq = lattice.n_qubits();
    let ps: Vec<SparseOp> = pairs
        .iter()
        .map(|&(n, m)| SparseOp::from_pauli(&p_observables_2d(n, m, lattice)?, nq))
        .collect::<Result<_>>()?;
    for a in 0..ps.len() {
        for b in a + 1..ps.len() {
            let residual = ps[a].commutator(&ps[b]).max_abs();
            if residual > 1e-12 {
                return Err(QcaError::NonCommutingLinks {
                    first: pairs[a],
                    second: pairs[b],
                    residual,
                });
            }
        }
    }
    Ok(OrientedLinks { links: oriented, pairs })
}
