use log::debug;
use num_complex::Complex64;
use serde::Serialize;

use super::{dressed_operators_2d, p_observables_2d, phase_factor_2d, Lattice2D, OrientedLinks, Site};
use crate::error::{QcaError, Result};
use crate::numeric::{c64, max_abs_slice, real, von_neumann_entropy, CMatrix};
use crate::qubit::{jw_fermion, majorana_1, majorana_2, PauliOp, QubitState, SparseOp};

const OVERLAP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointVacuum {
    #[serde(skip)]
    pub state: QubitState,
    pub links: OrientedLinks,
    /// Eigenvalue of each `P_{n, n+l}`, aligned with `links.pairs`.
    pub eigenvalues: Vec<i8>,
    /// `|<down...down|vacuum>|` before normalisation.
    pub overlap: f64,
    /// `max ||(P - p) vacuum||`.
    pub eigen_residual: f64,
    /// `max ||phi_n vacuum||`.
    pub annihilation_residual: f64,
    /// Trace distance of the reduced `sigma` state from `|down...down>`.
    pub sigma_trace_distance: f64,
    /// Entropy of each single `tau` qubit, in site order.
    pub tau_site_entropies: Vec<f64>,
    /// Entropy of the first half of the `tau` qubits against the rest.
    pub tau_half_entropy: f64,
}

impl JointVacuum {
    pub fn eigenvalue(&self, from: Site, to: Site) -> Option<i8> {
        self.links.pairs.iter().position(|&p| p == (from, to)).map(|i| self.eigenvalues[i])
    }

    pub fn max_tau_entropy(&self) -> f64 {
        self.tau_site_entropies.iter().copied().fold(self.tau_half_entropy, f64::max)
    }
}

fn project(ps: &[SparseOp], signs: &[i8], state: &[Complex64]) -> Vec<Complex64> {
    let mut v = state.to_vec();
    for (p, &s) in ps.iter().zip(signs) {
        let pv = p.apply(&v);
        for (x, y) in v.iter_mut().zip(pv) {
            *x = (*x + y * f64::from(s)) * 0.5;
        }
    }
    v
}

/// Projects the all-down state onto a joint eigenvector of the parities
/// `P_{n, n+l}`. Sign patterns are tried in lexicographic order (`+1` first)
/// and the first one with maximal overlap wins.
pub fn joint_vacuum_2d(lattice: &Lattice2D, links: &OrientedLinks) -> Result<JointVacuum> {
    let nq = lattice.n_qubits();
    let ps: Vec<SparseOp> = links
        .pairs
        .iter()
        .map(|&(n, m)| SparseOp::from_pauli(&p_observables_2d(n, m, lattice)?, nq))
        .collect::<Result<_>>()?;
    let down = QubitState::vacuum(nq)?;
    let n_links = ps.len();
    if n_links > 20 {
        return Err(QcaError::Invalid(format!("{n_links} parities is too many sign patterns to scan")));
    }

    let mut best: Option<(Vec<i8>, Vec<Complex64>, f64)> = None;
    for pattern in 0u32..1 << n_links {
        let signs: Vec<i8> = (0..n_links).map(|k| if pattern >> (n_links - 1 - k) & 1 == 0 { 1 } else { -1 }).collect();
        let v = project(&ps, &signs, down.amplitudes());
        let overlap = crate::numeric::norm_sqr(&v).sqrt();
        if best.as_ref().is_none_or(|b| overlap > b.2 + OVERLAP_TOL) {
            best = Some((signs, v, overlap));
        }
    }
    let (eigenvalues, amps, overlap) = best.ok_or(QcaError::ZeroNorm)?;
    if overlap <= OVERLAP_TOL {
        return Err(QcaError::InconsistentEigenvalues("no sign pattern overlaps the all-down state".into()));
    }
    debug!("joint vacuum signs {eigenvalues:?}, overlap {overlap}");
    let state = QubitState::from_amplitudes(nq, amps)?.normalized()?;

    let mut eigen_residual: f64 = 0.0;
    for (p, &s) in ps.iter().zip(&eigenvalues) {
        let pv = p.apply(state.amplitudes());
        let r: Vec<Complex64> = pv.iter().zip(state.amplitudes()).map(|(a, b)| a - b * f64::from(s)).collect();
        eigen_residual = eigen_residual.max(crate::numeric::norm_sqr(&r).sqrt());
    }
    if eigen_residual > 1e-10 {
        return Err(QcaError::InconsistentEigenvalues(format!("projected state misses its eigenvalues by {eigen_residual:e}")));
    }

    let mut annihilation_residual: f64 = 0.0;
    for s in lattice.sites() {
        let v = state.apply(&jw_fermion(lattice.sigma_qubit(s)?, false, nq)?);
        annihilation_residual = annihilation_residual.max(v.norm_sqr().sqrt());
    }

    let sigma_qubits: Vec<usize> = lattice.sites().map(|s| lattice.sigma_qubit(s)).collect::<Result<_>>()?;
    let tau_qubits: Vec<usize> = lattice.sites().map(|s| lattice.tau_qubit(s)).collect::<Result<_>>()?;
    let mut diff = state.reduced_density(&sigma_qubits)?;
    diff[(0, 0)] -= real(1.0);
    let sigma_trace_distance = 0.5 * diff.symmetric_eigenvalues().iter().map(|l| l.abs()).sum::<f64>();
    let tau_site_entropies = tau_qubits
        .iter()
        .map(|&q| state.entanglement_entropy(&[q]))
        .collect::<Result<Vec<_>>>()?;
    let half = &tau_qubits[..tau_qubits.len() / 2];
    let tau_half_entropy = if half.is_empty() {
        0.0
    } else {
        let rho: CMatrix = state.reduced_density(half)?;
        von_neumann_entropy(&rho)
    };

    Ok(JointVacuum {
        state,
        links: links.clone(),
        eigenvalues,
        overlap,
        eigen_residual,
        annihilation_residual,
        sigma_trace_distance,
        tau_site_entropies,
        tau_half_entropy,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalityReport {
    pub from: Site,
    pub to: Site,
    /// Recorded eigenvalue `p` of `P_{n, n+l}` in the vacuum.
    pub eigenvalue: i8,
    /// Sign in front of the dressed hopping that makes the restricted identity hold.
    pub sign: i8,
    /// `phi_n^dagger phi_m P_nm = -i sigma+_n sigma-_m tau1_n tau2_m`, on the full space.
    pub operator_identity_residual: f64,
    /// Restricted identity with `sign`, on the vacuum and its one-particle excitations.
    pub eigenspace_residual: f64,
    /// Same with the opposite sign; a witness that the sign matters.
    pub opposite_sign_residual: f64,
    /// Largest difference between one-particle matrix elements of the two hopping forms.
    pub matrix_element_residual: f64,
}

/// Compares the bare hopping between `n` and `n + l` with its dressed form.
///
/// On the parity eigenspace `P_{n,n+l} = p` the bare hopping equals
/// `-p i (sigma+_n sigma-_m - sigma+_m sigma-_n) tau1_n tau2_m`.
pub fn locality_identity_2d(n: Site, l: Site, lattice: &Lattice2D, vacuum: &JointVacuum) -> Result<LocalityReport> {
    let m = (n.0 + l.0, n.1 + l.1);
    lattice.index(n)?;
    if !lattice.contains(m) {
        return Err(QcaError::NotLinked { from: n, to: m });
    }
    let p = vacuum.eigenvalue(n, m).ok_or(QcaError::NotLinked { from: n, to: m })?;
    let nq = lattice.n_qubits();
    let sp = |op: &PauliOp| SparseOp::from_pauli(op, nq);

    let dn = dressed_operators_2d(n, lattice)?;
    let dm = dressed_operators_2d(m, lattice)?;
    let phase_n = PauliOp::from(phase_factor_2d(n, lattice)?);
    let phase_m = PauliOp::from(phase_factor_2d(m, lattice)?);
    let tau1_n = majorana_1(lattice.tau_qubit(n)?, nq)? * phase_n;
    let tau2_m = majorana_2(lattice.tau_qubit(m)?, nq)? * phase_m;
    let taus = tau1_n * tau2_m;
    let (sp_n, sm_n) = (dn.sigma_plus.clone(), dn.sigma_plus.adjoint());
    let (sp_m, sm_m) = (dm.sigma_plus.clone(), dm.sigma_plus.adjoint());

    let phi_n = jw_fermion(lattice.sigma_qubit(n)?, false, nq)?;
    let phi_m = jw_fermion(lattice.sigma_qubit(m)?, false, nq)?;
    let forward = phi_n.adjoint() * phi_m.clone();
    let hop = sp(&(&forward + &forward.adjoint()))?;

    let lhs = sp(&(forward * p_observables_2d(n, m, lattice)?))?;
    let rhs = sp(&(sp_n.clone() * sm_m.clone() * taus.clone()).scale(c64(0.0, -1.0)))?;
    let operator_identity_residual = lhs.max_abs_diff(&rhs);

    let dressed = sp(&((sp_n * sm_m - sp_m * sm_n) * taus).scale(c64(0.0, 1.0)))?;
    let sign = -p;

    let mut probes = vec![vacuum.state.amplitudes().to_vec()];
    let mut excitations = Vec::new();
    for k in lattice.sites() {
        let v = sp(&jw_fermion(lattice.sigma_qubit(k)?, true, nq)?)?.apply(vacuum.state.amplitudes());
        probes.push(v.clone());
        excitations.push(v);
    }
    let residual_with = |s: i8| {
        probes
            .iter()
            .map(|v| {
                let a = hop.apply(v);
                let b = dressed.apply(v);
                let d: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x - y * f64::from(s)).collect();
                max_abs_slice(&d)
            })
            .fold(0.0, f64::max)
    };
    let eigenspace_residual = residual_with(sign);
    let opposite_sign_residual = residual_with(-sign);

    let mut matrix_element_residual: f64 = 0.0;
    for right in &excitations {
        let a = hop.apply(right);
        let b = dressed.apply(right);
        for left in &excitations {
            let ea = crate::numeric::inner(left, &a);
            let eb = crate::numeric::inner(left, &b) * f64::from(sign);
            matrix_element_residual = matrix_element_residual.max((ea - eb).norm());
        }
    }

    Ok(LocalityReport {
        from: n,
        to: m,
        eigenvalue: p,
        sign,
        operator_identity_residual,
        eigenspace_residual,
        opposite_sign_residual,
        matrix_element_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice2d::oriented_links;

    #[test]
    fn horizontal_vacuum_on_square() {
        let l = Lattice2D::new(2, 2).unwrap();
        let links = oriented_links(&l, &[(1, 0)]).unwrap();
        let v = joint_vacuum_2d(&l, &links).unwrap();
        assert_eq!(v.eigenvalues, vec![1, 1]);
        assert!(v.eigen_residual <= 1e-12);
        assert!(v.annihilation_residual <= 1e-12);
        assert!(v.sigma_trace_distance <= 1e-12);
        assert!(v.max_tau_entropy() > 0.1);
        for e in &v.tau_site_entropies {
            assert!((e - std::f64::consts::LN_2).abs() < 1e-12);
        }
    }

    #[test]
    fn locality_identity_both_directions() {
        for (w, h, link) in [(2, 2, (1, 0)), (2, 2, (0, 1)), (2, 3, (0, 1)), (3, 2, (1, 0))] {
            let l = Lattice2D::new(w, h).unwrap();
            let links = oriented_links(&l, &[link]).unwrap();
            let v = joint_vacuum_2d(&l, &links).unwrap();
            for &(from, _) in &links.pairs {
                let r = locality_identity_2d(from, link, &l, &v).unwrap();
                assert!(r.operator_identity_residual <= 1e-14, "{r:?}");
                assert!(r.eigenspace_residual <= 1e-12, "{r:?}");
                assert!(r.matrix_element_residual <= 1e-12, "{r:?}");
                assert!(r.opposite_sign_residual > 0.1, "{r:?}");
                assert_eq!(r.sign, -r.eigenvalue);
            }
        }
    }

    #[test]
    fn unlinked_sites_are_rejected() {
        let l = Lattice2D::new(2, 2).unwrap();
        let links = oriented_links(&l, &[(1, 0)]).unwrap();
        let v = joint_vacuum_2d(&l, &links).unwrap();
        assert!(matches!(locality_identity_2d((0, 0), (0, 1), &l, &v), Err(QcaError::NotLinked { .. })));
        assert!(matches!(locality_identity_2d((1, 0), (1, 0), &l, &v), Err(QcaError::NotLinked { .. })));
    }
}
