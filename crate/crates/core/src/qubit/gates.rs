use num_complex::Complex64;

use crate::error::{QcaError, Result};
use crate::numeric::{c64, real, CMatrix};
use crate::params::{AutomatonParams, Boundary};
use crate::qubit::state::{check_dense, check_qubits, check_sparse};
use crate::qubit::{jw_fermion, PauliOp, QubitState, SparseOp};

/// `exp(i gamma G)` for a generator with `G^3 = G`, stored through
/// `cos gamma` and `sin gamma` so the limits stay exact.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitGate {
    pub generator: PauliOp,
    gen_sq: PauliOp,
    cos: f64,
    sin: f64,
}

impl QubitGate {
    pub fn new(generator: PauliOp, cos: f64, sin: f64) -> Self {
        let gen_sq = &generator * &generator;
        Self { generator, gen_sq, cos, sin }
    }

    /// `psi + (cos - 1) G^2 psi + i sin G psi`.
    pub fn apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let g = self.generator.apply(psi);
        let g2 = self.gen_sq.apply(psi);
        let (a, b) = (self.cos - 1.0, c64(0.0, self.sin));
        psi.iter()
            .zip(g.iter().zip(&g2))
            .map(|(p, (x, y))| p + b * x + y * a)
            .collect()
    }

    pub fn to_sparse(&self, n_qubits: usize) -> Result<SparseOp> {
        let id = SparseOp::identity(n_qubits);
        let g = SparseOp::from_pauli(&self.generator, n_qubits)?;
        let g2 = SparseOp::from_pauli(&self.gen_sq, n_qubits)?;
        Ok(id.add(&g2.scale(real(self.cos - 1.0))).add(&g.scale(c64(0.0, self.sin))))
    }
}

/// `phi_a^dagger phi_b + phi_b^dagger phi_a`.
fn hop_generator(a: usize, b: usize, n_qubits: usize) -> Result<PauliOp> {
    let ab = jw_fermion(a, true, n_qubits)? * jw_fermion(b, false, n_qubits)?;
    Ok(&ab + &ab.adjoint())
}

/// Gate mixing `psi-_{n-1}` (qubit `2n-1`, wrapping) with `psi+_n`.
fn gate_a(params: &AutomatonParams, n: usize, n_qubits: usize) -> Result<QubitGate> {
    let left = (2 * n + n_qubits - 1) % n_qubits;
    Ok(QubitGate::new(hop_generator(2 * n, left, n_qubits)?, params.c(), params.s()))
}

/// Gate mixing `psi+_n` with `psi-_n`: a quarter turn with angle `-pi/2`.
fn gate_b(n: usize, n_qubits: usize) -> Result<QubitGate> {
    Ok(QubitGate::new(hop_generator(2 * n, 2 * n + 1, n_qubits)?, 0.0, -1.0))
}

fn check_pair(n: usize, n_qubits: usize) -> Result<()> {
    check_qubits(n_qubits)?;
    if n_qubits % 2 != 0 || n_qubits < 2 {
        return Err(QcaError::Invalid(format!("qubit count {n_qubits} must be even and positive")));
    }
    if 2 * n + 1 >= n_qubits {
        return Err(QcaError::SiteOutOfRange { site: n, n_sites: n_qubits / 2 });
    }
    Ok(())
}

/// Dense matrices of the two gates attached to field site `n`.
///
/// Both are Jordan-Wigner images of fermion exponentials, so the gate whose
/// pair wraps round the ring (`n = 0`) carries a `Z` string.
pub fn gate_unitaries_qubit(
    params: &AutomatonParams,
    n: usize,
    n_qubits: usize,
) -> Result<(CMatrix, CMatrix)> {
    check_pair(n, n_qubits)?;
    check_dense(n_qubits)?;
    Ok((
        gate_a(params, n, n_qubits)?.to_sparse(n_qubits)?.to_dense(),
        gate_b(n, n_qubits)?.to_sparse(n_qubits)?.to_dense(),
    ))
}

/// Qubit automaton on `2N` qubits: the full A row, then the full B row.
#[derive(Debug, Clone)]
pub struct Mqca {
    n_qubits: usize,
    a_row: Vec<QubitGate>,
    b_row: Vec<QubitGate>,
}

impl Mqca {
    pub fn new(params: &AutomatonParams) -> Result<Self> {
        if params.boundary() != Boundary::Periodic {
            return Err(QcaError::RequiresPeriodic("mqca_step"));
        }
        let n_qubits = params.n_modes();
        check_qubits(n_qubits)?;
        let n_sites = params.n_sites();
        Ok(Self {
            n_qubits,
            a_row: (0..n_sites).map(|n| gate_a(params, n, n_qubits)).collect::<Result<_>>()?,
            b_row: (0..n_sites).map(|n| gate_b(n, n_qubits)).collect::<Result<_>>()?,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn step(&self, state: &QubitState) -> Result<QubitState> {
        if state.n_qubits() != self.n_qubits {
            return Err(QcaError::SizeMismatch { expected: self.n_qubits, actual: state.n_qubits() });
        }
        let mut psi = state.amplitudes().to_vec();
        for g in self.a_row.iter().chain(&self.b_row) {
            psi = g.apply(&psi);
        }
        QubitState::from_amplitudes(self.n_qubits, psi)
    }

    pub fn evolve(&self, state: &QubitState, steps: usize) -> Result<QubitState> {
        let mut cur = state.clone();
        for _ in 0..steps {
            cur = self.step(&cur)?;
        }
        Ok(cur)
    }

    /// Explicit matrix of one step.
    pub fn to_sparse(&self) -> Result<SparseOp> {
        check_sparse(self.n_qubits)?;
        let mut u = SparseOp::identity(self.n_qubits);
        for g in self.a_row.iter().chain(&self.b_row) {
            u = g.to_sparse(self.n_qubits)?.mul(&u);
        }
        Ok(u)
    }
}

pub fn mqca_step(params: &AutomatonParams, state: &QubitState) -> Result<QubitState> {
    Mqca::new(params)?.step(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::unitarity_residual;
    use std::f64::consts::PI;

    fn amp(m: &CMatrix, row: usize, col: usize) -> Complex64 {
        m[(row, col)]
    }

    #[test]
    fn b_gate_on_two_qubit_states() {
        let p = AutomatonParams::new(0.4, 2).unwrap();
        let (_, b) = gate_unitaries_qubit(&p, 0, 4).unwrap();
        // qubit 0 up, qubit 1 down -> qubit 0 down, qubit 1 up
        assert!((amp(&b, 0b10, 0b01) - c64(0.0, -1.0)).norm() < 1e-15);
        assert!((amp(&b, 0b01, 0b01)).norm() < 1e-15);
        assert_eq!(amp(&b, 0, 0), real(1.0));
    }

    #[test]
    fn a_gate_on_two_qubit_states() {
        let p = AutomatonParams::new(PI / 8.0, 2).unwrap();
        let (a, _) = gate_unitaries_qubit(&p, 1, 4).unwrap();
        // gate on qubits 1 and 2; excitation on qubit 1
        let col = 0b0010;
        assert!((amp(&a, col, col) - real(p.c())).norm() < 1e-15);
        assert!((amp(&a, 0b0100, col) - c64(0.0, p.s())).norm() < 1e-15);
        assert_eq!(amp(&a, 0, 0), real(1.0));
        assert!(unitarity_residual(&a) < 1e-14);
    }

    #[test]
    fn generator_cubes_to_itself() {
        let g = hop_generator(3, 0, 5).unwrap();
        let g3 = &(&g * &g) * &g;
        assert_eq!(g3, g);
    }

    #[test]
    fn vacuum_is_invariant() {
        let p = AutomatonParams::new(0.7, 4).unwrap();
        let v = QubitState::vacuum(8).unwrap();
        assert_eq!(mqca_step(&p, &v).unwrap(), v);
    }

    #[test]
    fn norm_is_preserved() {
        let p = AutomatonParams::new(PI / 8.0, 6).unwrap();
        let m = Mqca::new(&p).unwrap();
        let amps = (0..1 << 12).map(|k| c64((k as f64 * 0.37).sin(), (k as f64 * 0.11).cos())).collect();
        let psi = QubitState::from_amplitudes(12, amps).unwrap().normalized().unwrap();
        let out = m.evolve(&psi, 50).unwrap();
        assert!((out.norm_sqr() - 1.0).abs() <= 1e-13);
    }

    #[test]
    fn step_conserves_excitation_number() {
        let p = AutomatonParams::new(0.9, 4).unwrap();
        let u = Mqca::new(&p).unwrap().to_sparse().unwrap();
        for b in 0..256usize {
            for &(r, v) in u.column(b) {
                if r.count_ones() != b.count_ones() {
                    assert!(v.norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn bad_indices() {
        let p = AutomatonParams::new(0.4, 2).unwrap();
        assert!(gate_unitaries_qubit(&p, 2, 4).is_err());
        assert!(gate_unitaries_qubit(&p, 0, 5).is_err());
        let open = p.with_boundary(Boundary::Open);
        assert!(Mqca::new(&open).is_err());
    }
}
