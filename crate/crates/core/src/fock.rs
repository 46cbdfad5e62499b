//! Occupation-number simulator used as an independent oracle.
//!
//! Basis states are bitmasks over the mode order of [`crate::params::mode_index`];
//! bit `j` set means mode `j` is occupied. Creation and annihilation carry the
//! sign `(-1)^(occupied modes below j)`. Nothing here goes through Pauli
//! operators or the automaton step.

use log::warn;
use nalgebra::DVector;
use num_complex::Complex64;
use rayon::prelude::*;
use std::sync::OnceLock;

use crate::error::{QcaError, Result};
use crate::numeric::{self, norm_sqr, unitarity_residual, CMatrix, ZERO};
use crate::state::{SpinorState, TwoParticleState, NORM_TOL};

pub const MAX_MODES: usize = 24;

/// Largest particle-number sector the propagator will build.
pub const MAX_SECTOR_DIM: usize = 1 << 18;

const BRANCH_NUDGE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Create,
    Annihilate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    n_modes: usize,
    amps: Vec<Complex64>,
}

fn check_modes(n_modes: usize) -> Result<()> {
    if n_modes > MAX_MODES {
        return Err(QcaError::TooManyQubits { n_qubits: n_modes, limit: MAX_MODES });
    }
    Ok(())
}

/// Action of a single ladder operator on a basis mask: `(new mask, sign)`.
pub fn ladder_on_mask(op: Ladder, j: usize, mask: u64) -> Option<(u64, f64)> {
    let occupied = mask >> j & 1 == 1;
    let sign = if (mask & ((1u64 << j) - 1)).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
    match (op, occupied) {
        (Ladder::Create, false) | (Ladder::Annihilate, true) => Some((mask ^ 1 << j, sign)),
        _ => None,
    }
}

/// Masks of Hamming weight `s` below `2^m`, ascending.
pub fn sector_masks(n_modes: usize, s: usize) -> Vec<u64> {
    (0..1u64 << n_modes).filter(|m| m.count_ones() as usize == s).collect()
}

impl FockState {
    pub fn vacuum(n_modes: usize) -> Result<Self> {
        Self::basis(n_modes, 0)
    }

    pub fn basis(n_modes: usize, mask: u64) -> Result<Self> {
        check_modes(n_modes)?;
        if mask >> n_modes != 0 {
            return Err(QcaError::Invalid(format!("mask {mask:#b} exceeds {n_modes} modes")));
        }
        let mut amps = vec![ZERO; 1 << n_modes];
        amps[mask as usize] = Complex64::new(1.0, 0.0);
        Ok(Self { n_modes, amps })
    }

    pub fn from_amplitudes(n_modes: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_modes(n_modes)?;
        if amps.len() != 1 << n_modes {
            return Err(QcaError::SizeMismatch { expected: 1 << n_modes, actual: amps.len() });
        }
        Ok(Self { n_modes, amps })
    }

    /// `sum_j psi_j a_j^dagger |0>`.
    pub fn from_spinor(state: &SpinorState) -> Result<Self> {
        let psi = state.amplitudes();
        let mut out = Self::from_amplitudes(psi.len(), vec![ZERO; 1 << psi.len()])?;
        for (j, &a) in psi.iter().enumerate() {
            out.amps[1 << j] = a;
        }
        Ok(out)
    }

    /// `(1/sqrt 2) sum_ij Psi_ij a_i^dagger a_j^dagger |0>`, so the mask
    /// `{i < j}` carries `sqrt 2 Psi_ij`.
    pub fn from_two_particle(state: &TwoParticleState) -> Result<Self> {
        let m = state.n_modes();
        let psi = state.matrix();
        let mut out = Self::from_amplitudes(m, vec![ZERO; 1 << m])?;
        for i in 0..m {
            for j in i + 1..m {
                out.amps[(1 << i) | (1 << j)] = psi[(i, j)] * std::f64::consts::SQRT_2;
            }
        }
        Ok(out)
    }

    /// One-particle amplitudes; other sectors are ignored.
    pub fn to_spinor(&self) -> Result<SpinorState> {
        SpinorState::from_amplitudes((0..self.n_modes).map(|j| self.amps[1 << j]).collect())
    }

    /// Two-particle amplitude matrix; other sectors are ignored.
    pub fn to_two_particle(&self) -> Result<TwoParticleState> {
        let m = self.n_modes;
        let mut psi = CMatrix::zeros(m, m);
        for i in 0..m {
            for j in i + 1..m {
                let a = self.amps[(1 << i) | (1 << j)] / std::f64::consts::SQRT_2;
                psi[(i, j)] = a;
                psi[(j, i)] = -a;
            }
        }
        TwoParticleState::from_matrix(psi)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn amplitude(&self, mask: u64) -> Complex64 {
        self.amps.get(mask as usize).copied().unwrap_or(ZERO)
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amps)
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n < NORM_TOL {
            return Err(QcaError::ZeroNorm);
        }
        self.amps.iter_mut().for_each(|a| *a /= n);
        Ok(self)
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        numeric::inner(&self.amps, &other.amps)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        numeric::max_abs_diff(&self.amps, &other.amps)
    }

    /// Squared norm of every particle-number sector, `S = 0..=M`.
    pub fn sector_norms(&self) -> Vec<f64> {
        let mut per: Vec<Vec<f64>> = vec![Vec::new(); self.n_modes + 1];
        for (mask, a) in self.amps.iter().enumerate() {
            per[mask.count_ones() as usize].push(a.norm_sqr());
        }
        per.iter().map(|v| numeric::pairwise_sum(v)).collect()
    }
}

pub fn fermion_apply(op: Ladder, j: usize, state: &FockState) -> Result<FockState> {
    if j >= state.n_modes {
        return Err(QcaError::Invalid(format!("mode {j} outside {} modes", state.n_modes)));
    }
    let mut amps = vec![ZERO; state.amps.len()];
    for (mask, &a) in state.amps.iter().enumerate() {
        if a == ZERO {
            continue;
        }
        if let Some((to, sign)) = ladder_on_mask(op, j, mask as u64) {
            amps[to as usize] += a * sign;
        }
    }
    Ok(FockState { n_modes: state.n_modes, amps })
}

/// Amplitudes on the weight-`s` masks, in ascending mask order.
pub fn sector_project(state: &FockState, s: usize) -> Result<Vec<Complex64>> {
    if s > state.n_modes {
        return Err(QcaError::Invalid(format!("sector {s} exceeds {} modes", state.n_modes)));
    }
    Ok(sector_masks(state.n_modes, s).into_iter().map(|m| state.amps[m as usize]).collect())
}

/// `<psi| sum_kl h_kl a_k^dagger a_l |psi>`.
pub fn quadratic_expectation(state: &FockState, h: &CMatrix) -> Result<Complex64> {
    let m = state.n_modes;
    if h.nrows() != m || h.ncols() != m {
        return Err(QcaError::SizeMismatch { expected: m, actual: h.nrows() });
    }
    let terms: Vec<Complex64> = (0..state.amps.len())
        .into_par_iter()
        .map(|mask| {
            let a = state.amps[mask];
            if a == ZERO {
                return ZERO;
            }
            let mut acc = ZERO;
            for l in 0..m {
                let Some((mid, s1)) = ladder_on_mask(Ladder::Annihilate, l, mask as u64) else { continue };
                for k in 0..m {
                    let hk = h[(k, l)];
                    if hk == ZERO {
                        continue;
                    }
                    if let Some((to, s2)) = ladder_on_mask(Ladder::Create, k, mid) {
                        acc += state.amps[to as usize].conj() * hk * a * (s1 * s2);
                    }
                }
            }
            acc
        })
        .collect();
    Ok(numeric::pairwise_sum_complex(&terms))
}

/// Hermitian `K` with `exp(-i K) = mode_map`, from the principal logarithm.
///
/// Eigenphases sitting on the branch cut are moved inside by `1e-12`.
pub fn mode_generator(mode_map: &CMatrix) -> Result<CMatrix> {
    let m = mode_map.nrows();
    if mode_map.ncols() != m {
        return Err(QcaError::SizeMismatch { expected: m, actual: mode_map.ncols() });
    }
    let residual = unitarity_residual(mode_map);
    if residual > 1e-12 {
        return Err(QcaError::NotUnitary { residual });
    }
    let (q, t) = mode_map.clone().schur().unpack();
    let phases: Vec<f64> = (0..m)
        .map(|i| {
            let arg = t[(i, i)].arg();
            if std::f64::consts::PI - arg.abs() < BRANCH_NUDGE {
                warn!("mode eigenphase {arg} on the branch cut, nudged by {BRANCH_NUDGE:e}");
                arg.signum() * (std::f64::consts::PI - BRANCH_NUDGE)
            } else {
                arg
            }
        })
        .collect();
    let d = CMatrix::from_diagonal(&DVector::from_iterator(m, phases.iter().map(|p| Complex64::new(-p, 0.0))));
    let k = &q * d * q.adjoint();
    Ok((&k + k.adjoint()) * Complex64::new(0.5, 0.0))
}

/// Quadratic generator restricted to one particle-number sector.
///
/// Stored by columns; the operator is Hermitian, so row `i` is the
/// conjugate of column `i`.
#[derive(Debug, Clone)]
pub struct SectorGenerator {
    pub masks: Vec<u64>,
    columns: Vec<Vec<(usize, Complex64)>>,
    norm_bound: f64,
}

impl SectorGenerator {
    pub fn dim(&self) -> usize {
        self.masks.len()
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.columns
            .par_iter()
            .map(|col| col.iter().fold(ZERO, |acc, &(r, h)| acc + h.conj() * v[r]))
            .collect()
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut h = CMatrix::zeros(self.dim(), self.dim());
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                h[(r, c)] += v;
            }
        }
        h
    }

    /// `exp(-i H_S) v` by a Taylor series on substeps of norm at most 1/2.
    pub fn exp_apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let substeps = (2.0 * self.norm_bound).ceil().max(1.0) as usize;
        let dt = 1.0 / substeps as f64;
        let mut out = v.to_vec();
        for _ in 0..substeps {
            let mut term = out.clone();
            let scale = norm_sqr(&out).sqrt().max(f64::MIN_POSITIVE);
            for k in 1..=40 {
                let f = Complex64::new(0.0, -dt / k as f64);
                term = self.apply(&term).into_iter().map(|x| x * f).collect();
                out.iter_mut().zip(&term).for_each(|(o, t)| *o += t);
                if norm_sqr(&term).sqrt() <= 1e-18 * scale {
                    break;
                }
            }
        }
        out
    }
}

/// Fock-space unitary whose action on single modes is a given matrix.
///
/// The quadratic generator is built and exponentiated separately in every
/// sector that a state actually populates; sector generators are cached.
#[derive(Debug, Clone)]
pub struct BilinearPropagator {
    generator: CMatrix,
    sectors: Vec<OnceLock<SectorGenerator>>,
}

impl BilinearPropagator {
    pub fn new(mode_map: &CMatrix) -> Result<Self> {
        check_modes(mode_map.nrows())?;
        let sectors = (0..=mode_map.nrows()).map(|_| OnceLock::new()).collect();
        Ok(Self { generator: mode_generator(mode_map)?, sectors })
    }

    pub fn generator(&self) -> &CMatrix {
        &self.generator
    }

    pub fn n_modes(&self) -> usize {
        self.generator.nrows()
    }

    pub fn sector_generator(&self, s: usize) -> Result<&SectorGenerator> {
        let cell = self
            .sectors
            .get(s)
            .ok_or_else(|| QcaError::Invalid(format!("sector {s} exceeds {} modes", self.n_modes())))?;
        if let Some(done) = cell.get() {
            return Ok(done);
        }
        let masks = sector_masks(self.n_modes(), s);
        if masks.len() > MAX_SECTOR_DIM {
            return Err(QcaError::Invalid(format!("sector of dimension {} exceeds {MAX_SECTOR_DIM}", masks.len())));
        }
        let m = self.n_modes();
        let pos = |mask: u64| masks.binary_search(&mask).ok();
        let columns: Vec<Vec<(usize, Complex64)>> = masks
            .par_iter()
            .map(|&mask| {
                let mut col: Vec<(usize, Complex64)> = Vec::new();
                for l in 0..m {
                    let Some((mid, s1)) = ladder_on_mask(Ladder::Annihilate, l, mask) else { continue };
                    for k in 0..m {
                        let kk = self.generator[(k, l)];
                        if kk == ZERO {
                            continue;
                        }
                        if let Some((to, s2)) = ladder_on_mask(Ladder::Create, k, mid) {
                            col.push((pos(to).expect("sector is closed"), kk * (s1 * s2)));
                        }
                    }
                }
                col.sort_by_key(|e| e.0);
                col.dedup_by(|b, a| {
                    if a.0 == b.0 {
                        a.1 += b.1;
                        true
                    } else {
                        false
                    }
                });
                col
            })
            .collect();
        let norm_bound = columns
            .iter()
            .map(|col| col.iter().map(|e| e.1.norm()).sum::<f64>())
            .fold(0.0, f64::max);
        Ok(cell.get_or_init(|| SectorGenerator { masks, columns, norm_bound }))
    }

    pub fn apply(&self, state: &FockState) -> Result<FockState> {
        self.apply_steps(state, 1)
    }

    pub fn apply_steps(&self, state: &FockState, steps: usize) -> Result<FockState> {
        if state.n_modes != self.n_modes() {
            return Err(QcaError::SizeMismatch { expected: self.n_modes(), actual: state.n_modes });
        }
        let mut out = vec![ZERO; state.amps.len()];
        for s in 0..=state.n_modes {
            let masks = sector_masks(state.n_modes, s);
            let mut v: Vec<Complex64> = masks.iter().map(|&m| state.amps[m as usize]).collect();
            if v.iter().all(|a| *a == ZERO) {
                continue;
            }
            let gen = self.sector_generator(s)?;
            for _ in 0..steps {
                v = gen.exp_apply(&v);
            }
            for (&m, a) in masks.iter().zip(v) {
                out[m as usize] = a;
            }
        }
        Ok(FockState { n_modes: state.n_modes, amps: out })
    }
}

pub fn bilinear_evolve(state: &FockState, mode_map: &CMatrix) -> Result<FockState> {
    BilinearPropagator::new(mode_map)?.apply(state)
}
