//! Named invariant suites with residuals, tolerances and a pass/fail verdict.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use dirac_qca::automaton::{
    build_band_unitary, evolve_two_particle, margolus_dense, momentum_grid, two_particle_from_singles, Direction,
};
use dirac_qca::fock::{ladder_on_mask, quadratic_expectation, BilinearPropagator, FockState, Ladder};
use dirac_qca::hamiltonian::{
    discrete_exponential_check, emergent_h, interpolating_h, three_point_reverse, three_point_step, BranchStatus,
};
use dirac_qca::lattice2d::{
    dressed_operator_checks, joint_vacuum_2d, locality_identity_2d, oriented_links, p_commutation_table_2d,
    Lattice2D,
};
use dirac_qca::numeric::{c64, max_abs, max_abs_diff, unitarity_residual, CMatrix};
use dirac_qca::qubit::{
    anticommutation_residuals, spin_model_h, string_identity_check, vacuum_theorem_check, Mqca, QubitState,
};
use dirac_qca::{AutomatonParams, Boundary, Complex64, QcaError, SpinorState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const ANGLES: [f64; 5] = [0.0, PI / 10.0, PI / 8.0, PI / 4.0, PI / 2.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Margolus,
    Hamiltonian,
    ExponentialMap,
    Jw1d,
    SectorEquivalence,
    Vacuum,
    SpinModel,
    Jw2d,
    Oracle,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Margolus,
        Suite::Hamiltonian,
        Suite::ExponentialMap,
        Suite::Jw1d,
        Suite::SectorEquivalence,
        Suite::Vacuum,
        Suite::SpinModel,
        Suite::Jw2d,
        Suite::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Margolus => "margolus",
            Suite::Hamiltonian => "hamiltonian",
            Suite::ExponentialMap => "exponential-map",
            Suite::Jw1d => "jw1d",
            Suite::SectorEquivalence => "sector-equivalence",
            Suite::Vacuum => "vacuum",
            Suite::SpinModel => "spin-model",
            Suite::Jw2d => "jw2d",
            Suite::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<_> = Suite::ALL.iter().map(|x| x.name()).collect();
            format!("unknown suite {s:?}; expected one of {}", names.join(", "))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Status {
    Pass,
    Fail,
    ExpectedFail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    AtMost,
    AtLeast,
    Equals,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: Bound,
    pub tolerance: f64,
    pub status: Status,
}

impl Check {
    fn new(name: impl Into<String>, value: f64, bound: Bound, tolerance: f64) -> Self {
        let ok = match bound {
            Bound::AtMost => value <= tolerance,
            Bound::AtLeast => value >= tolerance,
            Bound::Equals => value == tolerance,
        };
        let status = if ok { Status::Pass } else { Status::Fail };
        Self { name: name.into(), value, bound, tolerance, status }
    }

    fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self::new(name, value, Bound::AtMost, tolerance)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    fn new(suite: Suite, checks: Vec<Check>) -> Self {
        let passed = checks.iter().all(|c| c.status != Status::Fail);
        Self { suite, passed, checks }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}

pub fn run_verify(suite: Suite) -> anyhow::Result<Report> {
    let checks = match suite {
        Suite::Margolus => margolus()?,
        Suite::Hamiltonian => hamiltonian()?,
        Suite::ExponentialMap => exponential_map()?,
        Suite::Jw1d => jw1d()?,
        Suite::SectorEquivalence => sector_equivalence()?,
        Suite::Vacuum => vacuum()?,
        Suite::SpinModel => spin_model()?,
        Suite::Jw2d => jw2d()?,
        Suite::Oracle => oracle()?,
    };
    Ok(Report::new(suite, checks))
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_amplitudes(rng: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..len).map(|_| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / norm).collect()
}

fn random_spinor(rng: &mut ChaCha8Rng, n_sites: usize) -> anyhow::Result<SpinorState> {
    Ok(SpinorState::from_amplitudes(random_amplitudes(rng, 2 * n_sites))?)
}

fn angle_label(theta: f64) -> String {
    let ratio = theta / PI;
    if ratio == 0.0 {
        "0".into()
    } else {
        format!("pi/{}", (1.0 / ratio).round())
    }
}

fn margolus() -> anyhow::Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut rng = rng(11);
    for theta in ANGLES {
        for n in [4, 8, 64] {
            let p = AutomatonParams::new(theta, n)?;
            let u = build_band_unitary(&p);
            let tag = format!("theta={} N={n}", angle_label(theta));
            checks.push(Check::at_most(format!("unitarity {tag}"), u.unitarity_residual()?, 1e-12));
            checks.push(Check::at_most(format!("gate rows equal band {tag}"), max_abs(&(margolus_dense(&p)? - u.dense())), 1e-12));
            let psi = random_spinor(&mut rng, n)?;
            let there = u.evolve(&psi, 100, Direction::Forward)?;
            let back = u.evolve(&there, 100, Direction::Backward)?;
            checks.push(Check::at_most(format!("100-step round trip {tag}"), back.max_abs_diff(&psi), 1e-10));
        }
    }
    Ok(checks)
}

fn hamiltonian() -> anyhow::Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut rng = rng(12);
    for theta in ANGLES {
        let p = AutomatonParams::new(theta, 24)?;
        let u = build_band_unitary(&p);
        let h = emergent_h(&p);
        let ud = u.dense();
        let expected: CMatrix = (&ud - ud.adjoint()) * c64(0.0, 0.5);
        let tag = format!("theta={}", angle_label(theta));
        checks.push(Check::at_most(format!("H equals (i/2)(U - U^dagger) {tag}"), max_abs(&(h.dense() - expected)), 1e-12));

        let (mut identity, mut forward, mut reverse) = (0.0f64, 0.0f64, 0.0f64);
        let mut prev = random_spinor(&mut rng, 24)?;
        let mut now = u.apply_step(&prev, Direction::Forward)?;
        for _ in 0..30 {
            let next = u.apply_step(&now, Direction::Forward)?;
            let lhs: Vec<_> =
                next.amplitudes().iter().zip(prev.amplitudes()).map(|(a, b)| (a - b) * c64(0.0, 0.5)).collect();
            identity = identity.max(max_abs_diff(&lhs, h.apply(&now)?.amplitudes()));
            forward = forward.max(three_point_step(&now, &prev, &h)?.max_abs_diff(&next));
            reverse = reverse.max(three_point_reverse(&next, &now, &h)?.max_abs_diff(&prev));
            prev = now;
            now = next;
        }
        checks.push(Check::at_most(format!("three-point identity {tag}"), identity, 1e-12));
        checks.push(Check::at_most(format!("forward update reproduces U {tag}"), forward, 1e-12));
        checks.push(Check::at_most(format!("reversed update reproduces U^dagger {tag}"), reverse, 1e-12));
    }
    Ok(checks)
}

fn exponential_map() -> anyhow::Result<Vec<Check>> {
    let mut checks = Vec::new();
    for theta in [PI / 10.0, PI / 8.0, PI / 4.0] {
        let p = AutomatonParams::new(theta, 64)?;
        for phi in momentum_grid(64) {
            let r = discrete_exponential_check(&p, phi);
            let mut c = Check::at_most(format!("arcsin map theta={} phi={phi}", angle_label(theta)), r.residual, 1e-12);
            c.status = match r.status {
                BranchStatus::Match if r.residual <= 1e-12 => Status::Pass,
                BranchStatus::ExpectedBranchFailure => Status::ExpectedFail,
                _ => Status::Fail,
            };
            checks.push(c);
        }
    }
    for theta in [PI / 8.0, PI / 4.0] {
        let p = AutomatonParams::new(theta, 32)?;
        let ht = interpolating_h(&p)?;
        let residual = max_abs(&(ht.propagator() - build_band_unitary(&p).dense()));
        checks.push(Check::at_most(format!("exp(-i H~) equals U theta={} N=32", angle_label(theta)), residual, 1e-10));
    }
    Ok(checks)
}

fn jw1d() -> anyhow::Result<Vec<Check>> {
    let mut checks = Vec::new();
    for n_q in [2, 6, 10] {
        let (mixed, same) = anticommutation_residuals(n_q)?;
        checks.push(Check::at_most(format!("{{phi_i, phi_j^dagger}} = delta n_q={n_q}"), mixed, 1e-14));
        checks.push(Check::at_most(format!("{{phi_i, phi_j}} = 0 n_q={n_q}"), same, 1e-14));
    }
    for l in 1..=4 {
        let worst = (0..10 - l)
            .map(|j| string_identity_check(j, l, 10).map(|r| r.residual))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .fold(0.0, f64::max);
        checks.push(Check::at_most(format!("string identity l={l} n_q=10"), worst, 1e-12));
    }
    Ok(checks)
}

fn qubit_from_fock(f: &FockState) -> anyhow::Result<QubitState> {
    Ok(QubitState::from_amplitudes(f.n_modes(), f.amplitudes().to_vec())?)
}

fn fock_from_qubit(q: &QubitState) -> anyhow::Result<FockState> {
    Ok(FockState::from_amplitudes(q.n_qubits(), q.amplitudes().to_vec())?)
}

const SECTOR_SITES: usize = 6;
const SECTOR_STEPS: usize = 10;

fn sector_equivalence() -> anyhow::Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut rng = rng(13);
    for theta in [PI / 10.0, PI / 8.0, PI / 4.0] {
        let p = AutomatonParams::new(theta, SECTOR_SITES)?;
        let mqca = Mqca::new(&p)?;
        let tag = format!("theta={} N={SECTOR_SITES} steps={SECTOR_STEPS}", angle_label(theta));

        let psi = random_spinor(&mut rng, SECTOR_SITES)?;
        let field = build_band_unitary(&p).evolve(&psi, SECTOR_STEPS, Direction::Forward)?;
        let out = fock_from_qubit(&mqca.evolve(&qubit_from_fock(&FockState::from_spinor(&psi)?)?, SECTOR_STEPS)?)?;
        let err = max_abs_diff(out.to_spinor()?.amplitudes(), field.amplitudes());
        checks.push(Check::at_most(format!("S=1 qubit vs field {tag}"), err, 1e-10));
        checks.push(Check::at_most(format!("S=1 weight stays in sector {tag}"), (out.sector_norms()[1] - 1.0).abs(), 1e-12));

        let pair = two_particle_from_singles(&random_spinor(&mut rng, SECTOR_SITES)?, &random_spinor(&mut rng, SECTOR_SITES)?)?;
        let field = evolve_two_particle(&pair, &p, SECTOR_STEPS)?;
        let out = fock_from_qubit(&mqca.evolve(&qubit_from_fock(&FockState::from_two_particle(&pair)?)?, SECTOR_STEPS)?)?;
        let err = max_abs(&(out.to_two_particle()?.matrix() - field.matrix()));
        checks.push(Check::at_most(format!("S=2 qubit vs field {tag}"), err, 1e-10));
    }
    Ok(checks)
}

fn vacuum() -> anyhow::Result<Vec<Check>> {
    let mut checks = Vec::new();
    for n_q in [1, 4, 10] {
        let r = vacuum_theorem_check(n_q)?;
        checks.push(Check::at_most(format!("phi_n annihilates the vacuum n_q={n_q}"), r.annihilation_residual, 1e-12));
        checks.push(Check::new(format!("joint kernel dimension n_q={n_q}"), r.kernel_dimension as f64, Bound::Equals, 1.0));
        checks.push(Check::at_most(format!("phi^dagger vacuum = sigma+ vacuum n_q={n_q}"), r.creation_identity_residual, 1e-12));
    }
    let p = AutomatonParams::new(PI / 8.0, SECTOR_SITES)?;
    let vac = QubitState::vacuum(2 * SECTOR_SITES)?;
    let out = Mqca::new(&p)?.evolve(&vac, SECTOR_STEPS)?;
    checks.push(Check::at_most("qubit automaton leaves the vacuum fixed", max_abs_diff(out.amplitudes(), vac.amplitudes()), 1e-12));
    Ok(checks)
}

/// `sum_kl H_kl a_k^dagger a_l` built from occupation-basis ladders.
fn fock_quadratic(h: &CMatrix) -> CMatrix {
    let m = h.nrows();
    let mut out = CMatrix::zeros(1 << m, 1 << m);
    for mask in 0..1u64 << m {
        for l in 0..m {
            let Some((mid, s1)) = ladder_on_mask(Ladder::Annihilate, l, mask) else { continue };
            for k in 0..m {
                if let Some((to, s2)) = ladder_on_mask(Ladder::Create, k, mid) {
                    out[(to as usize, mask as usize)] += h[(k, l)] * (s1 * s2);
                }
            }
        }
    }
    out
}

fn spin_model() -> anyhow::Result<Vec<Check>> {
    let mut checks = Vec::new();
    for theta in [0.0, PI / 8.0, PI / 2.0] {
        for n_q in [4, 8, 10] {
            let p = AutomatonParams::new(theta, n_q / 2)?.with_boundary(Boundary::Open);
            let spin = spin_model_h(&p, n_q)?;
            let residual = max_abs(&(spin - fock_quadratic(&emergent_h(&p).dense())));
            checks.push(Check::at_most(format!("spin model equals fermion form theta={} n_q={n_q}", angle_label(theta)), residual, 1e-12));
        }
    }
    Ok(checks)
}

fn jw2d() -> anyhow::Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (w, h) in [(2, 2), (2, 3)] {
        let lattice = Lattice2D::new(w, h)?;
        let tag = format!("{w}x{h}");
        let r = dressed_operator_checks(&lattice)?;
        checks.push(Check::at_most(format!("phase factor hermitian {tag}"), r.phase_hermiticity, 1e-14));
        checks.push(Check::at_most(format!("phase factor squares to I {tag}"), r.phase_square, 1e-14));
        checks.push(Check::new(format!("alpha antisymmetry violations {tag}"), r.alpha_violations as f64, Bound::Equals, 0.0));
        checks.push(Check::at_most(format!("dressed operators commute at distinct sites {tag}"), r.distinct_site_commutator, 1e-14));
        checks.push(Check::at_most(format!("dressed sigma and tau anticommute on site {tag}"), r.same_site_anticommutator, 1e-14));
        checks.push(Check::at_most(format!("bare fermions keep canonical relations {tag}"), r.bare_car_residual, 1e-14));
        checks.push(Check::at_most(format!("phase exchange rule {tag}"), r.exchange_residual, 1e-14));
        let t = p_commutation_table_2d(&lattice)?;
        checks.push(Check::at_most(format!("disjoint P pairs commute {tag}"), t.commuting_max, 1e-14));
        checks.push(Check::at_most(format!("P pairs sharing an index anticommute {tag}"), t.anticommuting_max, 1e-14));

        for (link, axis) in [((1, 0), "x"), ((0, 1), "y")] {
            let links = oriented_links(&lattice, &[link])?;
            let v = joint_vacuum_2d(&lattice, &links)?;
            let tag = format!("{w}x{h} links={{{axis}}}");
            checks.push(Check::at_most(format!("joint vacuum eigen residual {tag}"), v.eigen_residual, 1e-12));
            checks.push(Check::at_most(format!("sigma sector trace distance to all-down {tag}"), v.sigma_trace_distance, 1e-12));
            checks.push(Check::new(format!("tau sector entropy (nats) {tag}"), v.max_tau_entropy(), Bound::AtLeast, 0.1));
            let (mut op, mut eig, mut elem) = (0.0f64, 0.0f64, 0.0f64);
            for &(from, _) in &links.pairs {
                let r = locality_identity_2d(from, link, &lattice, &v)?;
                op = op.max(r.operator_identity_residual);
                eig = eig.max(r.eigenspace_residual);
                elem = elem.max(r.matrix_element_residual);
            }
            checks.push(Check::at_most(format!("hop-parity operator identity {tag}"), op, 1e-12));
            checks.push(Check::at_most(format!("on-vacuum locality identity {tag}"), eig, 1e-12));
            checks.push(Check::at_most(format!("locality between vacuum excitations {tag}"), elem, 1e-12));
        }

        // both axes at once share a Majorana factor per site and cannot be diagonalized together
        let residual = match oriented_links(&lattice, &[(1, 0), (0, 1)]) {
            Err(QcaError::NonCommutingLinks { residual, .. }) => residual,
            Err(e) => return Err(e.into()),
            Ok(_) => 0.0,
        };
        checks.push(Check::new(format!("links {{x, y}} rejected, parity commutator {w}x{h}"), residual, Bound::AtLeast, 1.0));
    }
    Ok(checks)
}

fn oracle() -> anyhow::Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut rng = rng(14);
    let theta = PI / 8.0;
    let p = AutomatonParams::new(theta, SECTOR_SITES)?;
    let u = build_band_unitary(&p);
    let prop = BilinearPropagator::new(&u.dense())?;
    let tag = format!("theta=pi/8 N={SECTOR_SITES} steps={SECTOR_STEPS}");

    let psi = random_spinor(&mut rng, SECTOR_SITES)?;
    let oracle = prop.apply_steps(&FockState::from_spinor(&psi)?, SECTOR_STEPS)?;
    let field = u.evolve(&psi, SECTOR_STEPS, Direction::Forward)?;
    checks.push(Check::at_most(format!("Fock oracle vs field S=1 {tag}"), max_abs_diff(oracle.to_spinor()?.amplitudes(), field.amplitudes()), 1e-10));

    let pair = two_particle_from_singles(&random_spinor(&mut rng, SECTOR_SITES)?, &random_spinor(&mut rng, SECTOR_SITES)?)?;
    let oracle = prop.apply_steps(&FockState::from_two_particle(&pair)?, SECTOR_STEPS)?;
    let field = evolve_two_particle(&pair, &p, SECTOR_STEPS)?;
    checks.push(Check::at_most(format!("Fock oracle vs field S=2 {tag}"), max_abs(&(oracle.to_two_particle()?.matrix() - field.matrix())), 1e-10));

    let generic = FockState::from_amplitudes(2 * SECTOR_SITES, random_amplitudes(&mut rng, 1 << (2 * SECTOR_SITES)))?;
    let oracle = prop.apply_steps(&generic, SECTOR_STEPS)?;
    let qubits = Mqca::new(&p)?.evolve(&qubit_from_fock(&generic)?, SECTOR_STEPS)?;
    checks.push(Check::at_most(format!("Fock oracle vs qubit automaton, all sectors {tag}"), max_abs_diff(oracle.amplitudes(), qubits.amplitudes()), 1e-10));
    let drift = generic.sector_norms().iter().zip(oracle.sector_norms()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    checks.push(Check::at_most(format!("sector weights conserved {tag}"), drift, 1e-12));

    let h = emergent_h(&p).dense();
    let e0 = quadratic_expectation(&generic, &h)?;
    let mut state = generic;
    let mut energy_drift = 0.0f64;
    for _ in 0..SECTOR_STEPS {
        state = prop.apply(&state)?;
        energy_drift = energy_drift.max((quadratic_expectation(&state, &h)? - e0).norm());
    }
    checks.push(Check::at_most(format!("emergent energy conserved {tag}"), energy_drift, 1e-10));
    checks.push(Check::at_most("one-step matrix is unitary", unitarity_residual(&u.dense()), 1e-12));
    Ok(checks)
}
