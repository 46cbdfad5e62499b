mod common;

use std::f64::consts::PI;

use dirac_qca::automaton::{
    build_band_unitary, dispersion_scan, evolve_two_particle, gaussian_packet, invariant_state, margolus_dense,
    margolus_step, max_group_velocity, momentum_grid, momentum_unitary, position_momentum_expect,
    two_particle_from_singles, Direction,
};
use dirac_qca::numeric::{max_abs, max_abs_diff, unitarity_residual};
use dirac_qca::params::coupling_from_mass;
use dirac_qca::{AutomatonParams, Component, SpinorState};

const THETAS: [f64; 5] = [0.0, PI / 10.0, PI / 8.0, PI / 4.0, PI / 2.0];

#[test]
fn refraction_index_over_mass_grid() {
    for i in 0..=100 {
        let m = i as f64 / 100.0;
        let p = AutomatonParams::from_mass_ratio(m, 8, Default::default(), Default::default()).unwrap();
        assert!((p.zeta() - (1.0 - m * m).sqrt()).abs() <= 1e-12, "m = {m}");
    }
    let p = AutomatonParams::new(PI / 8.0, 8).unwrap();
    assert!((p.c() - 0.92388).abs() < 5e-6);
    let (theta, _, _) = coupling_from_mass((PI / 8.0).cos()).unwrap();
    assert!((theta - PI / 8.0).abs() < 1e-12);
}

#[test]
fn band_step_matches_hand_written_matrix() {
    for &theta in &THETAS {
        for n in [4, 8, 64] {
            let p = AutomatonParams::new(theta, n).unwrap();
            let u = build_band_unitary(&p).dense();
            assert!(max_abs(&(&u - common::step_matrix(theta, n))) <= 1e-15);
            assert!(unitarity_residual(&u) <= 1e-12);
        }
    }
}

#[test]
fn hundred_step_round_trip() {
    let mut rng = common::rng(11);
    for &theta in &THETAS {
        for n in [4, 8, 64] {
            let p = AutomatonParams::new(theta, n).unwrap();
            let u = build_band_unitary(&p);
            let psi = common::random_spinor(&mut rng, n);
            let there = u.evolve(&psi, 100, Direction::Forward).unwrap();
            let back = u.evolve(&there, 100, Direction::Backward).unwrap();
            assert!(back.max_abs_diff(&psi) <= 1e-10);
        }
    }
}

#[test]
fn margolus_rows_compose_to_step() {
    let mut rng = common::rng(5);
    for &theta in &THETAS {
        for n in [4, 8, 64] {
            let p = AutomatonParams::new(theta, n).unwrap();
            let m = margolus_dense(&p).unwrap();
            assert!(max_abs(&(m - common::step_matrix(theta, n))) <= 1e-12);
            let psi = common::random_spinor(&mut rng, n);
            let direct = common::matvec(&common::step_matrix(theta, n), psi.amplitudes());
            let rows = margolus_step(&p, &psi).unwrap();
            assert!(max_abs_diff(rows.amplitudes(), &direct) <= 1e-12);
        }
    }
}

#[test]
fn invariant_states_and_momentum() {
    let p = AutomatonParams::new(PI / 8.0, 16).unwrap();
    let u = build_band_unitary(&p);
    for k in 0..16 {
        let phi = 2.0 * PI * k as f64 / 16.0;
        let mode = momentum_unitary(&p, phi);
        for alpha in Component::BOTH {
            let psi = invariant_state(&p, phi, alpha).unwrap();
            let lambda = mode.eigenvalues[alpha.offset()];
            let stepped = u.apply_step(&psi, Direction::Forward).unwrap();
            let expected: Vec<_> = psi.amplitudes().iter().map(|a| a * lambda).collect();
            assert!(max_abs_diff(stepped.amplitudes(), &expected) <= 1e-10);
            let e = position_momentum_expect(&psi, &p).unwrap();
            assert!((e.p_mean - phi.sin()).abs() <= 1e-12);
        }
    }
}

#[test]
fn spectrum_is_the_dispersion_multiset() {
    for theta in [PI / 10.0, PI / 4.0] {
        let n = 12;
        let u = common::step_matrix(theta, n);
        let mut numeric: Vec<f64> = u.schur().eigenvalues().unwrap().iter().map(|l| l.arg()).collect();
        let p = AutomatonParams::new(theta, n).unwrap();
        let mut analytic: Vec<f64> = momentum_grid(n)
            .into_iter()
            .flat_map(|phi| {
                let e = momentum_unitary(&p, phi).energy;
                [-e, e]
            })
            .collect();
        numeric.sort_by(f64::total_cmp);
        analytic.sort_by(f64::total_cmp);
        for (a, b) in numeric.iter().zip(&analytic) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }
}

#[test]
fn fastest_mode_moves_at_zeta() {
    for &theta in &THETAS[1..] {
        let p = AutomatonParams::new(theta, 8).unwrap();
        assert!((max_group_velocity(&p) - p.zeta()).abs() <= 1e-10);
        let rows = dispersion_scan(&p, 256).unwrap();
        assert!(rows.iter().all(|r| r.group_velocity.abs() <= p.zeta() + 1e-10));
    }
}

#[test]
fn light_cone_is_strict() {
    let n = 128;
    for theta in [PI / 10.0, PI / 4.0, PI / 2.0] {
        let p = AutomatonParams::new(theta, n).unwrap();
        let u = build_band_unitary(&p);
        for alpha in Component::BOTH {
            let mut psi = SpinorState::delta(n, 0, alpha).unwrap();
            for t in 1..=50 {
                psi = u.apply_step(&psi, Direction::Forward).unwrap();
                let outside: f64 = psi
                    .site_probabilities()
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| p.signed_coordinate(*j).unsigned_abs() as usize > t)
                    .map(|(_, q)| q)
                    .sum();
                assert!(outside <= 1e-12, "t = {t}: {outside}");
            }
        }
    }
}

#[test]
fn packet_run_keeps_norm_and_speed_limit() {
    let p = AutomatonParams::new(PI / 8.0, 64).unwrap();
    let u = build_band_unitary(&p);
    let mut psi = gaussian_packet(&p, -8, 2.0, 8, Component::Plus).unwrap();
    let mut xs = vec![position_momentum_expect(&psi, &p).unwrap().x_mean];
    let mut drift: f64 = 0.0;
    let mut window = 0;
    for t in 1..=180 {
        psi = u.apply_step(&psi, Direction::Forward).unwrap();
        drift = drift.max((psi.norm_sqr() - 1.0).abs());
        let seam: f64 = psi
            .site_probabilities()
            .iter()
            .enumerate()
            .filter(|(j, _)| p.signed_coordinate(*j).abs() >= 28)
            .map(|(_, q)| q)
            .sum();
        if seam < 1e-9 && window == t - 1 {
            window = t;
            xs.push(position_momentum_expect(&psi, &p).unwrap().x_mean);
        }
    }
    assert!(drift <= 1e-9);
    assert!(window >= 20, "window {window}");
    let slope = least_squares_slope(&xs);
    assert!(slope.abs() <= p.zeta(), "slope {slope}");
}

fn least_squares_slope(ys: &[f64]) -> f64 {
    let n = ys.len() as f64;
    let tm = (n - 1.0) / 2.0;
    let ym = ys.iter().sum::<f64>() / n;
    let num: f64 = ys.iter().enumerate().map(|(t, y)| (t as f64 - tm) * (y - ym)).sum();
    let den: f64 = (0..ys.len()).map(|t| (t as f64 - tm).powi(2)).sum();
    num / den
}

#[test]
fn collision_keeps_antisymmetry() {
    let p = AutomatonParams::new(PI / 8.0, 32).unwrap();
    let a = gaussian_packet(&p, -6, 2.0, 8, Component::Plus).unwrap();
    let b = gaussian_packet(&p, 6, 2.0, -8, Component::Minus).unwrap();
    let psi = two_particle_from_singles(&a, &b).unwrap();
    let out = evolve_two_particle(&psi, &p, 40).unwrap();
    assert!(out.antisymmetry_residual() <= 1e-10);
    assert!((out.norm_sqr() - 1.0).abs() <= 1e-10);
    let probs = out.site_probability_matrix();
    for i in 0..32 {
        for j in 0..32 {
            assert!((probs[i][j] - probs[j][i]).abs() <= 1e-12);
        }
    }
}

#[test]
fn planck_mass_does_not_move() {
    let p = AutomatonParams::from_mass_ratio(1.0, 64, Default::default(), Default::default()).unwrap();
    let u = build_band_unitary(&p);
    let psi0 = gaussian_packet(&p, 0, 2.0, 8, Component::Plus).unwrap();
    let before = psi0.site_probabilities();
    let mut psi = psi0;
    for _ in 0..180 {
        psi = u.apply_step(&psi, Direction::Forward).unwrap();
    }
    for (a, b) in before.iter().zip(psi.site_probabilities()) {
        assert!((a - b).abs() <= 1e-15);
    }
}
