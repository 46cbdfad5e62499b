//! Reproductions of the packet, double-slit, collision, dispersion and
//! refraction-curve runs.

use anyhow::Context;
use dirac_qca::automaton::{
    build_band_unitary, dispersion_scan, double_slit_state, evolve_two_particle, gaussian_packet, max_group_velocity,
    position_momentum_expect, two_particle_from_singles, typical_path, Direction,
};
use dirac_qca::{AutomatonParams, Boundary, Component, SpinorState, UnitSystem};
use serde_json::json;

use crate::config::{CollisionConfig, DispersionConfig, DoubleSlitConfig, PacketConfig};
use crate::output::{num, Clamp, Table};

/// Width of the band around the wrap-around point that ends the drift fit.
const SEAM_WIDTH: i64 = 2;
const SEAM_MASS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub table: Table,
    pub summary: serde_json::Value,
}

fn sign_name(c: Component) -> &'static str {
    match c {
        Component::Plus => "+",
        Component::Minus => "-",
    }
}

fn param_meta(table: &mut Table, p: &AutomatonParams) {
    table
        .meta("theta", num(p.theta()))
        .meta("m_ratio", num(p.c()))
        .meta("zeta", num(p.zeta()))
        .meta("sites", p.n_sites());
}

pub fn run_refraction_curve(samples: usize) -> anyhow::Result<ExperimentOutput> {
    anyhow::ensure!(samples >= 2, "need at least 2 samples");
    let mut table = Table::new("refraction-curve", vec!["m_over_mp", "zeta"]);
    table.meta("samples", samples);
    let mut zetas = Vec::with_capacity(samples);
    for i in 0..samples {
        let m = i as f64 / (samples - 1) as f64;
        let p = AutomatonParams::from_mass_ratio(m, 2, Boundary::Periodic, UnitSystem::default())?;
        zetas.push(p.zeta());
        table.push(vec![num(m), num(p.zeta())]);
    }
    let summary = json!({ "experiment": "refraction-curve", "samples": samples, "zeta_at_zero": zetas[0], "zeta_at_one": zetas[samples - 1] });
    Ok(ExperimentOutput { table, summary })
}

pub fn run_dispersion(cfg: &DispersionConfig) -> anyhow::Result<ExperimentOutput> {
    let p = &cfg.params;
    let rows = dispersion_scan(p, cfg.samples)?;
    let mut table = Table::new("dispersion", vec!["phi", "E", "group_velocity"]);
    table.meta("theta", num(p.theta())).meta("zeta", num(p.zeta())).meta("samples", cfg.samples);
    for r in &rows {
        table.push(vec![num(r.phi), num(r.energy), num(r.group_velocity)]);
    }
    let max_velocity = max_group_velocity(p);
    let sampled = rows.iter().map(|r| r.group_velocity.abs()).fold(0.0, f64::max);
    let summary = json!({
        "experiment": "dispersion",
        "theta": p.theta(),
        "zeta": p.zeta(),
        "max_velocity": max_velocity,
        "max_sampled_velocity": sampled,
        "max_velocity_error": (max_velocity - p.zeta()).abs(),
    });
    Ok(ExperimentOutput { table, summary })
}

/// Least-squares slope of `ys` against `0, 1, 2, ...`.
pub fn least_squares_slope(ys: &[f64]) -> f64 {
    if ys.len() < 2 {
        return 0.0;
    }
    let n = ys.len() as f64;
    let tm = (n - 1.0) / 2.0;
    let ym = ys.iter().sum::<f64>() / n;
    let num: f64 = ys.iter().enumerate().map(|(t, y)| (t as f64 - tm) * (y - ym)).sum();
    let den: f64 = (0..ys.len()).map(|t| (t as f64 - tm).powi(2)).sum();
    num / den
}

fn evolve_history(p: &AutomatonParams, start: SpinorState, steps: usize) -> anyhow::Result<Vec<SpinorState>> {
    let u = build_band_unitary(p);
    let mut history = Vec::with_capacity(steps + 1);
    history.push(start);
    for t in 0..steps {
        let next = u.apply_step(&history[t], Direction::Forward)?;
        history.push(next);
    }
    Ok(history)
}

fn probability_table(name: &str, p: &AutomatonParams, history: &[SpinorState]) -> anyhow::Result<Table> {
    let mut table = Table::new(name, vec!["t", "site", "prob_plus", "prob_minus"]);
    param_meta(&mut table, p);
    table.meta("steps", history.len() - 1);
    let order = left_to_right(p);
    let mut clamp = Clamp::default();
    for (t, state) in history.iter().enumerate() {
        let comps = state.component_probabilities();
        for &site in &order {
            let (pp, pm) = comps[site];
            table.push(vec![
                t.to_string(),
                p.signed_coordinate(site).to_string(),
                num(clamp.apply(pp)?),
                num(clamp.apply(pm)?),
            ]);
        }
    }
    clamp.report(name);
    Ok(table)
}

/// Site indices sorted by signed coordinate.
fn left_to_right(p: &AutomatonParams) -> Vec<usize> {
    let mut order: Vec<usize> = (0..p.n_sites()).collect();
    order.sort_by_key(|&j| p.signed_coordinate(j));
    order
}

fn norm_drifts(history: &[SpinorState]) -> (Vec<f64>, f64) {
    let norms: Vec<f64> = history.iter().map(|s| s.norm_sqr()).collect();
    let drift = norms.iter().map(|x| (x - 1.0).abs()).fold(0.0, f64::max);
    (norms, drift)
}

pub fn run_packet(cfg: &PacketConfig) -> anyhow::Result<ExperimentOutput> {
    let p = &cfg.params;
    let start = gaussian_packet(p, cfg.n0, cfg.delta, cfg.k, cfg.sign).context("building the packet")?;
    let history = evolve_history(p, start, cfg.steps)?;
    let mut table = probability_table("packet", p, &history)?;
    table.meta("n0", cfg.n0).meta("delta", num(cfg.delta)).meta("k", cfg.k).meta("sign", sign_name(cfg.sign));

    let path = typical_path(&history, p)?;
    let x_var: Vec<f64> = history.iter().map(|s| position_momentum_expect(s, p).map(|e| e.x_var)).collect::<Result<_, _>>()?;
    let (norms, drift) = norm_drifts(&history);

    let seam = (p.n_sites() / 2) as i64 - SEAM_WIDTH;
    let clear = |s: &SpinorState| -> f64 {
        s.site_probabilities()
            .iter()
            .enumerate()
            .filter(|(j, _)| p.signed_coordinate(*j).abs() >= seam)
            .map(|(_, q)| q)
            .sum()
    };
    let window = history.iter().take_while(|s| clear(s) < SEAM_MASS).count();
    let x_mean: Vec<f64> = path.iter().map(|q| q.x_mean).collect();
    let slope = least_squares_slope(&x_mean[..window]);
    let d = p.units().a();
    let speed_limit = p.zeta() * d / p.units().tau();

    let first = history[0].site_probabilities();
    let last = history[history.len() - 1].site_probabilities();
    let transport = first.iter().zip(&last).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);

    let summary = json!({
        "experiment": "packet",
        "theta": p.theta(),
        "m_ratio": p.c(),
        "zeta": p.zeta(),
        "sites": p.n_sites(),
        "steps": cfg.steps,
        "n0": cfg.n0,
        "delta": cfg.delta,
        "k": cfg.k,
        "sign": sign_name(cfg.sign),
        "max_norm_drift": drift,
        "drift_fit_steps": window,
        "x_mean_slope": slope,
        "speed_bound_ok": slope.abs() <= speed_limit,
        "transport": transport,
        "norm": norms,
        "x_mean": x_mean,
        "x_star": path.iter().map(|q| q.x_star).collect::<Vec<_>>(),
        "x_var": x_var,
    });
    Ok(ExperimentOutput { table, summary })
}

fn local_maxima(values: &[f64]) -> usize {
    values.windows(3).filter(|w| w[1] > w[0] && w[1] > w[2]).count()
}

pub fn run_double_slit(cfg: &DoubleSlitConfig) -> anyhow::Result<ExperimentOutput> {
    let p = &cfg.params;
    let start = double_slit_state(p, cfg.slit_n)?;
    let populated: Vec<f64> = start.amplitudes().iter().map(|a| a.norm_sqr()).filter(|&q| q > 0.0).collect();
    let history = evolve_history(p, start, cfg.steps)?;
    let mut table = probability_table("double-slit", p, &history)?;
    table.meta("slit_n", cfg.slit_n);

    let n = p.n_sites();
    let mut mirror: f64 = 0.0;
    for s in &history {
        let probs = s.site_probabilities();
        for j in 0..n {
            mirror = mirror.max((probs[j] - probs[(n - j) % n]).abs());
        }
    }
    let (norms, drift) = norm_drifts(&history);
    let last = history[history.len() - 1].site_probabilities();
    let between: Vec<f64> = (-(cfg.slit_n as i64)..=cfg.slit_n as i64)
        .map(|x| last[x.rem_euclid(n as i64) as usize])
        .collect();
    let summary = json!({
        "experiment": "double-slit",
        "theta": p.theta(),
        "sites": n,
        "steps": cfg.steps,
        "slit_n": cfg.slit_n,
        "initial_mode_probabilities": populated,
        "max_norm_drift": drift,
        "mirror_residual": mirror,
        "final_local_maxima_between_slits": local_maxima(&between),
        "norm": norms,
    });
    Ok(ExperimentOutput { table, summary })
}

pub fn run_collision(cfg: &CollisionConfig) -> anyhow::Result<ExperimentOutput> {
    let p = &cfg.params;
    let left = gaussian_packet(p, -cfg.x0, cfg.delta, cfg.k, Component::Plus)?;
    let right = gaussian_packet(p, cfg.x0, cfg.delta, -cfg.k, Component::Plus)?;
    let mut psi = two_particle_from_singles(&left, &right)?;

    let mut table = Table::new("collide", vec!["t", "site_a", "site_b", "prob"]);
    param_meta(&mut table, p);
    table
        .meta("steps", cfg.steps)
        .meta("x0", cfg.x0)
        .meta("delta", num(cfg.delta))
        .meta("k", cfg.k)
        .meta("dump_every", cfg.dump_every);

    let n = p.n_sites();
    let order = left_to_right(p);
    let mut clamp = Clamp::default();
    let (mut antisym, mut symmetry, mut drift): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut diagonal_t0 = 0.0;
    let mut dumped = Vec::new();
    for t in 0..=cfg.steps {
        if t > 0 {
            psi = evolve_two_particle(&psi, p, 1)?;
        }
        antisym = antisym.max(psi.antisymmetry_residual());
        drift = drift.max((psi.norm_sqr() - 1.0).abs());
        let probs = psi.site_probability_matrix();
        for a in 0..n {
            for b in 0..n {
                symmetry = symmetry.max((probs[a][b] - probs[b][a]).abs());
            }
        }
        if t == 0 {
            diagonal_t0 = (0..n).map(|a| probs[a][a]).fold(0.0, f64::max);
        }
        if t % cfg.dump_every == 0 || t == cfg.steps {
            dumped.push(t);
            for &a in &order {
                for &b in &order {
                    table.push(vec![
                        t.to_string(),
                        p.signed_coordinate(a).to_string(),
                        p.signed_coordinate(b).to_string(),
                        num(clamp.apply(probs[a][b])?),
                    ]);
                }
            }
        }
    }
    clamp.report("collide");
    let summary = json!({
        "experiment": "collide",
        "theta": p.theta(),
        "sites": n,
        "steps": cfg.steps,
        "x0": cfg.x0,
        "delta": cfg.delta,
        "k": cfg.k,
        "dumped_steps": dumped,
        "antisymmetry_residual": antisym,
        "probability_symmetry_residual": symmetry,
        "diagonal_max_at_t0": diagonal_t0,
        "max_norm_drift": drift,
    });
    Ok(ExperimentOutput { table, summary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ConfigDoc, Experiment, ExperimentConfig, RunConfig};

    fn packet(doc: ConfigDoc) -> PacketConfig {
        match RunConfig::resolve(Experiment::Packet, doc).unwrap().experiment {
            ExperimentConfig::Packet(p) => p,
            _ => unreachable!(),
        }
    }

    #[test]
    fn refraction_rows() {
        let out = run_refraction_curve(11).unwrap();
        let m = out.table.column("m_over_mp").unwrap();
        let z = out.table.column("zeta").unwrap();
        assert_eq!((m[0], z[0]), (0.0, 1.0));
        assert_eq!((m[10], z[10]), (1.0, 0.0));
        assert!((z[6] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn packets_move_toward_each_other() {
        let right = run_packet(&packet(ConfigDoc { n0: Some(-10), steps: Some(30), ..Default::default() })).unwrap();
        let left = run_packet(&packet(ConfigDoc { n0: Some(10), k: Some(-8), steps: Some(30), ..Default::default() })).unwrap();
        let slope = |o: &ExperimentOutput| o.summary["x_mean_slope"].as_f64().unwrap();
        assert!(slope(&right) > 0.05, "{}", slope(&right));
        assert!(slope(&left) < -0.05, "{}", slope(&left));
        assert!((slope(&right) + slope(&left)).abs() < 1e-9);
    }

    #[test]
    fn slope_fit() {
        assert!((least_squares_slope(&[1.0, 3.0, 5.0, 7.0]) - 2.0).abs() < 1e-15);
        assert_eq!(least_squares_slope(&[4.0]), 0.0);
    }
}
