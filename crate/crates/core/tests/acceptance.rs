//! Acceptance criteria, one test each. Every test writes a single
//! `criterion N ...: PASS|FAIL` line to stderr before asserting.

mod common;

use std::io::Write;
use std::time::Instant;

use mcom::cli::write_csv;
use mcom::lindyn::{build_drift, is_stable_rh, max_real_eigenvalue};
use mcom::measures::{
    log_negativity, report_for, steering, symplectic_eigenvalues, Bipartition, MeasureKind,
    SteeringDirection, TwoModeCM,
};
use mcom::model::{solve_steady_state, PhysicalParams, SolverConfig};
use mcom::sweep::{figure_preset, run_sweep, CellStatus, SweepResult, PRESET_NAMES};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Writes straight to the stderr handle so the line survives output capture.
fn verdict(n: u32, title: &str, ok: bool, detail: &str) {
    let line = format!("\ncriterion {n} ({title}): {} [{detail}]\n", if ok { "PASS" } else { "FAIL" });
    std::io::stderr().write_all(line.as_bytes()).unwrap();
    assert!(ok, "criterion {n} failed: {detail}");
}

fn full_grid(name: &str) -> SweepResult {
    run_sweep(&figure_preset(name).unwrap(), workers()).unwrap()
}

#[test]
fn criterion_01_lyapunov_residual_and_runtime() {
    let mut worst = 0.0f64;
    let mut violations = 0;
    let mut slowest = (String::new(), 0.0f64);
    let mut stable_cells = 0;
    for name in PRESET_NAMES.iter().take_while(|n| !n.starts_with("fig9")) {
        let start = Instant::now();
        let res = full_grid(name);
        let secs = start.elapsed().as_secs_f64();
        if secs > slowest.1 {
            slowest = (name.to_string(), secs);
        }
        assert_eq!(res.dims(), (101, 101));
        for c in res.cells.iter().filter(|c| c.stable) {
            stable_cells += 1;
            match (c.residual, c.diffusion_scale) {
                (Some(r), Some(d)) => {
                    worst = worst.max(r / d);
                    violations += usize::from(r > 1e-10 * d);
                }
                _ => violations += 1,
            }
        }
    }
    let ok = violations == 0 && slowest.1 < 60.0;
    let detail = format!(
        "{stable_cells} stable cells, worst relative residual {worst:.2e}, {violations} violations, slowest {} {:.2}s",
        slowest.0, slowest.1
    );
    verdict(1, "Lyapunov residual and runtime", ok, &detail);
}

#[test]
fn criterion_02_two_mode_squeezed_vacuum() {
    let mut worst = 0.0f64;
    for r in [0.1, 0.5, 1.0, 2.0] {
        let t = common::tmsv(r);
        let e = log_negativity(&t).unwrap();
        worst = worst.max((e - 2.0 * r).abs());
        let g_exact = (2.0 * r).cosh().ln();
        for dir in [SteeringDirection::FirstToSecond, SteeringDirection::SecondToFirst] {
            worst = worst.max((steering(&t, dir).unwrap() - g_exact).abs());
        }
        let (m, p) = symplectic_eigenvalues(&t).unwrap();
        worst = worst.max((m - 0.5).abs()).max((p - 0.5).abs());
    }
    verdict(2, "TMSV oracle", worst <= 1e-9, &format!("max deviation {worst:.2e}"));
}

#[test]
fn criterion_03_cavity_entanglement_peak() {
    let res = full_grid("fig2a");
    let field = res.field(Bipartition::CA, MeasureKind::Entanglement);
    let (n1, n2) = res.dims();
    let mut bad = Vec::new();
    for j in 0..n2 {
        let mut best = (f64::NEG_INFINITY, 0);
        for (i, row) in field.iter().enumerate().take(n1) {
            if let Some(v) = row[j] {
                if v > best.0 {
                    best = (v, i);
                }
            }
        }
        let argmax = res.axis1_values[best.1];
        if !(0.9..=1.1).contains(&argmax) {
            bad.push((res.axis2_values.as_ref().unwrap()[j], argmax));
        }
    }
    let sample: Vec<String> =
        bad.iter().step_by((bad.len() / 6).max(1)).map(|(dc, a)| format!("dc={dc:.2}->da={a:.2}")).collect();
    let detail = format!("{} of {n2} columns outside [0.9, 1.1]; e.g. {}", bad.len(), sample.join(" "));
    verdict(3, "E_ca argmax near the red sideband", bad.is_empty(), &detail);
}

#[test]
fn criterion_04_thermal_robustness() {
    let res = full_grid("fig8c");
    let field = res.field(Bipartition::BC, MeasureKind::Entanglement);
    let temps = res.axis2_values.clone().unwrap();
    let hot = temps.len() - 1;
    assert_eq!(temps[hot], 1000.0);
    let survivors: Vec<(f64, f64)> = field
        .iter()
        .zip(&res.axis1_values)
        .filter_map(|(row, g)| row[hot].filter(|v| *v > 0.0).map(|v| (*g, v)))
        .collect();
    let mut ripples = 0;
    for row in &field {
        let stable: Vec<f64> = row.iter().flatten().copied().collect();
        ripples += stable.windows(2).filter(|w| w[1] > w[0] + 1e-9).count();
    }
    let best = survivors.iter().copied().fold((0.0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
    let detail = format!(
        "{} couplings keep E_Bc > 0 at 1000 K (max {:.3e} at G={}), {ripples} monotonicity violations",
        survivors.len(),
        best.1,
        best.0
    );
    verdict(4, "E_Bc survives 1000 K and decreases with T", !survivors.is_empty() && ripples == 0, &detail);
}

#[test]
fn criterion_05_discord_hierarchy() {
    let max_of = |name: &str, b: Bipartition| {
        let mut spec = figure_preset(name).unwrap();
        spec.bipartitions = vec![b];
        let res = run_sweep(&spec, workers()).unwrap();
        res.field(b, MeasureKind::Discord12).into_iter().flatten().flatten().fold(0.0, f64::max)
    };
    // each panel at its own preset parameters
    let d_ca = max_of("fig4a", Bipartition::CA);
    let d_ba = max_of("fig4b", Bipartition::BA);
    let d_bc = max_of("fig4c", Bipartition::BC);
    // the same three pairs evaluated at each panel set, reported for context
    let shared: Vec<String> = ["fig4a", "fig4b"]
        .iter()
        .map(|name| {
            let [ca, ba, bc] = Bipartition::ALL.map(|b| max_of(name, b));
            format!("{name} set: D_Ba={ba:.3e} D_ca={ca:.3e} D_Bc={bc:.3e}")
        })
        .collect();
    let detail = format!(
        "per panel: max D_Ba = {d_ba:.4e}, D_ca = {d_ca:.4e}, D_Bc = {d_bc:.4e}; {}",
        shared.join("; ")
    );
    verdict(5, "D_Ba > D_ca > D_Bc", d_ba > d_ca && d_ca > d_bc, &detail);
}

#[test]
fn criterion_06_measure_invariants() {
    let mut states = 0;
    let mut violations = Vec::new();
    for name in PRESET_NAMES {
        let mut spec = figure_preset(name).unwrap();
        spec.bipartitions = Bipartition::ALL.to_vec();
        let res = run_sweep(&spec, workers()).unwrap();
        for c in &res.cells {
            if let CellStatus::Failed(msg) = &c.status {
                violations.push(format!("{name}: failed cell {msg}"));
            }
            for (r, b) in c.reports.iter().zip(&spec.bipartitions) {
                states += 1;
                let steer = r.steer_12.max(r.steer_21);
                let discord = r.discord_12.max(r.discord_21);
                let mut why = Vec::new();
                if steer > 0.0 && r.e_n <= 0.0 {
                    why.push("steering without entanglement");
                }
                if (r.e_n > 0.0 && r.nu_minus_pt >= 0.5) || (r.nu_minus_pt < 0.5 - 1e-9 && r.e_n <= 0.0) {
                    why.push("negativity and PT eigenvalue disagree");
                }
                if r.discord_12 < 0.0 || r.discord_21 < 0.0 {
                    why.push("negative discord");
                }
                if discord > 1.0 && r.e_n <= 0.0 {
                    why.push("discord above 1 without entanglement");
                }
                for w in why {
                    violations.push(format!("{name} {b} ({}, {:?}): {w}", c.axis1, c.axis2));
                }
            }
        }
    }
    let detail = format!(
        "{states} states, {} violations{}",
        violations.len(),
        violations.first().map_or(String::new(), |v| format!(", first: {v}"))
    );
    verdict(6, "measure-theory invariants", violations.is_empty(), &detail);
}

#[test]
fn criterion_07_stability_methods_agree() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20_240_601);
    let (mut compared, mut skipped, mut stable, mut disagreements) = (0, 0, 0, 0);
    while compared < 10_000 {
        let a = build_drift(&common::random_effective(&mut rng));
        let m = max_real_eigenvalue(&a).unwrap();
        if m.abs() < 1e-8 {
            skipped += 1;
            continue;
        }
        compared += 1;
        stable += usize::from(m < 0.0);
        match is_stable_rh(&a) {
            Ok(v) if v == (m < 0.0) => {}
            _ => disagreements += 1,
        }
    }
    let detail = format!("{compared} matrices ({stable} stable), {skipped} marginal skipped, {disagreements} disagreements");
    verdict(7, "Routh-Hurwitz vs eigenvalues", disagreements == 0, &detail);
}

#[test]
fn criterion_08_local_symplectic_invariance() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
    let tau = std::f64::consts::TAU;
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let t = common::random_state(&mut rng);
        let r = common::local_rotation(rng.random_range(0.0..tau), rng.random_range(0.0..tau));
        let m = r * t.matrix() * r.transpose();
        let rotated = TwoModeCM::new((m + m.transpose()) * 0.5).unwrap();
        let (a, b) = (report_for(&t).unwrap(), report_for(&rotated).unwrap());
        for k in [
            MeasureKind::Entanglement,
            MeasureKind::Steer12,
            MeasureKind::Steer21,
            MeasureKind::Discord12,
            MeasureKind::Discord21,
        ] {
            worst = worst.max((a.get(k) - b.get(k)).abs());
        }
    }
    verdict(8, "local rotation invariance", worst <= 1e-9, &format!("1000 states, max change {worst:.2e}"));
}

#[test]
fn criterion_09_steady_state_solver() {
    let p = PhysicalParams::reference();
    let ss = solve_steady_state(&p, &SolverConfig::default()).unwrap();
    // substitute into the mean-field equations in SI units
    let i = Complex64::i();
    let (ga, gc) = (p.collective_g_a(), p.collective_g_c());
    let x = ss.beta + ss.beta.conj();
    let eqs = [
        -(i * p.delta_a + p.kappa_a) * ss.alpha_a - i * ga * ss.alpha_a * x + p.drive_a,
        -(i * p.delta_c + p.kappa_c) * ss.alpha_c - i * gc * x + p.drive_c,
        -(i * p.omega_m + p.gamma_m) * ss.beta + i * ga * ss.alpha_a.norm_sqr() + gc * (ss.alpha_c.conj() + ss.alpha_c),
    ];
    let residual = eqs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let bound = 1e-10 * p.drive_a;

    let mut dark = p.clone();
    dark.drive_a = 0.0;
    dark.drive_c = 0.0;
    let zero = solve_steady_state(&dark, &SolverConfig::default()).unwrap();
    let exact_zero = zero.alpha_a == Complex64::new(0.0, 0.0)
        && zero.alpha_c == Complex64::new(0.0, 0.0)
        && zero.beta == Complex64::new(0.0, 0.0);
    let detail = format!("residual {residual:.3e} vs bound {bound:.3e}, zero drive exact: {exact_zero}");
    verdict(9, "mean-field solver", residual <= bound && exact_zero, &detail);
}

#[test]
fn criterion_10_parallel_determinism() {
    let spec = figure_preset("fig9a").unwrap();
    let n = workers().max(4);
    let serial = run_sweep(&spec, 1).unwrap();
    let parallel = run_sweep(&spec, n).unwrap();
    let (d1, dn) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let a = std::fs::read(write_csv(d1.path(), &serial).unwrap()).unwrap();
    let b = std::fs::read(write_csv(dn.path(), &parallel).unwrap()).unwrap();
    verdict(10, "1 vs N workers", a == b, &format!("1 vs {n} workers, {} bytes each", a.len()));
}
