//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL line (run with `cargo test --test acceptance -- --nocapture`).
//!
//! Thresholds and tolerances are pinned in code; nothing is deferred to
//! later calibration. Where a prescription formula is desk-infeasible
//! (the θ/ρ adiabatic time), the test prints the prescription alongside the
//! empirically adequate parameters it runs with.

use rsaa_cli::figures;
use rsaa_cli::harness::{self, trial_seed};
use rsaa_core::adiabatic::{
    self, AnnealSchedule, EvolveOptions, SuccessCriterion, WaveState,
};
use rsaa_core::classical::{
    self, BasinHoppingConfig, RunParams, Temperature,
};
use rsaa_core::functions::{self, ObjectiveSpec};
use rsaa_core::grid::{self, Axis, GridND};
use rsaa_core::linalg;
use rsaa_core::morse;
use rsaa_core::rng;
use rsaa_core::spectral::{self, OperatorKind, ScalingMode};
use std::time::Instant;

fn report(number: usize, name: &str, pass: bool, detail: &str) {
    println!(
        "ACCEPTANCE {number:>2} {}: {name} | {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {number} ({name}) failed: {detail}");
}

#[test]
fn criterion_01_analytic_spectra() {
    let started = Instant::now();
    let g = GridND::line(0.0, std::f64::consts::PI, 2047).unwrap();
    let lap = grid::build_laplacian(&g).unwrap();
    let sol = spectral::lowest_eigenpairs(&lap, 2, 1e-7).unwrap();
    let e1_ok = (sol.values[0] - 1.0).abs() < 1e-3;
    let e2_ok = (sol.values[1] - 4.0).abs() / 4.0 < 1e-3;
    let gh = GridND::line(-12.0, 12.0, 2047).unwrap();
    let sphere = functions::make_sphere(1);
    let mut harmonic_ok = true;
    let mut worst = 0.0f64;
    for lambda in [1.0, 2.0, 5.0] {
        let h = grid::build_hamiltonian(&gh, &sphere, lambda).unwrap();
        let gap = spectral::spectral_gap(&h, 1e-6).unwrap().gap;
        let rel = (gap - 2.0 * lambda).abs() / (2.0 * lambda);
        worst = worst.max(rel);
        harmonic_ok &= rel < 5e-3;
    }
    let secs = started.elapsed().as_secs_f64();
    report(
        1,
        "analytic spectra",
        e1_ok && e2_ok && harmonic_ok && secs < 30.0,
        &format!(
            "box E1={:.6} E2={:.6}; harmonic worst rel err {:.2e}; {:.1}s",
            sol.values[0], sol.values[1], worst, secs
        ),
    );
}

#[test]
fn criterion_02_witten_zero_mode_refinement() {
    let spec = functions::make_biquartic();
    let beta = 10.0;
    let quotient = |n: usize| -> f64 {
        let g = GridND::line(-2.0, 2.0, n).unwrap();
        let w = grid::build_witten(&g, &spec, beta).unwrap();
        let psi: Vec<f64> = (0..g.len())
            .map(|i| (-beta * spec.value(&g.node(i)).unwrap()).exp())
            .collect();
        w.rayleigh_quotient(&psi)
    };
    let coarse = quotient(2047);
    let fine = quotient(4095); // 2n+1 halves the spacing
    // The discrete operator is not an exact sum of squares, so the sampled
    // zero mode can sit O(h²) below zero; the magnitude carries the
    // convergence order.
    let ratio = coarse.abs() / fine.abs();
    let pass = coarse.abs() < 1e-2 && (3.2..=4.8).contains(&ratio);
    report(
        2,
        "witten zero mode O(h^2)",
        pass,
        &format!("R(2047)={coarse:.3e} R(4095)={fine:.3e} |ratio|={ratio:.3}"),
    );
}

#[test]
fn criterion_03_ground_state_transform_equivalence() {
    let g = GridND::line(-2.0, 2.0, 4095).unwrap();
    let gh = GridND::line(-12.0, 12.0, 4095).unwrap();
    let biq = functions::make_biquartic();
    let sphere = functions::make_sphere(1);
    let mut worst = 0.0f64;
    let mut detail = String::new();
    for lambda in [2.0, 5.0] {
        let a = spectral::transform_equivalence_report(&biq, lambda, &g, 1e-7).unwrap();
        let b = spectral::transform_equivalence_report(&sphere, lambda, &gh, 1e-7).unwrap();
        worst = worst.max(a.relative_difference).max(b.relative_difference);
        detail.push_str(&format!(
            "λ={lambda}: biq {:.3}% harm {:.3}%; ",
            100.0 * a.relative_difference,
            100.0 * b.relative_difference
        ));
    }
    report(3, "ground-state transform equivalence", worst <= 0.02, &detail);
}

#[test]
fn criterion_04_gap_comparison_figure_properties() {
    let started = Instant::now();
    let spec = functions::make_biquartic();
    // (a) rescaled Schrodinger curve: drop from the box-dominated start,
    // interior minimum, then a plateau at sqrt(2 f''(x*)).
    let g = GridND::line(-2.0, 2.0, 2047).unwrap();
    let lambdas: Vec<f64> =
        (0..22).map(|i| 0.5 * (240.0f64).powf(i as f64 / 21.0)).collect();
    let curve = spectral::gap_sweep(
        &spec,
        &g,
        &lambdas,
        OperatorKind::Schrodinger,
        ScalingMode::Rescaled,
        1e-7,
    )
    .unwrap();
    let m = curve.gap.len();
    let argmin = (0..m).min_by(|&a, &b| curve.gap[a].partial_cmp(&curve.gap[b]).unwrap()).unwrap();
    let interior_min = argmin > 0
        && argmin < m - 1
        && curve.gap[argmin] < curve.gap[0]
        && curve.gap[argmin] < *curve.gap.last().unwrap();
    let last3 = &curve.gap[m - 3..];
    let plateau_spread = (last3.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - last3.iter().cloned().fold(f64::INFINITY, f64::min))
        / last3.iter().cloned().fold(f64::INFINITY, f64::min);
    let plateau_ok = plateau_spread <= 0.05;

    // (b) Witten log-gap against β: decreasing, straight, slope near -2 H_f.
    let gw = GridND::line(-2.0, 2.0, 8191).unwrap();
    let betas: Vec<f64> = (0..8).map(|i| 10.0 + 2.0 * i as f64).collect();
    let wcurve =
        spectral::gap_sweep(&spec, &gw, &betas, OperatorKind::Witten, ScalingMode::Raw, 1e-7)
            .unwrap();
    let decreasing = wcurve.gap.windows(2).all(|w| w[1] < w[0]);
    let logs: Vec<f64> = wcurve.gap.iter().map(|g| g.ln()).collect();
    let (slope, _, r2) = linalg::linear_fit(&wcurve.parameter, &logs);
    let (pairing, _) = morse::sublevel_pairing(&spec, 200_001).unwrap();
    let predicted = -2.0 * pairing.morse_barrier;
    let slope_ok = (slope - predicted).abs() / predicted.abs() <= 0.20;
    let secs = started.elapsed().as_secs_f64();
    report(
        4,
        "gap-comparison figure properties",
        interior_min && plateau_ok && decreasing && r2 >= 0.98 && slope_ok && secs < 300.0,
        &format!(
            "argmin λ={:.2}, plateau spread {:.2}%, witten slope {:.4} vs -2H_f={:.4}, R²={:.4}, {:.0}s",
            curve.parameter[argmin],
            100.0 * plateau_spread,
            slope,
            predicted,
            r2,
            secs
        ),
    );
}

#[test]
fn criterion_05_morse_matches_derivative_scan() {
    let spec = functions::make_fi_1d();
    let (pairing, tree) = morse::sublevel_pairing(&spec, 200_001).unwrap();

    // Independent oracle: 1e6-point derivative scan, critical points refined
    // by bisection, pairing by processing interior maxima in ascending
    // order (each maximum kills the higher-minimum side).
    let n = 1_000_000;
    let df = |x: f64| spec.gradient(&[x]).unwrap()[0];
    let mut criticals: Vec<f64> = Vec::new();
    let mut prev_x = -3.0;
    let mut prev_g = df(prev_x);
    for i in 1..=n {
        let x = -3.0 + 6.0 * i as f64 / n as f64;
        let gr = df(x);
        if (prev_g < 0.0) != (gr < 0.0) {
            let (mut lo, mut hi) = (prev_x, x);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if (df(lo) < 0.0) != (df(mid) < 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            criticals.push(0.5 * (lo + hi));
        }
        prev_x = x;
        prev_g = gr;
    }
    // alternating minima/maxima starting and ending with minima
    let minima: Vec<f64> = criticals.iter().step_by(2).cloned().collect();
    let maxima: Vec<f64> = criticals.iter().skip(1).step_by(2).cloned().collect();
    let count_match =
        tree.nodes.len() == minima.len() && pairing.pairs.len() == maxima.len();

    // oracle H_f: sweep maxima ascending by value, union adjacent basins;
    // the dying side is the one whose minimum is higher.
    let fv = |x: f64| spec.value(&[x]).unwrap();
    let mut min_vals: Vec<f64> = minima.iter().map(|&x| fv(x)).collect();
    let mut alive: Vec<bool> = vec![true; min_vals.len()];
    let mut order: Vec<usize> = (0..maxima.len()).collect();
    order.sort_by(|&a, &b| fv(maxima[a]).partial_cmp(&fv(maxima[b])).unwrap());
    let mut oracle_hf = 0.0f64;
    for &s in &order {
        // basins s and s+1 merge at this saddle; representative minima are
        // the lowest alive minima on each side
        let left = (0..=s).rev().find(|&i| alive[i]).unwrap();
        let right = (s + 1..min_vals.len()).find(|&i| alive[i]).unwrap();
        let saddle_v = fv(maxima[s]);
        if min_vals[left] <= min_vals[right] {
            oracle_hf = oracle_hf.max(saddle_v - min_vals[right]);
            alive[right] = false;
            min_vals[left] = min_vals[left].min(min_vals[right]);
        } else {
            oracle_hf = oracle_hf.max(saddle_v - min_vals[left]);
            alive[left] = false;
            min_vals[right] = min_vals[right].min(min_vals[left]);
        }
    }
    let hf_ok = (pairing.morse_barrier - oracle_hf).abs() <= pairing.value_band;
    report(
        5,
        "sublevel pairing matches scan oracle",
        count_match && hf_ok,
        &format!(
            "minima {}/{} saddles {}/{} H_f {:.4} vs oracle {:.4} (band {:.2e})",
            tree.nodes.len(),
            minima.len(),
            pairing.pairs.len(),
            maxima.len(),
            pairing.morse_barrier,
            oracle_hf,
            pairing.value_band
        ),
    );
}

#[test]
fn criterion_06_tensorized_gap() {
    let blocks = vec![functions::make_biquartic(), functions::make_biquartic()];
    let eye = vec![1.0, 0.0, 0.0, 1.0];
    let spec = functions::compose_with_rotation(blocks, eye);
    let rs = spec.as_rotated().unwrap();
    let g2 = GridND::new(vec![
        Axis { min: -2.0, max: 2.0, n: 127 },
        Axis { min: -2.0, max: 2.0, n: 127 },
    ])
    .unwrap();
    let mut worst = 0.0f64;
    let mut detail = String::new();
    for lambda in [1.0, 5.0] {
        let h2 = grid::build_hamiltonian(&g2, &spec, lambda).unwrap();
        let full = spectral::spectral_gap(&h2, 1e-5).unwrap().gap;
        let tensor = spectral::separable_gap(rs, lambda, 127, 1e-8).unwrap();
        let rel = (full - tensor).abs() / tensor;
        worst = worst.max(rel);
        detail.push_str(&format!("λ={lambda}: 2D {full:.5} vs min-1D {tensor:.5} ({:.3}%); ", 100.0 * rel));
    }
    report(6, "tensorization of separable gaps", worst <= 0.01, &detail);
}

#[test]
fn criterion_07_rsaa_end_to_end() {
    let started = Instant::now();
    let spec = functions::make_biquartic();
    let g = GridND::line(-2.0, 2.0, 2047).unwrap();
    let eps = 0.05;

    // The concentration-lemma formula with the honest local Hessian bound
    // (r = 0.3 around x*, L = max|f''|) prescribes λ in the hundreds, and
    // θ/ρ then prescribes T beyond any desk budget; both are printed for
    // the record while the run uses the lemma's own conclusion empirically
    // (smallest ladder λ whose ground state passes the 1/5 tail bound) and
    // a T ladder, per the adiabatic module's documented resolution.
    let xstar = spec.minimizer.as_ref().unwrap().x[0];
    let r = 0.3;
    let hess_bound = (12.0 * (xstar - r) * (xstar - r) - 2.0f64)
        .max(12.0 * (xstar + r) * (xstar + r) - 2.0);
    let lambda_formula = adiabatic::required_lambda_max(1, hess_bound, eps, r).unwrap();

    // empirical λ ladder: the lemma's conclusion as the stopping rule
    let mut lambda = 2.0;
    let mut lambda_used = None;
    for _ in 0..12 {
        let h = grid::build_hamiltonian(&g, &spec, lambda).unwrap();
        let sol = spectral::lowest_eigenpairs(&h, 1, 1e-7).unwrap();
        let state = WaveState::from_real(&sol.vectors[0]);
        let rep = adiabatic::energy_markov_check(&g, &spec, &state, eps).unwrap();
        if rep.within_bound {
            lambda_used = Some(lambda);
            break;
        }
        lambda *= 1.5;
    }
    let lambda_max = lambda_used.expect("tail-bound ladder found no λ");

    let (ss, gaps) = adiabatic::gap_profile(&spec, &g, lambda_max, 16, 1e-6).unwrap();
    let big_lambda = (0..g.len())
        .map(|i| spec.value(&g.node(i)).unwrap().abs())
        .fold(0.0f64, f64::max);
    let theta = adiabatic::adiabatic_theta(&ss, &gaps, lambda_max, big_lambda, 0.2).unwrap();
    println!(
        "  criterion 7 prescriptions: λ_formula(L={hess_bound:.2}, r={r}) = {lambda_formula:.1}, \
         θ = {:.3e}, θ/ρ = {:.3e} (desk-infeasible; running the empirical ladder at λ = {lambda_max})",
        theta.theta, theta.t_adiabatic
    );

    let h1 = grid::build_hamiltonian(&g, &spec, lambda_max).unwrap();
    let ground = spectral::lowest_eigenpairs(&h1, 1, 1e-8).unwrap();
    let dt = 2e-3;
    let mut outcome = None;
    for t in [3200.0, 6400.0] {
        let schedule =
            AnnealSchedule { lambda_max, total_time: t, steps: (t / dt).ceil() as usize };
        let opts = EvolveOptions { checkpoints: 0, ..Default::default() };
        let rep = adiabatic::evolve(&g, &spec, &schedule, &opts).unwrap();
        let overlap = rep.state.overlap_real(&ground.vectors[0]);
        let success =
            adiabatic::success_probability(&g, &spec, &rep.state, eps, SuccessCriterion::Value)
                .unwrap();
        outcome = Some((t, overlap, success, rep.max_norm_drift));
        if overlap >= 0.9 {
            break;
        }
    }
    let (t_used, overlap, success, drift) = outcome.unwrap();
    let secs = started.elapsed().as_secs_f64();
    report(
        7,
        "RsAA end to end",
        success >= 0.6 && overlap >= 0.9 && drift < 1e-6 && secs < 600.0,
        &format!(
            "λ={lambda_max} T={t_used} success={success:.4} overlap={overlap:.6} drift={drift:.1e} {secs:.0}s"
        ),
    );
}

#[test]
fn criterion_08_basin_hopping_reproductions() {
    let started = Instant::now();
    // (a) separable biquartic, T = 1/d: 5/5 and monotone median evals. The
    // hop width sits just above the inter-well distance so per-coordinate
    // flips stay rare; the paper's near-linear scaling additionally relies
    // on library-side adaptive step sizing, which the fixed-step protocol
    // here does not claim.
    let mut medians_a = Vec::new();
    let mut all_success = true;
    for &d in &[10usize, 20, 40] {
        let blocks: Vec<ObjectiveSpec> = (0..d).map(|_| functions::make_biquartic()).collect();
        let mut eye = vec![0.0; d * d];
        for i in 0..d {
            eye[i * d + i] = 1.0;
        }
        let spec = functions::compose_with_rotation(blocks, eye);
        let cfg = BasinHoppingConfig {
            hop_step: 0.8,
            temperature: Temperature::OverDimension,
            ..Default::default()
        };
        let mut evals = Vec::new();
        for trial in 0..5 {
            let seed = trial_seed(2024, d, "basin-hopping", trial);
            let params = RunParams::new(seed, 50_000_000).with_target(0.0, 1e-6);
            let rec = classical::run_basin_hopping(&spec, &cfg, &params, None).unwrap();
            all_success &= rec.success;
            evals.push(rec.evals as f64);
        }
        evals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        medians_a.push(evals[2]);
    }
    let monotone_a = medians_a.windows(2).all(|w| w[1] > w[0]);

    // (b) modified Rastrigin d = 2..7: strictly increasing log-median TTS
    // in evaluations (seconds are hardware-bound and explicitly not
    // targeted).
    let mut medians_b = Vec::new();
    for d in 2..=7usize {
        let spec = functions::make_modified_rastrigin(d);
        let cfg = BasinHoppingConfig {
            hop_step: 1.0,
            temperature: Temperature::OverDimension,
            ..Default::default()
        };
        let mut evals = Vec::new();
        for trial in 0..9 {
            let seed = trial_seed(77, d, "basin-hopping", trial);
            let params =
                RunParams::new(seed, 50_000_000).with_target(-90.0 * d as f64, 1e-6);
            let rec = classical::run_basin_hopping(&spec, &cfg, &params, None).unwrap();
            assert!(rec.success, "mod-rastrigin d={d} trial {trial} failed");
            evals.push(rec.evals as f64);
        }
        evals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        medians_b.push(evals[4]);
    }
    let increasing_b = medians_b.windows(2).all(|w| w[1].ln() > w[0].ln());
    let secs = started.elapsed().as_secs_f64();
    report(
        8,
        "basin-hopping reproductions",
        all_success && monotone_a && increasing_b,
        &format!(
            "biquartic medians {medians_a:?}; mod-rastrigin medians {medians_b:?}; {secs:.0}s"
        ),
    );
}

#[test]
fn criterion_09_langevin_trap_scaling() {
    // Median first-hitting time of the global basin from the +0.69 local
    // minimum strictly increases across β; 21 trials each.
    let spec = functions::make_biquartic();
    let bounds = spec.bounds().to_vec();
    let eta = 1e-3;
    let cap = 100_000_000u64;
    let mut medians = Vec::new();
    for &beta in &[5.0f64, 10.0, 20.0, 40.0] {
        let noise = (2.0 * eta / beta).sqrt();
        let mut hits = Vec::new();
        for trial in 0..21u64 {
            let mut rngs = rng::stream(rng::derive(beta.to_bits(), trial));
            let mut x = 0.70f64;
            let mut steps = 0u64;
            while steps < cap {
                // biquartic derivative, finite-difference checked elsewhere
                let gr = 4.0 * x * x * x - 2.0 * (x - 1.0 / 32.0);
                x += -eta * gr + noise * rng::standard_normal(&mut rngs);
                let mut p = [x];
                classical::reflect_into(&mut p, &bounds);
                x = p[0];
                steps += 1;
                if x <= 0.0 {
                    break;
                }
            }
            hits.push(steps as f64);
        }
        hits.sort_by(|a, b| a.partial_cmp(b).unwrap());
        medians.push(hits[10]);
    }
    let increasing = medians.windows(2).all(|w| w[1] > w[0]);
    report(
        9,
        "langevin trap scaling in β",
        increasing,
        &format!("median hitting steps {medians:?} for β = 5,10,20,40"),
    );
}

#[test]
fn criterion_10_hessian_block_recovery() {
    let d = 12;
    let cfg = classical::HessianAlgorithmConfig::default();
    let mut successes = 0;
    let mut flagged = 0;
    let mut silent_wrong = 0;
    for instance in 0..20u64 {
        let blocks: Vec<ObjectiveSpec> =
            (0..d).map(|_| functions::make_biquartic()).collect();
        let spec = functions::compose_rotated_blocks(blocks, 1000 + instance);
        let f_star = spec.minimizer.as_ref().unwrap().value;
        let params =
            RunParams::new(rng::derive(5, instance), 5_000_000).with_target(f_star, 1e-4);
        match classical::run_hessian_algorithm(&spec, &cfg, &params, None) {
            Ok(rec) if rec.success && rec.best_f - f_star <= 1e-4 => successes += 1,
            Ok(_) => silent_wrong += 1,
            Err(rsaa_core::Error::BlockRecoveryFailed { .. }) => flagged += 1,
            Err(e) => panic!("unexpected error: {e}"),
        }
    }
    report(
        10,
        "hessian rotation recovery",
        successes >= 19 && silent_wrong == 0,
        &format!("{successes}/20 recovered, {flagged} flagged, {silent_wrong} silent wrong"),
    );
}

#[test]
fn criterion_11_potential_surface_claims() {
    let dir = tempfile::tempdir().unwrap();
    let window = GridND::new(vec![
        Axis { min: -5.12, max: 5.12, n: 255 },
        Axis { min: -5.12, max: 5.12, n: 255 },
    ])
    .unwrap();
    let sep = functions::make_rastrigin_sep(2);
    let plain =
        figures::figure_potentials(&sep, &window, 5.0, 5.0, dir.path(), "sep", 1e-6).unwrap();

    // θ = π/6 rotation of the same landscape, same grid window.
    let theta = std::f64::consts::PI / 6.0;
    let u = vec![theta.cos(), -theta.sin(), theta.sin(), theta.cos()];
    let blocks = vec![functions::make_rastrigin_sep(1), functions::make_rastrigin_sep(1)];
    let rot = functions::compose_with_rotation(blocks, u);
    let rotated =
        figures::figure_potentials(&rot, &window, 5.0, 5.0, dir.path(), "rot", 1e-6).unwrap();

    let pass = plain.ground_clusters == 1
        && plain.wkb_clusters >= 2
        && rotated.ground_clusters == 1
        && rotated.wkb_clusters >= 2;
    report(
        11,
        "potential-surface cluster claims",
        pass,
        &format!(
            "plain: ground {} wkb {}; rotated: ground {} wkb {}",
            plain.ground_clusters, plain.wkb_clusters, rotated.ground_clusters,
            rotated.wkb_clusters
        ),
    );
}

#[test]
fn criterion_12_tts_determinism() {
    let plan_json = r#"{
        "experiment": "determinism-probe",
        "function": "biquartic-sep",
        "dims": [2, 3],
        "trials": 2,
        "base_seed": 99,
        "budget": 200000,
        "epsilon": 0.000001,
        "timeout_seconds": 120,
        "algorithms": [
            {"algo": "langevin", "eta": 0.001, "beta": 20.0},
            {"algo": "basin-hopping", "step": 0.8, "temperature": "1/d"}
        ]
    }"#;
    let plan: rsaa_cli::config::ExperimentPlan = serde_json::from_str(plan_json).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let mut bodies = Vec::new();
    for run in 0..2 {
        let summary = harness::run_tts(&plan).unwrap();
        let path = dir.path().join(format!("run{run}.csv"));
        harness::write_trials_csv(&path, &summary).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        bodies.push(harness::csv_without_timing(&text));
        // medians recompute from the raw rows
        for cell in &summary.cells {
            let mut evals: Vec<f64> = summary
                .rows
                .iter()
                .filter(|r| r.dim == cell.dim && r.algo == cell.algo && r.success)
                .map(|r| r.evals as f64)
                .collect();
            evals.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let recomputed = if evals.is_empty() {
                None
            } else if evals.len() % 2 == 1 {
                Some(evals[evals.len() / 2])
            } else {
                Some(0.5 * (evals[evals.len() / 2 - 1] + evals[evals.len() / 2]))
            };
            assert_eq!(recomputed, cell.median_evals, "summary median mismatch");
        }
    }
    report(
        12,
        "TTS rerun determinism",
        bodies[0] == bodies[1] && !bodies[0].is_empty(),
        &format!("{} identical CSV bytes (timing column excluded)", bodies[0].len()),
    );
}
