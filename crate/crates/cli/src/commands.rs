//! Implementations behind the CLI subcommands.

use crate::config::{self, RunnableAlgo};
use crate::figures;
use crate::harness;
use crate::output::{csv_bytes, dump_operator, fmt_f64, write_atomic};
use anyhow::{anyhow, bail, Context, Result};
use rsaa_core::adiabatic::{
    self, AnnealSchedule, EvolveOptions, SuccessCriterion, WaveState,
};
use rsaa_core::classical::RunParams;
use rsaa_core::functions::ObjectiveSpec;
use rsaa_core::grid::{self, GridND};
use rsaa_core::morse;
use rsaa_core::spectral::{self, OperatorKind, ScalingMode};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::time::Instant;

fn core_err(e: rsaa_core::Error) -> anyhow::Error {
    anyhow!("{e}")
}

/// "a:b:n" inclusive range.
pub fn parse_range(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        bail!("range must be start:end:count, got '{text}'");
    }
    let a: f64 = parts[0].parse().context("range start")?;
    let b: f64 = parts[1].parse().context("range end")?;
    let n: usize = parts[2].parse().context("range count")?;
    if n == 0 || (n == 1 && a != b) || !(b >= a) {
        bail!("range needs end >= start and count >= 1");
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect())
}

pub fn cmd_spectrum(
    function: &str,
    dim: usize,
    rotate_seed: u64,
    operator: &str,
    param: f64,
    n: usize,
    k: usize,
    tol: f64,
    dump: Option<&Path>,
) -> Result<()> {
    let spec = config::build_function(function, dim, rotate_seed)?;
    let g = GridND::over(&spec, n).map_err(core_err)?;
    let op = match operator {
        "laplacian" => grid::build_laplacian(&g).map_err(core_err)?,
        "schrodinger" => grid::build_hamiltonian(&g, &spec, param).map_err(core_err)?,
        "witten" => grid::build_witten(&g, &spec, param).map_err(core_err)?,
        other => bail!("operator must be laplacian, schrodinger or witten, got '{other}'"),
    };
    if let Some(path) = dump {
        dump_operator(path, &g, &op)?;
    }
    let sol = spectral::lowest_eigenpairs(&op, k, tol).map_err(core_err)?;
    let gap = sol.gap();
    let out = json!({
        "function": spec.name,
        "operator": operator,
        "param": param,
        "grid_points_per_axis": n,
        "eigenvalues": sol.values,
        "residuals": sol.residuals,
        "gap": gap.gap,
        "degenerate": gap.degenerate,
        "iterations": sol.iterations,
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_gap_sweep(
    function: &str,
    dim: usize,
    rotate_seed: u64,
    operator: &str,
    lambda_range: Option<&str>,
    beta_range: Option<&str>,
    scaling: &str,
    n: usize,
    tol: f64,
    out: Option<&Path>,
) -> Result<()> {
    let spec = config::build_function(function, dim, rotate_seed)?;
    let g = GridND::over(&spec, n).map_err(core_err)?;
    let (kind, params) = match operator {
        "schrodinger" => (
            OperatorKind::Schrodinger,
            parse_range(lambda_range.ok_or_else(|| anyhow!("schrodinger sweeps need --lambda"))?)?,
        ),
        "witten" => (
            OperatorKind::Witten,
            parse_range(beta_range.ok_or_else(|| anyhow!("witten sweeps need --beta"))?)?,
        ),
        other => bail!("operator must be schrodinger or witten, got '{other}'"),
    };
    let mode = match scaling {
        "raw" => ScalingMode::Raw,
        "rescaled" => ScalingMode::Rescaled,
        other => bail!("scaling must be raw or rescaled, got '{other}'"),
    };
    let curve = spectral::gap_sweep(&spec, &g, &params, kind, mode, tol).map_err(core_err)?;
    let rows: Vec<Vec<String>> = curve
        .parameter
        .iter()
        .zip(&curve.gap)
        .map(|(p, gap)| vec![fmt_f64(*p), fmt_f64(*gap)])
        .collect();
    let bytes = csv_bytes(&["param (lambda or beta)", "gap (energy)"], &rows);
    match out {
        Some(path) => write_atomic(path, &bytes)?,
        None => print!("{}", String::from_utf8_lossy(&bytes)),
    }
    for (p, e) in &curve.skipped {
        eprintln!("skipped param {p}: {e}");
    }
    Ok(())
}

pub fn cmd_potentials(
    function: &str,
    n: usize,
    lambda: f64,
    beta: f64,
    outdir: &Path,
    stem: &str,
) -> Result<()> {
    let spec = config::build_function(function, 2, 0)?;
    let grid = GridND::over(&spec, n).map_err(core_err)?;
    let figs = figures::figure_potentials(&spec, &grid, lambda, beta, outdir, stem, 1e-6)?;
    let out = json!({
        "function": spec.name,
        "lambda": lambda,
        "beta": beta,
        "near_global_clusters": {
            "objective": figs.objective_clusters,
            "ground": figs.ground_clusters,
            "wkb": figs.wkb_clusters,
        },
        "outdir": outdir.display().to_string(),
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

pub struct AnnealArgs<'a> {
    pub function: &'a str,
    pub n: usize,
    pub lambda_max: &'a str,
    pub hessian_bound: Option<f64>,
    pub radius: Option<f64>,
    pub eps: f64,
    pub criterion: &'a str,
    pub t: &'a str,
    pub rho: f64,
    pub t_cap: f64,
    pub t_start: f64,
    pub overlap_target: f64,
    pub steps: Option<usize>,
    pub dt: Option<f64>,
    pub gap_samples: usize,
    pub checkpoint_csv: Option<PathBuf>,
    pub json_out: Option<PathBuf>,
}

/// End-to-end annealing run. `--lambda-max` takes a number, `auto`
/// (concentration-lemma formula, needs the Hessian bound and radius) or
/// `empirical` (smallest ladder λ whose ground state passes the 1/5 tail
/// bound). `--t` takes a number, `auto` (θ/ρ, clamped to the work cap) or
/// `ladder` (quadruple from --t-start until the overlap target holds).
pub fn cmd_anneal(args: &AnnealArgs<'_>) -> Result<()> {
    let started = Instant::now();
    let spec = config::build_function(args.function, 1, 0)?;
    let g = GridND::over(&spec, args.n).map_err(core_err)?;
    let criterion = match args.criterion {
        "value" => SuccessCriterion::Value,
        "distance" => SuccessCriterion::Distance,
        other => bail!("criterion must be value or distance, got '{other}'"),
    };

    // λ_max selection
    let lambda_formula = match (args.hessian_bound, args.radius) {
        (Some(l), Some(r)) => {
            Some(adiabatic::required_lambda_max(spec.dim, l, args.eps, r).map_err(core_err)?)
        }
        _ => None,
    };
    let lambda_max = match args.lambda_max {
        "auto" => lambda_formula.ok_or_else(|| {
            anyhow!("--lambda-max auto needs --hessian-bound and --radius for the formula")
        })?,
        "empirical" => empirical_lambda(&spec, &g, args.eps)?,
        text => text.parse::<f64>().context("--lambda-max")?,
    };

    // θ and the prescription time from the gap profile at the chosen λ_max.
    let (ss, gaps) =
        adiabatic::gap_profile(&spec, &g, lambda_max, args.gap_samples, 1e-6).map_err(core_err)?;
    let mut big_lambda: f64 = 0.0;
    for i in 0..g.len() {
        big_lambda = big_lambda.max(spec.value(&g.node(i)).map_err(core_err)?.abs());
    }
    let theta = adiabatic::adiabatic_theta(&ss, &gaps, lambda_max, big_lambda, args.rho)
        .map_err(core_err)?;

    let steps_for = |t: f64| -> usize {
        if let Some(s) = args.steps {
            return s;
        }
        if let Some(dt) = args.dt {
            return (t / dt).ceil().max(1.0) as usize;
        }
        // default: the conservative Gershgorin rule
        AnnealSchedule::with_gershgorin_steps(&g, &spec, lambda_max, t)
            .map(|s| s.steps)
            .unwrap_or(1)
    };

    let evolve_once = |t: f64| -> Result<(adiabatic::EvolveReport, f64, f64)> {
        let schedule = AnnealSchedule { lambda_max, total_time: t, steps: steps_for(t) };
        let opts = EvolveOptions { checkpoints: 32, ..Default::default() };
        let rep = adiabatic::evolve(&g, &spec, &schedule, &opts).map_err(core_err)?;
        let h1 = grid::build_hamiltonian(&g, &spec, lambda_max).map_err(core_err)?;
        let ground = spectral::lowest_eigenpairs(&h1, 1, 1e-8).map_err(core_err)?;
        let overlap = rep.state.overlap_real(&ground.vectors[0]);
        let p = adiabatic::success_probability(&g, &spec, &rep.state, args.eps, criterion)
            .map_err(core_err)?;
        Ok((rep, overlap, p))
    };

    let (t_used, report, overlap, success_p, t_note) = match args.t {
        "auto" => {
            let t_raw = theta.t_adiabatic;
            let t = t_raw.min(args.t_cap);
            let note = if t < t_raw {
                eprintln!(
                    "warning: θ/ρ prescribes T = {t_raw:.3e}; clamped to the work cap {t:.3e} \
                     (raise --t-cap to override)"
                );
                format!("theta/rho {t_raw:.6e} clamped to cap")
            } else {
                "theta/rho".into()
            };
            let (rep, ov, p) = evolve_once(t)?;
            (t, rep, ov, p, note)
        }
        "ladder" => {
            let mut t = args.t_start;
            let mut out = None;
            for _ in 0..6 {
                let (rep, ov, p) = evolve_once(t)?;
                let good = ov >= args.overlap_target;
                out = Some((t, rep, ov, p));
                if good {
                    break;
                }
                t *= 4.0;
            }
            let (t, rep, ov, p) = out.unwrap();
            (t, rep, ov, p, "ladder".into())
        }
        text => {
            let t = text.parse::<f64>().context("--t")?;
            let (rep, ov, p) = evolve_once(t)?;
            (t, rep, ov, p, "fixed".into())
        }
    };

    if let Some(path) = &args.checkpoint_csv {
        let rows: Vec<Vec<String>> = report
            .checkpoints
            .iter()
            .map(|c| {
                vec![
                    fmt_f64(c.s),
                    fmt_f64(c.ground_overlap),
                    fmt_f64(c.energy),
                    fmt_f64(c.ground_energy),
                ]
            })
            .collect();
        write_atomic(
            path,
            &csv_bytes(
                &["s (schedule position)", "ground_overlap", "energy", "ground_energy"],
                &rows,
            ),
        )?;
    }
    let out = json!({
        "function": spec.name,
        "lambda_max": lambda_max,
        "lambda_formula": lambda_formula,
        "theta": theta.theta,
        "t_from_theta": theta.t_adiabatic,
        "t_used": t_used,
        "t_mode": t_note,
        "steps": steps_for(t_used),
        "success_probability": success_p,
        "final_overlap": overlap,
        "norm_drift": report.max_norm_drift,
        "epsilon": args.eps,
        "criterion": args.criterion,
        "wall_seconds": started.elapsed().as_secs_f64(),
    });
    let text = serde_json::to_string_pretty(&out)?;
    match &args.json_out {
        Some(path) => write_atomic(path, text.as_bytes())?,
        None => println!("{text}"),
    }
    Ok(())
}

/// Smallest λ in a doubling ladder whose ground state passes the
/// concentration lemma's `P[f ≥ ε] ≤ 1/5` conclusion.
pub fn empirical_lambda(spec: &ObjectiveSpec, g: &GridND, eps: f64) -> Result<f64> {
    let mut lambda = 2.0;
    for _ in 0..12 {
        let h = grid::build_hamiltonian(g, spec, lambda).map_err(core_err)?;
        let sol = spectral::lowest_eigenpairs(&h, 1, 1e-7).map_err(core_err)?;
        let state = WaveState::from_real(&sol.vectors[0]);
        let rep = adiabatic::energy_markov_check(g, spec, &state, eps).map_err(core_err)?;
        if rep.within_bound {
            return Ok(lambda);
        }
        lambda *= 1.5;
    }
    bail!("no ladder λ concentrated the ground state to the 1/5 tail bound")
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_opt(
    algo: &RunnableAlgo,
    function: &str,
    dim: usize,
    rotate_seed: u64,
    seed: u64,
    budget: u64,
    timeout_seconds: f64,
    eps: f64,
    trials: usize,
) -> Result<()> {
    let spec = config::build_function(function, dim, rotate_seed)?;
    let f_star = spec
        .minimizer
        .as_ref()
        .map(|m| m.value)
        .ok_or_else(|| anyhow!("function '{function}' has no minimizer metadata for the target"))?;
    for trial in 0..trials.max(1) {
        let trial_seed = rsaa_core::rng::derive(seed, trial as u64);
        let params = RunParams::new(trial_seed, budget).with_target(f_star, eps);
        let started = Instant::now();
        let stop = move || started.elapsed().as_secs_f64() > timeout_seconds;
        let mut rec = harness::run_algorithm(&spec, algo, &params, Some(&stop))?;
        rec.wall_time = started.elapsed().as_secs_f64();
        let out = json!({
            "trial": trial,
            "seed": trial_seed,
            "best_x": rec.best_x,
            "best_f": rec.best_f,
            "evals": rec.evals,
            "success": rec.success,
            "wall_time": rec.wall_time,
        });
        println!("{}", serde_json::to_string(&out)?);
    }
    Ok(())
}

pub fn cmd_tts(config_path: &Path, outdir_override: Option<&Path>) -> Result<()> {
    let mut plan = config::load_plan(config_path)?;
    if let Some(dir) = outdir_override {
        plan.outdir = dir.display().to_string();
    }
    let summary = harness::run_tts(&plan)?;
    let outdir = Path::new(&plan.outdir);
    let csv_path = outdir.join(format!("{}-trials.csv", plan.experiment));
    let json_path = outdir.join(format!("{}-summary.json", plan.experiment));
    harness::write_trials_csv(&csv_path, &summary)?;
    harness::write_summary_json(&json_path, &summary)?;
    println!("{}", json_path.display());
    for cell in &summary.cells {
        let med = cell
            .median_evals
            .map(|m| format!("{m}"))
            .unwrap_or_else(|| "FAIL".into());
        println!(
            "dim {:>3}  {:<24} trials {}  failures {}  median evals {}",
            cell.dim, cell.algo, cell.trials, cell.failures, med
        );
    }
    Ok(())
}

pub fn cmd_morse(
    function: &str,
    dim: usize,
    resolution: usize,
    json_out: Option<&Path>,
    dot_out: Option<&Path>,
) -> Result<()> {
    let spec = config::build_function(function, dim, 0)?;
    let (pairing, tree) = morse::sublevel_pairing(&spec, resolution).map_err(core_err)?;
    let pairs: Vec<_> = pairing
        .pairs
        .iter()
        .map(|p| {
            json!({
                "minimum": p.minimum,
                "minimum_value": p.minimum_value,
                "saddle": p.saddle,
                "saddle_value": p.saddle_value,
                "barrier": p.barrier(),
            })
        })
        .collect();
    let out = json!({
        "function": spec.name,
        "global_min": pairing.global_min,
        "global_min_value": pairing.global_min_value,
        "morse_barrier": pairing.morse_barrier,
        "value_band": pairing.value_band,
        "plateau_flag": pairing.plateau_flag,
        "pairs": pairs,
    });
    let text = serde_json::to_string_pretty(&out)?;
    match json_out {
        Some(path) => write_atomic(path, text.as_bytes())?,
        None => println!("{text}"),
    }
    if let Some(path) = dot_out {
        let mut dot = String::from("digraph merge_tree {\n");
        for (i, node) in tree.nodes.iter().enumerate() {
            dot.push_str(&format!(
                "  n{i} [label=\"min {:.4} @ {:?}\"];\n",
                node.birth_value, node.birth_location
            ));
            if let (Some(parent), Some(mv)) = (node.parent, node.merge_value) {
                dot.push_str(&format!("  n{i} -> n{parent} [label=\"{mv:.4}\"];\n"));
            }
        }
        dot.push_str("}\n");
        write_atomic(path, dot.as_bytes())?;
    }
    Ok(())
}

pub fn cmd_figure_gaps(
    function: &str,
    lambda_range: &str,
    beta_range: &str,
    n: usize,
    outdir: &Path,
    stem: &str,
) -> Result<()> {
    let spec = config::build_function(function, 1, 0)?;
    let g = GridND::over(&spec, n).map_err(core_err)?;
    let lambdas = parse_range(lambda_range)?;
    let betas = parse_range(beta_range)?;
    let fig = figures::figure_gap_comparison(&spec, &g, &lambdas, &betas, outdir, stem)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({
            "points": fig.lambdas.len() + fig.betas.len(),
            "outdir": outdir.display().to_string(),
            "stem": stem,
        }))?
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// selftest: the quick closed-form oracle suite

pub fn cmd_selftest() -> i32 {
    let mut failures = 0;
    let mut check = |name: &str, ok: bool| {
        println!("{} {name}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            failures += 1;
        }
    };

    let ras = rsaa_core::functions::make_rastrigin_sep(2);
    check("separable rastrigin vanishes at the origin", ras.value(&[0.0, 0.0]) == Ok(0.0));
    let levy = rsaa_core::functions::make_levy2();
    check(
        "levy vanishes at (1,1)",
        levy.value(&[1.0, 1.0]).map(|v| v.abs() < 1e-14).unwrap_or(false),
    );
    let mr = rsaa_core::functions::make_modified_rastrigin(1);
    check(
        "modified rastrigin is -90 at zero (d=1)",
        mr.value(&[0.0]).map(|v| (v + 90.0).abs() < 1e-12).unwrap_or(false),
    );
    let bq = rsaa_core::functions::make_biquartic();
    let m = bq.minimizer.clone().unwrap();
    check("biquartic minimum value is zero", bq.value(&m.x).map(|v| v.abs() < 1e-13).unwrap_or(false));
    check("biquartic minimizer near -0.7", (m.x[0] + 0.7).abs() < 0.05);

    let g = GridND::line(0.0, std::f64::consts::PI, 511).unwrap();
    let lap = grid::build_laplacian(&g).unwrap();
    let sol = spectral::lowest_eigenpairs(&lap, 2, 1e-8).unwrap();
    check(
        "box laplacian lowest eigenvalues 1 and 4",
        (sol.values[0] - 1.0).abs() < 1e-2 && (sol.values[1] - 4.0).abs() < 4e-2,
    );

    let gh = GridND::line(-12.0, 12.0, 1023).unwrap();
    let sphere = rsaa_core::functions::make_sphere(1);
    let h = grid::build_hamiltonian(&gh, &sphere, 2.0).unwrap();
    let gap = spectral::spectral_gap(&h, 1e-7).unwrap().gap;
    check("harmonic oscillator gap 2λ at λ=2", (gap - 4.0).abs() / 4.0 < 5e-3);
    let h0 = grid::build_hamiltonian(&gh, &sphere, 0.0).unwrap();
    let lap_h = grid::build_laplacian(&gh).unwrap();
    let x: Vec<f64> = (0..gh.len()).map(|i| (i as f64 * 0.1).sin()).collect();
    let mut y0 = vec![0.0; gh.len()];
    let mut y1 = vec![0.0; gh.len()];
    h0.matvec(&x, &mut y0);
    lap_h.matvec(&x, &mut y1);
    check("λ=0 hamiltonian equals the laplacian", y0 == y1);

    let theta1 = adiabatic::adiabatic_theta(&[0.0, 0.5, 1.0], &[1.0, 1.0, 1.0], 1.0, 1.0, 0.2);
    check(
        "theta closed form 13 at unit inputs",
        theta1.map(|t| (t.theta - 13.0).abs() < 1e-12).unwrap_or(false),
    );
    let theta2 = adiabatic::adiabatic_theta(&[0.0, 0.5, 1.0], &[2.0, 2.0, 2.0], 1.0, 1.0, 0.2);
    check(
        "theta closed form 1.75 at gap two",
        theta2.map(|t| (t.theta - 1.75).abs() < 1e-12).unwrap_or(false),
    );
    let lam = adiabatic::required_lambda_max(1, 2.0, 0.1, 1.0);
    check(
        "λ_max rule max(113.137.., 12.649..)",
        lam.map(|v| (v - 113.13708498984761).abs() < 1e-9).unwrap_or(false),
    );
    let r = rsaa_core::classical::metropolis_ratio(0.7, 1.3)
        * rsaa_core::classical::metropolis_ratio(-0.7, 1.3);
    check("metropolis forward/backward ratios cancel", (r - 1.0).abs() < 1e-14);

    let dw = rsaa_core::functions::make_double_well();
    let pair = morse::sublevel_pairing(&dw, 4001);
    check(
        "double-well barrier is 1",
        pair.map(|(p, _)| (p.morse_barrier - 1.0).abs() < 1e-3).unwrap_or(false),
    );
    let flat = rsaa_core::functions::make_expression(
        "flat",
        1,
        vec![(-1.0, 3.0)],
        "x1*0 + 1",
        None,
    )
    .unwrap();
    let agmon0 = morse::agmon_distance_1d(&flat, 1.0, 0.0, 2.0, 64);
    let agmon2 = morse::agmon_distance_1d(&flat, 0.0, 0.0, 2.0, 64);
    check(
        "agmon distance closed forms 0 and 2",
        agmon0.map(|v| v.abs() < 1e-13).unwrap_or(false)
            && agmon2.map(|v| (v - 2.0).abs() < 1e-12).unwrap_or(false),
    );

    let gu = GridND::line(-2.0, 2.0, 511).unwrap();
    let state = WaveState::uniform(gu.len());
    let p = adiabatic::success_probability(&gu, &sphere, &state, 1.0, SuccessCriterion::Distance);
    check(
        "uniform state distance mass matches volume fraction",
        p.map(|v| (v - 0.5).abs() < 0.01).unwrap_or(false),
    );

    if failures == 0 {
        println!("selftest: all checks passed");
        0
    } else {
        println!("selftest: {failures} check(s) failed");
        1
    }
}
