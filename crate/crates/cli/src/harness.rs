//! Experiment orchestration: time-to-solution sweeps over (dimension,
//! algorithm, trial) cells with a bounded worker pool, deterministic
//! per-trial seeding, and CSV/JSON reporting.

use crate::config::{build_function, ExperimentPlan, RunnableAlgo};
use crate::output::{csv_bytes, fmt_f64, write_atomic};
use anyhow::{bail, Result};
use rsaa_core::classical::{self, RunParams, RunRecord};
use rsaa_core::functions::ObjectiveSpec;
use serde::Serialize;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

pub const SUMMARY_SCHEMA_VERSION: u32 = 1;

/// FNV-1a over the cell identity; stable across platforms and runs.
fn cell_hash(dim: usize, algo: &str, trial: usize) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |byte: u8| {
        h ^= byte as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    };
    for b in (dim as u64).to_le_bytes() {
        eat(b);
    }
    for b in algo.bytes() {
        eat(b);
    }
    for b in (trial as u64).to_le_bytes() {
        eat(b);
    }
    h
}

pub fn trial_seed(base: u64, dim: usize, algo: &str, trial: usize) -> u64 {
    base ^ cell_hash(dim, algo, trial)
}

/// One completed trial row.
#[derive(Debug, Clone, Serialize)]
pub struct TrialRow {
    pub dim: usize,
    pub algo: String,
    pub trial: usize,
    pub evals: u64,
    pub seconds: f64,
    pub success: bool,
    pub best_f: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CellSummary {
    pub dim: usize,
    pub algo: String,
    pub trials: usize,
    pub failures: usize,
    /// Median evals over successful trials; None marks an all-FAIL cell.
    pub median_evals: Option<f64>,
    pub median_seconds: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitLine {
    pub algo: String,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TtsSummary {
    pub schema_version: u32,
    pub experiment: String,
    pub base_seed: u64,
    pub rows: Vec<TrialRow>,
    pub cells: Vec<CellSummary>,
    /// log(median evals) against dimension per algorithm, when at least two
    /// cells succeeded.
    pub fits: Vec<FitLine>,
}

/// Worker-pool size: RSAA_THREADS when set, else the machine parallelism.
pub fn pool_size() -> usize {
    if let Ok(v) = std::env::var("RSAA_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            return n.max(1);
        }
    }
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

pub fn run_algorithm(
    spec: &ObjectiveSpec,
    algo: &RunnableAlgo,
    params: &RunParams,
    stop: classical::StopFlag<'_>,
) -> anyhow::Result<RunRecord> {
    let rec = match algo {
        RunnableAlgo::Langevin(cfg) => classical::run_langevin(spec, cfg, params, stop)?,
        RunnableAlgo::BasinHopping(cfg) => classical::run_basin_hopping(spec, cfg, params, stop)?,
        RunnableAlgo::SimulatedAnnealing(cfg) => {
            classical::run_simulated_annealing(spec, cfg, params, stop)?
        }
        RunnableAlgo::DifferentialEvolution(cfg) => {
            classical::run_differential_evolution(spec, cfg, params, stop)?
        }
        RunnableAlgo::ConvexityHoning(cfg) => {
            classical::run_convexity_honing(spec, cfg, params, stop)?
        }
        RunnableAlgo::Hessian(cfg) => classical::run_hessian_algorithm(spec, cfg, params, stop)?,
    };
    Ok(rec)
}

/// Run every (dim, algo, trial) cell of a plan concurrently; partial
/// failures are recorded, never abort the sweep.
pub fn run_tts(plan: &ExperimentPlan) -> Result<TtsSummary> {
    if plan.trials == 0 {
        bail!("plan needs at least one trial per cell");
    }
    if !plan.dims.windows(2).all(|w| w[0] < w[1]) {
        bail!("plan dimensions must be ascending");
    }
    struct Task {
        index: usize,
        dim: usize,
        algo_name: String,
        algo: RunnableAlgo,
        trial: usize,
        seed: u64,
    }
    let mut tasks = Vec::new();
    for &dim in &plan.dims {
        for algo in &plan.algorithms {
            let name = algo.name();
            let runnable = algo.build()?;
            for trial in 0..plan.trials {
                tasks.push(Task {
                    index: tasks.len(),
                    dim,
                    algo_name: name.to_string(),
                    algo: runnable.clone(),
                    trial,
                    seed: trial_seed(plan.base_seed, dim, name, trial),
                });
            }
        }
    }
    let results: Mutex<Vec<Option<TrialRow>>> = Mutex::new(vec![None; tasks.len()]);
    let next: AtomicUsize = AtomicUsize::new(0);
    let workers = pool_size().min(tasks.len().max(1));
    let timeout = Duration::from_secs_f64(plan.timeout_seconds);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= tasks.len() {
                    return;
                }
                let task = &tasks[i];
                let spec = match build_function(&plan.function, task.dim, plan.rotate_seed) {
                    Ok(s) => s,
                    Err(_) => return,
                };
                let f_star = spec.minimizer.as_ref().map(|m| m.value).unwrap_or(0.0);
                let params = RunParams::new(task.seed, plan.budget)
                    .with_target(f_star, plan.epsilon);
                let started = Instant::now();
                let stop_fn = move || started.elapsed() > timeout;
                let rec = run_algorithm(&spec, &task.algo, &params, Some(&stop_fn));
                let seconds = started.elapsed().as_secs_f64();
                let row = match rec {
                    Ok(r) => TrialRow {
                        dim: task.dim,
                        algo: task.algo_name.clone(),
                        trial: task.trial,
                        evals: r.evals,
                        seconds,
                        success: r.success,
                        best_f: r.best_f,
                        seed: task.seed,
                    },
                    Err(_) => TrialRow {
                        dim: task.dim,
                        algo: task.algo_name.clone(),
                        trial: task.trial,
                        evals: 0,
                        seconds,
                        success: false,
                        best_f: f64::NAN,
                        seed: task.seed,
                    },
                };
                results.lock().unwrap()[task.index] = Some(row);
            });
        }
    });
    let rows: Vec<TrialRow> =
        results.into_inner().unwrap().into_iter().map(|r| r.unwrap()).collect();

    // Per-cell medians over successful trials only.
    let mut cells = Vec::new();
    for &dim in &plan.dims {
        for algo in &plan.algorithms {
            let name = algo.name();
            let cell: Vec<&TrialRow> =
                rows.iter().filter(|r| r.dim == dim && r.algo == name).collect();
            let mut ev: Vec<f64> =
                cell.iter().filter(|r| r.success).map(|r| r.evals as f64).collect();
            let mut secs: Vec<f64> =
                cell.iter().filter(|r| r.success).map(|r| r.seconds).collect();
            ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
            secs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            cells.push(CellSummary {
                dim,
                algo: name.to_string(),
                trials: cell.len(),
                failures: cell.iter().filter(|r| !r.success).count(),
                median_evals: median(&ev),
                median_seconds: median(&secs),
            });
        }
    }
    // log-linear fit of median evals against dimension
    let mut fits = Vec::new();
    for algo in &plan.algorithms {
        let name = algo.name();
        let pts: Vec<(f64, f64)> = cells
            .iter()
            .filter(|c| c.algo == name)
            .filter_map(|c| c.median_evals.map(|m| (c.dim as f64, m.max(1.0).ln())))
            .collect();
        if pts.len() >= 2 {
            let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
            let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
            let (slope, intercept, r2) = rsaa_core::linalg::linear_fit(&xs, &ys);
            fits.push(FitLine { algo: name.to_string(), slope, intercept, r_squared: r2 });
        }
    }
    Ok(TtsSummary {
        schema_version: SUMMARY_SCHEMA_VERSION,
        experiment: plan.experiment.clone(),
        base_seed: plan.base_seed,
        rows,
        cells,
        fits,
    })
}

fn median(sorted: &[f64]) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let n = sorted.len();
    Some(if n % 2 == 1 { sorted[n / 2] } else { 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]) })
}

/// Raw trial CSV: one row per (dim, algo, trial).
pub fn write_trials_csv(path: &Path, summary: &TtsSummary) -> Result<()> {
    let header = ["dim", "algo", "trial", "evals", "seconds", "success"];
    let rows: Vec<Vec<String>> = summary
        .rows
        .iter()
        .map(|r| {
            vec![
                r.dim.to_string(),
                r.algo.clone(),
                r.trial.to_string(),
                r.evals.to_string(),
                fmt_f64(r.seconds),
                r.success.to_string(),
            ]
        })
        .collect();
    write_atomic(path, &csv_bytes(&header, &rows))
}

pub fn write_summary_json(path: &Path, summary: &TtsSummary) -> Result<()> {
    let bytes = serde_json::to_vec_pretty(summary)?;
    write_atomic(path, &bytes)
}

/// CSV body with the timing column blanked, for byte-identity comparisons
/// across reruns.
pub fn csv_without_timing(csv: &str) -> String {
    let mut out = String::new();
    for (i, line) in csv.lines().enumerate() {
        let cols: Vec<&str> = line.split(',').collect();
        for (j, c) in cols.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            if i > 0 && j == 4 {
                out.push('-');
            } else {
                out.push_str(c);
            }
        }
        out.push('\n');
    }
    out
}
