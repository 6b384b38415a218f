//! The classical-competitor suite: unadjusted Langevin dynamics, basin
//! hopping, simulated annealing, differential evolution, the two
//! structure-aware algorithms (convexity honing and Hessian block recovery),
//! and the shared quasi-Newton local minimizer.
//!
//! Every run is driven by a 64-bit seed through ChaCha8 and is bit
//! reproducible; timeouts are cooperative through a caller-supplied stop
//! flag polled between evaluations.

mod evolution;
mod hopping;
mod structure;

pub use evolution::{run_differential_evolution, DifferentialEvolutionConfig, PopulationRule};
pub use hopping::{
    run_basin_hopping, run_simulated_annealing, BasinHoppingConfig, SimulatedAnnealingConfig,
    Temperature,
};
pub use structure::{
    run_convexity_honing, run_hessian_algorithm, ConvexityHoningConfig, HessianAlgorithmConfig,
};

#[cfg(not(feature = "std"))]
use crate::fx::F64Ext;

use crate::error::Error;
use crate::functions::ObjectiveSpec;
use crate::linalg;
use crate::rng::ChaCha8Rng;
use crate::Result;
use alloc::vec;
use alloc::vec::Vec;
use rand::Rng;

/// Success target: stop once `f ≤ f* + ε`.
#[derive(Debug, Clone, Copy)]
pub struct Target {
    pub f_star: f64,
    pub epsilon: f64,
}

/// Budget and identity shared by every optimizer run.
#[derive(Debug, Clone, Copy)]
pub struct RunParams {
    pub seed: u64,
    /// Cap on objective evaluations (gradients count as one each).
    pub max_evals: u64,
    pub target: Option<Target>,
}

impl RunParams {
    pub fn new(seed: u64, max_evals: u64) -> Self {
        RunParams { seed, max_evals, target: None }
    }

    pub fn with_target(mut self, f_star: f64, epsilon: f64) -> Self {
        self.target = Some(Target { f_star, epsilon });
        self
    }
}

/// Cooperative stop flag (deadlines live in the caller; the core never
/// touches a clock).
pub type StopFlag<'a> = Option<&'a dyn Fn() -> bool>;

/// One optimizer trial. `wall_time` is filled by callers that own a clock.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub best_x: Vec<f64>,
    pub best_f: f64,
    pub evals: u64,
    pub success: bool,
    pub wall_time: f64,
    pub seed: u64,
    /// Thinned visited points (eval count when recorded, position).
    pub trajectory: Option<Vec<(u64, Vec<f64>)>>,
}

/// Evaluation wrapper: counts work, tracks the running best over every
/// evaluation performed, watches the target and the stop flag.
pub(crate) struct Evaluator<'a> {
    spec: &'a ObjectiveSpec,
    pub evals: u64,
    max_evals: u64,
    target: Option<Target>,
    stop: StopFlag<'a>,
    pub best_f: f64,
    pub best_x: Vec<f64>,
    pub target_hit: bool,
    stopped: bool,
}

impl<'a> Evaluator<'a> {
    pub fn new(spec: &'a ObjectiveSpec, params: &RunParams, stop: StopFlag<'a>) -> Self {
        Evaluator {
            spec,
            evals: 0,
            max_evals: params.max_evals,
            target: params.target,
            stop,
            best_f: f64::INFINITY,
            best_x: vec![f64::NAN; spec.dim],
            target_hit: false,
            stopped: false,
        }
    }

    fn bump(&mut self) -> Result<()> {
        if self.evals >= self.max_evals {
            return Err(Error::BudgetExhausted);
        }
        self.evals += 1;
        if self.evals % 256 == 0 {
            if let Some(stop) = self.stop {
                if stop() {
                    self.stopped = true;
                    return Err(Error::BudgetExhausted);
                }
            }
        }
        Ok(())
    }

    pub fn value(&mut self, x: &[f64]) -> Result<f64> {
        self.bump()?;
        let v = self.spec.value(x)?;
        if v < self.best_f {
            self.best_f = v;
            self.best_x.clear();
            self.best_x.extend_from_slice(x);
            if let Some(t) = self.target {
                if v <= t.f_star + t.epsilon {
                    self.target_hit = true;
                }
            }
        }
        Ok(v)
    }

    pub fn gradient(&mut self, x: &[f64]) -> Result<Vec<f64>> {
        self.bump()?;
        self.spec.gradient(x)
    }

    pub fn done(&self) -> bool {
        self.target_hit || self.evals >= self.max_evals || self.stopped
    }

    fn finish(self, seed: u64) -> RunRecord {
        let success = self.target_hit;
        RunRecord {
            best_x: self.best_x,
            best_f: self.best_f,
            evals: self.evals,
            success,
            wall_time: 0.0,
            seed,
            trajectory: None,
        }
    }
}

/// Metropolis acceptance ratio `exp(-Δf / T)`; the acceptance probability is
/// its clamp to [0, 1], and forward/backward ratios multiply to one
/// (detailed balance).
pub fn metropolis_ratio(delta_f: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return if delta_f <= 0.0 { 1.0 } else { 0.0 };
    }
    (-delta_f / temperature).exp()
}

/// Reflect a point into the box (samplers); repeated folds handle proposals
/// that overshoot by more than one width.
pub fn reflect_into(x: &mut [f64], bounds: &[(f64, f64)]) {
    for (v, (lo, hi)) in x.iter_mut().zip(bounds) {
        let w = hi - lo;
        if w <= 0.0 {
            continue;
        }
        let mut t = (*v - lo) % (2.0 * w);
        if t < 0.0 {
            t += 2.0 * w;
        }
        *v = if t <= w { lo + t } else { lo + 2.0 * w - t };
    }
}

/// Clamp a point into the box (descent methods).
pub fn project_into(x: &mut [f64], bounds: &[(f64, f64)]) {
    for (v, (lo, hi)) in x.iter_mut().zip(bounds) {
        *v = v.clamp(*lo, *hi);
    }
}

fn uniform_in_box<R: Rng>(bounds: &[(f64, f64)], rng: &mut R) -> Vec<f64> {
    bounds.iter().map(|(lo, hi)| lo + (hi - lo) * rng.gen::<f64>()).collect()
}

// ---------------------------------------------------------------------------
// local minimizer

#[derive(Debug, Clone)]
pub struct LocalMinResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: u64,
    pub converged: bool,
}

/// Limited-memory quasi-Newton descent with backtracking line search and box
/// projection; stops at projected-gradient norm ≤ tol.
pub fn local_minimize(
    spec: &ObjectiveSpec,
    x0: &[f64],
    tol: f64,
    max_iters: usize,
) -> Result<LocalMinResult> {
    if !spec.contains(x0) {
        return Err(Error::Invalid(alloc::string::String::from("start point outside the box")));
    }
    let params = RunParams::new(0, u64::MAX);
    let mut ev = Evaluator::new(spec, &params, None);
    let (x, f, converged) = lbfgs(&mut ev, x0.to_vec(), tol, max_iters)?;
    Ok(LocalMinResult { x, f, evals: ev.evals, converged })
}

/// L-BFGS core shared by the global methods; memory 8, Armijo backtracking.
pub(crate) fn lbfgs(
    ev: &mut Evaluator<'_>,
    mut x: Vec<f64>,
    tol: f64,
    max_iters: usize,
) -> Result<(Vec<f64>, f64, bool)> {
    const MEMORY: usize = 8;
    let bounds: Vec<(f64, f64)> = ev.spec.bounds().to_vec();
    let d = x.len();
    let mut f = ev.value(&x)?;
    let mut g = ev.gradient(&x)?;
    let mut s_hist: Vec<Vec<f64>> = Vec::new();
    let mut y_hist: Vec<Vec<f64>> = Vec::new();
    let mut rho_hist: Vec<f64> = Vec::new();
    for _iter in 0..max_iters {
        // projected gradient for the convergence test
        let mut pg_norm2 = 0.0;
        for i in 0..d {
            let at_lo = x[i] <= bounds[i].0 && g[i] > 0.0;
            let at_hi = x[i] >= bounds[i].1 && g[i] < 0.0;
            if !(at_lo || at_hi) {
                pg_norm2 += g[i] * g[i];
            }
        }
        if pg_norm2.sqrt() <= tol {
            return Ok((x, f, true));
        }
        // two-loop recursion
        let mut q = g.clone();
        let mut alphas = vec![0.0; s_hist.len()];
        for i in (0..s_hist.len()).rev() {
            let a = rho_hist[i] * linalg::dot(&s_hist[i], &q);
            alphas[i] = a;
            linalg::axpy(-a, &y_hist[i], &mut q);
        }
        if let (Some(s), Some(y)) = (s_hist.last(), y_hist.last()) {
            let gamma = linalg::dot(s, y) / linalg::dot(y, y).max(1e-300);
            linalg::scale(gamma, &mut q);
        }
        for i in 0..s_hist.len() {
            let b = rho_hist[i] * linalg::dot(&y_hist[i], &q);
            linalg::axpy(alphas[i] - b, &s_hist[i], &mut q);
        }
        // q approximates H^{-1} g; descend along -q with a fallback to -g
        let mut dir: Vec<f64> = q.iter().map(|v| -v).collect();
        if linalg::dot(&dir, &g) >= 0.0 {
            dir = g.iter().map(|v| -v).collect();
        }
        // Armijo backtracking with projection
        let g_dot_d = linalg::dot(&g, &dir);
        let mut step = 1.0;
        let mut accepted = false;
        let mut x_new = x.clone();
        let mut f_new = f;
        for _bt in 0..40 {
            for i in 0..d {
                x_new[i] = x[i] + step * dir[i];
            }
            project_into(&mut x_new, &bounds);
            f_new = ev.value(&x_new)?;
            if f_new <= f + 1e-4 * step * g_dot_d {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted || f_new >= f {
            // line search stalled: either converged in a corner or the
            // model broke down
            return Ok((x, f, pg_norm2.sqrt() <= tol * 10.0));
        }
        let g_new = ev.gradient(&x_new)?;
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = linalg::dot(&s, &y);
        if sy > 1e-10 * linalg::norm2(&s) * linalg::norm2(&y) {
            if s_hist.len() == MEMORY {
                s_hist.remove(0);
                y_hist.remove(0);
                rho_hist.remove(0);
            }
            rho_hist.push(1.0 / sy);
            s_hist.push(s);
            y_hist.push(y);
        }
        x = x_new;
        f = f_new;
        g = g_new;
        if ev.target_hit {
            return Ok((x, f, true));
        }
    }
    Ok((x, f, false))
}

// ---------------------------------------------------------------------------
// Langevin / SGD

/// Unadjusted Langevin iteration `x ← x - η∇f + sqrt(2η/β) ξ`, the
/// discretization whose stationary measure is ∝ e^{-βf}; β = ∞ turns the
/// noise off and leaves plain gradient descent. The paper's `s`-noise form
/// maps onto this with `s = 2/β`.
#[derive(Debug, Clone)]
pub struct LangevinConfig {
    pub step_size: f64,
    pub inverse_temperature: f64,
    /// Optional fixed start; otherwise uniform in the box from the seed.
    pub start: Option<Vec<f64>>,
    /// Record every k-th iterate into the trajectory (0 = none).
    pub thin: usize,
}

impl Default for LangevinConfig {
    fn default() -> Self {
        LangevinConfig { step_size: 1e-3, inverse_temperature: 10.0, start: None, thin: 0 }
    }
}

pub fn run_langevin(
    spec: &ObjectiveSpec,
    cfg: &LangevinConfig,
    params: &RunParams,
    stop: StopFlag<'_>,
) -> Result<RunRecord> {
    if !(cfg.step_size > 0.0) || !(cfg.inverse_temperature > 0.0) {
        return Err(Error::Invalid(alloc::string::String::from(
            "step size and inverse temperature must be positive",
        )));
    }
    let mut rng = crate::rng::stream(params.seed);
    let mut ev = Evaluator::new(spec, params, stop);
    let bounds = spec.bounds().to_vec();
    let mut x = match &cfg.start {
        Some(v) => v.clone(),
        None => uniform_in_box(&bounds, &mut rng),
    };
    let noise_scale = if cfg.inverse_temperature.is_finite() {
        (2.0 * cfg.step_size / cfg.inverse_temperature).sqrt()
    } else {
        0.0
    };
    let mut trajectory = (cfg.thin > 0).then(Vec::new);
    let mut iter = 0u64;
    loop {
        match langevin_iteration(&mut ev, &mut x, cfg.step_size, noise_scale, &bounds, &mut rng) {
            Ok(()) => {}
            Err(Error::BudgetExhausted) => break,
            Err(e) => return Err(e),
        }
        iter += 1;
        if let Some(t) = trajectory.as_mut() {
            if iter % cfg.thin as u64 == 0 {
                t.push((ev.evals, x.clone()));
            }
        }
        if ev.done() {
            break;
        }
    }
    let seed = params.seed;
    let mut rec = ev.finish(seed);
    rec.trajectory = trajectory;
    Ok(rec)
}

fn langevin_iteration(
    ev: &mut Evaluator<'_>,
    x: &mut Vec<f64>,
    eta: f64,
    noise_scale: f64,
    bounds: &[(f64, f64)],
    rng: &mut ChaCha8Rng,
) -> Result<()> {
    let _ = ev.value(x)?; // tracks best over every visited point
    let g = ev.gradient(x)?;
    for i in 0..x.len() {
        let xi = crate::rng::standard_normal(rng);
        x[i] += -eta * g[i] + noise_scale * xi;
    }
    reflect_into(x, bounds);
    Ok(())
}

/// Deterministic Langevin path under injected noise vectors; the raw update
/// rule exposed for equivariance checks and diagnostics.
pub fn langevin_path(
    spec: &ObjectiveSpec,
    x0: &[f64],
    eta: f64,
    beta: f64,
    noise: &[Vec<f64>],
) -> Result<Vec<Vec<f64>>> {
    let noise_scale = if beta.is_finite() { (2.0 * eta / beta).sqrt() } else { 0.0 };
    let mut x = x0.to_vec();
    let mut path = Vec::with_capacity(noise.len() + 1);
    path.push(x.clone());
    for xi in noise {
        let g = spec.gradient(&x)?;
        for i in 0..x.len() {
            x[i] += -eta * g[i] + noise_scale * xi[i];
        }
        path.push(x.clone());
    }
    Ok(path)
}
