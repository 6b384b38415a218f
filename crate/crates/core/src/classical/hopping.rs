//! Basin hopping and the geometric-cooling simulated-annealing stand-in.

#[cfg(not(feature = "std"))]
use crate::fx::F64Ext;

use super::{
    lbfgs, metropolis_ratio, reflect_into, uniform_in_box, Evaluator, RunParams, RunRecord,
    StopFlag,
};
use crate::error::Error;
use crate::functions::ObjectiveSpec;
use crate::Result;
use alloc::vec::Vec;
use rand::Rng;

/// Metropolis temperature rule for basin hopping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Temperature {
    Fixed(f64),
    /// `T = 1/d`, the rule that funnels hypercube-of-wells landscapes.
    OverDimension,
}

impl Temperature {
    fn value(&self, d: usize) -> f64 {
        match self {
            Temperature::Fixed(t) => *t,
            Temperature::OverDimension => 1.0 / d as f64,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BasinHoppingConfig {
    /// Uniform proposal half-width δ.
    pub hop_step: f64,
    pub temperature: Temperature,
    /// Projected-gradient tolerance of the inner minimizer.
    pub local_tol: f64,
    /// Iteration cap of each inner minimization.
    pub local_iters: usize,
    /// Optional fixed start; otherwise uniform in the box from the seed.
    pub start: Option<Vec<f64>>,
}

impl Default for BasinHoppingConfig {
    fn default() -> Self {
        BasinHoppingConfig {
            hop_step: 1.0,
            temperature: Temperature::Fixed(1.0),
            local_tol: 1e-8,
            local_iters: 200,
            start: None,
        }
    }
}

/// Uniform hop, local minimization, Metropolis accept/reject; the target is
/// checked after every iteration so time-to-solution is exact.
pub fn run_basin_hopping(
    spec: &ObjectiveSpec,
    cfg: &BasinHoppingConfig,
    params: &RunParams,
    stop: StopFlag<'_>,
) -> Result<RunRecord> {
    if !(cfg.hop_step > 0.0) {
        return Err(Error::Invalid(alloc::string::String::from("hop step must be positive")));
    }
    let temp = cfg.temperature.value(spec.dim);
    if temp < 0.0 {
        return Err(Error::Invalid(alloc::string::String::from(
            "temperature must be non-negative",
        )));
    }
    let mut rng = crate::rng::stream(params.seed);
    let mut ev = Evaluator::new(spec, params, stop);
    let bounds = spec.bounds().to_vec();
    let start = match &cfg.start {
        Some(v) => v.clone(),
        None => uniform_in_box(&bounds, &mut rng),
    };
    let seed = params.seed;
    // descend into the first basin
    let (mut x_cur, mut f_cur) = match lbfgs(&mut ev, start, cfg.local_tol, cfg.local_iters) {
        Ok((x, f, _)) => (x, f),
        Err(Error::BudgetExhausted) => return Ok(ev.finish(seed)),
        Err(e) => return Err(e),
    };
    while !ev.done() {
        let mut proposal = x_cur.clone();
        for v in proposal.iter_mut() {
            *v += cfg.hop_step * (2.0 * rng.gen::<f64>() - 1.0);
        }
        reflect_into(&mut proposal, &bounds);
        let (x_new, f_new) = match lbfgs(&mut ev, proposal, cfg.local_tol, cfg.local_iters) {
            Ok((x, f, _)) => (x, f),
            Err(Error::BudgetExhausted) => break,
            Err(e) => return Err(e),
        };
        let accept = if f_new <= f_cur {
            true
        } else {
            rng.gen::<f64>() < metropolis_ratio(f_new - f_cur, temp)
        };
        if accept {
            x_cur = x_new;
            f_cur = f_new;
        }
    }
    Ok(ev.finish(seed))
}

#[derive(Debug, Clone)]
pub struct SimulatedAnnealingConfig {
    pub initial_temperature: f64,
    /// Geometric cooling factor per iteration, in (0, 1).
    pub cooling: f64,
    /// Proposal scale multiplying the Cauchy step at unit relative
    /// temperature.
    pub proposal_scale: f64,
    /// Run the local minimizer after every K accepted moves (0 = never).
    pub polish_every: usize,
    pub local_tol: f64,
    pub local_iters: usize,
    pub start: Option<Vec<f64>>,
}

impl Default for SimulatedAnnealingConfig {
    fn default() -> Self {
        SimulatedAnnealingConfig {
            initial_temperature: 10.0,
            cooling: 0.999,
            proposal_scale: 1.0,
            polish_every: 20,
            local_tol: 1e-8,
            local_iters: 100,
            start: None,
        }
    }
}

/// Metropolis walk under geometric cooling with heavy-tailed (Cauchy)
/// proposals and periodic local polish. The production benchmarks in the
/// literature run library dual-annealing implementations with unstated
/// internals; this stand-in pins every rule down so runs are reproducible.
pub fn run_simulated_annealing(
    spec: &ObjectiveSpec,
    cfg: &SimulatedAnnealingConfig,
    params: &RunParams,
    stop: StopFlag<'_>,
) -> Result<RunRecord> {
    if !(0.0..1.0).contains(&cfg.cooling) {
        return Err(Error::Invalid(alloc::string::String::from("cooling must be in (0,1)")));
    }
    if cfg.initial_temperature < 0.0 {
        return Err(Error::Invalid(alloc::string::String::from(
            "initial temperature must be non-negative",
        )));
    }
    let mut rng = crate::rng::stream(params.seed);
    let mut ev = Evaluator::new(spec, params, stop);
    let bounds = spec.bounds().to_vec();
    let seed = params.seed;
    let mut x = match &cfg.start {
        Some(v) => v.clone(),
        None => uniform_in_box(&bounds, &mut rng),
    };
    let mut f = match ev.value(&x) {
        Ok(v) => v,
        Err(Error::BudgetExhausted) => return Ok(ev.finish(seed)),
        Err(e) => return Err(e),
    };
    let t0 = cfg.initial_temperature;
    let mut temp = t0;
    let mut accepted = 0usize;
    while !ev.done() {
        // Cauchy proposal scaled by the relative temperature; at T = 0 the
        // walk degenerates to descent-with-restarts through the polish.
        let rel = if t0 > 0.0 { temp / t0 } else { 1.0 };
        let scale = cfg.proposal_scale * rel.max(1e-6);
        let mut proposal = x.clone();
        for v in proposal.iter_mut() {
            *v += scale * crate::rng::standard_cauchy(&mut rng);
        }
        reflect_into(&mut proposal, &bounds);
        let f_new = match ev.value(&proposal) {
            Ok(v) => v,
            Err(Error::BudgetExhausted) => break,
            Err(e) => return Err(e),
        };
        let accept = if f_new <= f {
            true
        } else {
            rng.gen::<f64>() < metropolis_ratio(f_new - f, temp)
        };
        if accept {
            x = proposal;
            f = f_new;
            accepted += 1;
            if cfg.polish_every > 0 && accepted % cfg.polish_every == 0 {
                match lbfgs(&mut ev, x.clone(), cfg.local_tol, cfg.local_iters) {
                    Ok((px, pf, _)) => {
                        if pf < f {
                            x = px;
                            f = pf;
                        }
                    }
                    Err(Error::BudgetExhausted) => break,
                    Err(e) => return Err(e),
                }
            }
        }
        temp *= cfg.cooling;
    }
    Ok(ev.finish(seed))
}
