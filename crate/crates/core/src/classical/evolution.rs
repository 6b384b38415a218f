//! Differential evolution, DE/rand/1/bin.

use super::{uniform_in_box, Evaluator, RunParams, RunRecord, StopFlag};
use crate::error::Error;
use crate::functions::ObjectiveSpec;
use crate::Result;
use alloc::vec::Vec;
use rand::Rng;

/// Population sizing rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PopulationRule {
    /// 15·d, the usual practitioner default.
    Default,
    /// 1000·d, the scale the production benchmarks run at.
    PaperScale,
    Fixed(usize),
}

impl PopulationRule {
    fn size(&self, d: usize) -> usize {
        match self {
            PopulationRule::Default => 15 * d,
            PopulationRule::PaperScale => 1000 * d,
            PopulationRule::Fixed(n) => *n,
        }
        .max(4)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DifferentialEvolutionConfig {
    pub population: PopulationRule,
    /// Differential weight F.
    pub weight: f64,
    /// Crossover rate CR.
    pub crossover: f64,
}

impl Default for DifferentialEvolutionConfig {
    fn default() -> Self {
        DifferentialEvolutionConfig {
            population: PopulationRule::Default,
            weight: 0.8,
            crossover: 0.9,
        }
    }
}

/// DE/rand/1/bin: mutant `v = a + F(b - c)` over distinct random members,
/// binomial crossover with a forced coordinate, greedy selection.
pub fn run_differential_evolution(
    spec: &ObjectiveSpec,
    cfg: &DifferentialEvolutionConfig,
    params: &RunParams,
    stop: StopFlag<'_>,
) -> Result<RunRecord> {
    let d = spec.dim;
    let np = cfg.population.size(d);
    if !(cfg.weight >= 0.0) || !(0.0..=1.0).contains(&cfg.crossover) {
        return Err(Error::Invalid(alloc::string::String::from(
            "weight must be non-negative and crossover in [0,1]",
        )));
    }
    let mut rng = crate::rng::stream(params.seed);
    let mut ev = Evaluator::new(spec, params, stop);
    let bounds = spec.bounds().to_vec();
    let seed = params.seed;
    let mut pop: Vec<Vec<f64>> = (0..np).map(|_| uniform_in_box(&bounds, &mut rng)).collect();
    let mut fitness = Vec::with_capacity(np);
    for member in &pop {
        match ev.value(member) {
            Ok(v) => fitness.push(v),
            Err(Error::BudgetExhausted) => return Ok(ev.finish(seed)),
            Err(e) => return Err(e),
        }
    }
    let mut trial = alloc::vec![0.0; d];
    'outer: while !ev.done() {
        for i in 0..np {
            // three distinct members, none equal to i
            let mut pick = || loop {
                let j = rng.gen_range(0..np);
                if j != i {
                    return j;
                }
            };
            let a = pick();
            let b = loop {
                let j = pick();
                if j != a {
                    break j;
                }
            };
            let c = loop {
                let j = pick();
                if j != a && j != b {
                    break j;
                }
            };
            let forced = rng.gen_range(0..d);
            for k in 0..d {
                let mutate = k == forced || rng.gen::<f64>() < cfg.crossover;
                trial[k] = if mutate {
                    let v = pop[a][k] + cfg.weight * (pop[b][k] - pop[c][k]);
                    v.clamp(bounds[k].0, bounds[k].1)
                } else {
                    pop[i][k]
                };
            }
            let f_trial = match ev.value(&trial) {
                Ok(v) => v,
                Err(Error::BudgetExhausted) => break 'outer,
                Err(e) => return Err(e),
            };
            if f_trial <= fitness[i] {
                pop[i].copy_from_slice(&trial);
                fitness[i] = f_trial;
            }
            if ev.done() {
                break 'outer;
            }
        }
    }
    Ok(ev.finish(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::make_sphere;

    #[test]
    fn de_solves_sphere() {
        let spec = make_sphere(5);
        let cfg = DifferentialEvolutionConfig {
            population: PopulationRule::Fixed(75),
            ..Default::default()
        };
        let params = RunParams::new(7, 200_000).with_target(0.0, 1e-6);
        let rec = run_differential_evolution(&spec, &cfg, &params, None).unwrap();
        assert!(rec.success, "best_f = {}", rec.best_f);
    }

    #[test]
    fn degenerate_population_is_a_fixed_point() {
        // All members identical and F = 0: mutation and crossover reproduce
        // the same point, so the best value never changes.
        let spec = make_sphere(2);
        let cfg = DifferentialEvolutionConfig {
            population: PopulationRule::Fixed(6),
            weight: 0.0,
            crossover: 1.0,
        };
        // seed the population collapse by running two generations from a
        // fresh start and checking the population never improves past the
        // best initial member
        let params = RunParams::new(13, 60);
        let rec = run_differential_evolution(&spec, &cfg, &params, None).unwrap();
        // with F = 0 every trial equals member `a`, so the best value can
        // only be one of the initial members' values
        let mut rng = crate::rng::stream(13);
        let bounds = spec.bounds().to_vec();
        let initial: Vec<f64> = (0..6)
            .map(|_| spec.value(&super::uniform_in_box(&bounds, &mut rng)).unwrap())
            .collect();
        let best_initial = initial.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!((rec.best_f - best_initial).abs() <= 1e-12);
    }

    #[test]
    fn paper_scale_population_rule() {
        assert_eq!(PopulationRule::PaperScale.size(4), 4000);
        assert_eq!(PopulationRule::Default.size(4), 60);
    }
}
