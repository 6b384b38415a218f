//! JSON configuration: experiment plans, algorithm parameter blocks, and
//! user-supplied expression objectives.

use anyhow::{anyhow, bail, Context, Result};
use rsaa_core::classical::{
    BasinHoppingConfig, ConvexityHoningConfig, DifferentialEvolutionConfig,
    HessianAlgorithmConfig, LangevinConfig, PopulationRule, SimulatedAnnealingConfig, Temperature,
};
use rsaa_core::functions::{self, Minimizer, ObjectiveSpec};
use serde::Deserialize;
use std::path::Path;

/// A TTS experiment: function family, dimensions, algorithms, trials.
#[derive(Debug, Clone, Deserialize)]
pub struct ExperimentPlan {
    pub experiment: String,
    pub function: String,
    pub dims: Vec<usize>,
    pub algorithms: Vec<AlgorithmSpec>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_timeout")]
    pub timeout_seconds: f64,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default = "default_budget")]
    pub budget: u64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// Haar-rotation seed for the `rotated-*` function families.
    #[serde(default)]
    pub rotate_seed: u64,
    #[serde(default = "default_outdir")]
    pub outdir: String,
}

fn default_trials() -> usize {
    5
}
fn default_timeout() -> f64 {
    600.0
}
fn default_budget() -> u64 {
    50_000_000
}
fn default_epsilon() -> f64 {
    1e-6
}
fn default_outdir() -> String {
    "out".into()
}

/// Algorithm selector with its parameter block; unset fields fall back to
/// the core defaults.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "algo", rename_all = "kebab-case")]
pub enum AlgorithmSpec {
    Langevin {
        eta: Option<f64>,
        beta: Option<f64>,
    },
    BasinHopping {
        step: Option<f64>,
        /// A number or the rule "1/d".
        temperature: Option<String>,
    },
    SimulatedAnnealing {
        t0: Option<f64>,
        cooling: Option<f64>,
        polish_every: Option<usize>,
    },
    DifferentialEvolution {
        /// "default" (15d), "paper-scale" (1000d), or a count.
        population: Option<String>,
        weight: Option<f64>,
        crossover: Option<f64>,
    },
    ConvexityHoning {
        beta_coefficient: Option<f64>,
        eta: Option<f64>,
        phase1_steps: Option<usize>,
        restarts: Option<usize>,
    },
    Hessian {
        max_block: Option<usize>,
        grid_resolution: Option<f64>,
        search_radius: Option<f64>,
    },
}

impl AlgorithmSpec {
    pub fn name(&self) -> &'static str {
        match self {
            AlgorithmSpec::Langevin { .. } => "langevin",
            AlgorithmSpec::BasinHopping { .. } => "basin-hopping",
            AlgorithmSpec::SimulatedAnnealing { .. } => "simulated-annealing",
            AlgorithmSpec::DifferentialEvolution { .. } => "differential-evolution",
            AlgorithmSpec::ConvexityHoning { .. } => "convexity-honing",
            AlgorithmSpec::Hessian { .. } => "hessian",
        }
    }

    pub fn build(&self) -> Result<RunnableAlgo> {
        Ok(match self {
            AlgorithmSpec::Langevin { eta, beta } => {
                let mut cfg = LangevinConfig::default();
                if let Some(v) = eta {
                    cfg.step_size = *v;
                }
                if let Some(v) = beta {
                    cfg.inverse_temperature = *v;
                }
                RunnableAlgo::Langevin(cfg)
            }
            AlgorithmSpec::BasinHopping { step, temperature } => {
                let mut cfg = BasinHoppingConfig::default();
                if let Some(v) = step {
                    cfg.hop_step = *v;
                }
                if let Some(t) = temperature {
                    cfg.temperature = parse_temperature(t)?;
                }
                RunnableAlgo::BasinHopping(cfg)
            }
            AlgorithmSpec::SimulatedAnnealing { t0, cooling, polish_every } => {
                let mut cfg = SimulatedAnnealingConfig::default();
                if let Some(v) = t0 {
                    cfg.initial_temperature = *v;
                }
                if let Some(v) = cooling {
                    cfg.cooling = *v;
                }
                if let Some(v) = polish_every {
                    cfg.polish_every = *v;
                }
                RunnableAlgo::SimulatedAnnealing(cfg)
            }
            AlgorithmSpec::DifferentialEvolution { population, weight, crossover } => {
                let mut cfg = DifferentialEvolutionConfig::default();
                if let Some(p) = population {
                    cfg.population = parse_population(p)?;
                }
                if let Some(v) = weight {
                    cfg.weight = *v;
                }
                if let Some(v) = crossover {
                    cfg.crossover = *v;
                }
                RunnableAlgo::DifferentialEvolution(cfg)
            }
            AlgorithmSpec::ConvexityHoning { beta_coefficient, eta, phase1_steps, restarts } => {
                let mut cfg = ConvexityHoningConfig::default();
                if let Some(v) = beta_coefficient {
                    cfg.beta_coefficient = *v;
                }
                if let Some(v) = eta {
                    cfg.step_size = *v;
                }
                if let Some(v) = phase1_steps {
                    cfg.phase1_steps = *v;
                }
                if let Some(v) = restarts {
                    cfg.restarts = *v;
                }
                RunnableAlgo::ConvexityHoning(cfg)
            }
            AlgorithmSpec::Hessian { max_block, grid_resolution, search_radius } => {
                let mut cfg = HessianAlgorithmConfig::default();
                if let Some(v) = max_block {
                    cfg.max_block = *v;
                }
                if let Some(v) = grid_resolution {
                    cfg.grid_resolution = *v;
                }
                if let Some(v) = search_radius {
                    cfg.search_radius = *v;
                }
                RunnableAlgo::Hessian(cfg)
            }
        })
    }
}

/// Built configs ready to hand to the core.
#[derive(Debug, Clone)]
pub enum RunnableAlgo {
    Langevin(LangevinConfig),
    BasinHopping(BasinHoppingConfig),
    SimulatedAnnealing(SimulatedAnnealingConfig),
    DifferentialEvolution(DifferentialEvolutionConfig),
    ConvexityHoning(ConvexityHoningConfig),
    Hessian(HessianAlgorithmConfig),
}

pub fn parse_temperature(text: &str) -> Result<Temperature> {
    let t = text.trim();
    if t == "1/d" {
        return Ok(Temperature::OverDimension);
    }
    t.parse::<f64>()
        .map(Temperature::Fixed)
        .map_err(|_| anyhow!("temperature must be a number or \"1/d\", got '{text}'"))
}

pub fn parse_population(text: &str) -> Result<PopulationRule> {
    match text.trim() {
        "default" => Ok(PopulationRule::Default),
        "paper-scale" => Ok(PopulationRule::PaperScale),
        other => other
            .parse::<usize>()
            .map(PopulationRule::Fixed)
            .map_err(|_| anyhow!("population must be a count, \"default\" or \"paper-scale\"")),
    }
}

/// Custom objective file: expression over x1..xd.
#[derive(Debug, Clone, Deserialize)]
pub struct CustomFunction {
    pub name: String,
    pub dim: usize,
    /// Per-axis [lower, upper].
    pub bounds: Vec<[f64; 2]>,
    pub expression: String,
    #[serde(default)]
    pub minimizer: Option<MinimizerJson>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct MinimizerJson {
    pub x: Vec<f64>,
    pub value: f64,
}

pub fn load_custom_function(path: &Path) -> Result<ObjectiveSpec> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let cf: CustomFunction =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let minimizer = cf.minimizer.map(|m| Minimizer { x: m.x, value: m.value });
    let bounds = cf.bounds.iter().map(|b| (b[0], b[1])).collect();
    functions::make_expression(&cf.name, cf.dim, bounds, &cf.expression, minimizer)
        .map_err(|e| anyhow!("{e}"))
}

pub fn load_plan(path: &Path) -> Result<ExperimentPlan> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let plan: ExperimentPlan =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(plan)
}

/// Resolve a function name (builtin, `rotated-biquartic`, or a path to a
/// custom-function JSON file) at a given dimension.
pub fn build_function(name: &str, dim: usize, rotate_seed: u64) -> Result<ObjectiveSpec> {
    if name == "rotated-biquartic" {
        let blocks: Vec<ObjectiveSpec> =
            (0..dim.max(1)).map(|_| functions::make_biquartic()).collect();
        return Ok(functions::compose_rotated_blocks(blocks, rotate_seed));
    }
    if let Some(spec) = functions::builtin(name, dim) {
        return Ok(spec);
    }
    let path = Path::new(name);
    if path.exists() {
        return load_custom_function(path);
    }
    bail!(
        "unknown function '{name}'; builtins: {}, rotated-biquartic, or a custom-function JSON path",
        functions::BUILTIN_NAMES.join(", ")
    )
}
