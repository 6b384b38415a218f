//! `rsaa`: spectra, gap sweeps, potential surfaces, annealing runs,
//! classical optimizer benchmarks, landscape analysis, and the quick oracle
//! selftest.

use clap::{Parser, Subcommand};
use rsaa_cli::{commands, config};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "rsaa", version, about = "Schrodinger-operator annealing lab and classical optimizer benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lowest eigenpairs of a grid operator.
    Spectrum {
        #[arg(long)]
        function: String,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        rotate_seed: u64,
        /// laplacian | schrodinger | witten
        #[arg(long, default_value = "schrodinger")]
        operator: String,
        /// λ for schrodinger, β for witten; ignored for laplacian.
        #[arg(long, default_value_t = 1.0)]
        param: f64,
        /// Interior grid points per axis.
        #[arg(long, default_value_t = 1023)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        /// Dump the operator as a binary triplet file.
        #[arg(long)]
        dump_operator: Option<PathBuf>,
    },
    /// Gap against λ (schrodinger) or β (witten), CSV to stdout or --out.
    GapSweep {
        #[arg(long)]
        function: String,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        rotate_seed: u64,
        /// schrodinger | witten
        #[arg(long, default_value = "schrodinger")]
        operator: String,
        /// λ range start:end:count
        #[arg(long)]
        lambda: Option<String>,
        /// β range start:end:count
        #[arg(long)]
        beta: Option<String>,
        /// raw | rescaled
        #[arg(long, default_value = "raw")]
        scaling: String,
        #[arg(long, default_value_t = 2047)]
        n: usize,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// 2D objective / ground-state / WKB potential surfaces with cluster
    /// counts.
    Potentials {
        #[arg(long)]
        function: String,
        #[arg(long, default_value_t = 255)]
        n: usize,
        #[arg(long, default_value_t = 5.0)]
        lambda: f64,
        #[arg(long, default_value_t = 5.0)]
        beta: f64,
        #[arg(long, default_value = "out")]
        outdir: PathBuf,
        #[arg(long, default_value = "potentials")]
        stem: String,
    },
    /// Gap-comparison figure: rescaled Schrodinger and Witten sweeps.
    FigureGaps {
        #[arg(long)]
        function: String,
        #[arg(long, default_value = "0.5:32:24")]
        lambda: String,
        #[arg(long, default_value = "2:12:21")]
        beta: String,
        #[arg(long, default_value_t = 2047)]
        n: usize,
        #[arg(long, default_value = "out")]
        outdir: PathBuf,
        #[arg(long, default_value = "gap-comparison")]
        stem: String,
    },
    /// Real-space adiabatic annealing end to end.
    Anneal {
        #[arg(long)]
        function: String,
        #[arg(long, default_value_t = 2047)]
        n: usize,
        /// number | auto (formula; needs --hessian-bound and --radius) |
        /// empirical (tail-bound ladder)
        #[arg(long, default_value = "empirical")]
        lambda_max: String,
        #[arg(long)]
        hessian_bound: Option<f64>,
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        /// value | distance
        #[arg(long, default_value = "value")]
        criterion: String,
        /// number | auto (θ/ρ, clamped to --t-cap) | ladder
        #[arg(long, default_value = "ladder")]
        t: String,
        #[arg(long, default_value_t = 0.2)]
        rho: f64,
        #[arg(long, default_value_t = 2e4)]
        t_cap: f64,
        #[arg(long, default_value_t = 250.0)]
        t_start: f64,
        #[arg(long, default_value_t = 0.9)]
        overlap_target: f64,
        /// Override the substep count (default: Gershgorin rule).
        #[arg(long)]
        steps: Option<usize>,
        /// Override the substep size instead.
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long, default_value_t = 32)]
        gap_samples: usize,
        #[arg(long)]
        checkpoint_csv: Option<PathBuf>,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
    /// One classical optimizer, one function, JSON record per trial.
    Opt {
        /// langevin | basin-hopping | simulated-annealing |
        /// differential-evolution | convexity-honing | hessian
        #[arg(long)]
        algo: String,
        #[arg(long)]
        function: String,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        rotate_seed: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 600.0)]
        timeout: f64,
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        /// Basin-hopping step δ.
        #[arg(long)]
        step: Option<f64>,
        /// Metropolis temperature, a number or "1/d".
        #[arg(long)]
        temperature: Option<String>,
        #[arg(long)]
        t0: Option<f64>,
        #[arg(long)]
        cooling: Option<f64>,
        /// DE population: count, "default" or "paper-scale".
        #[arg(long)]
        population: Option<String>,
        #[arg(long)]
        weight: Option<f64>,
        #[arg(long)]
        crossover: Option<f64>,
    },
    /// Time-to-solution sweep from a JSON plan.
    Tts {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        outdir: Option<PathBuf>,
    },
    /// Sublevel critical-point pairing report.
    Morse {
        #[arg(long)]
        function: String,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, default_value_t = 200_001)]
        resolution: usize,
        #[arg(long)]
        json_out: Option<PathBuf>,
        /// Merge-tree DOT file.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Quick closed-form oracle suite; exit 1 on any failure.
    Selftest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Spectrum {
            function,
            dim,
            rotate_seed,
            operator,
            param,
            n,
            k,
            tol,
            dump_operator,
        } => commands::cmd_spectrum(
            function,
            *dim,
            *rotate_seed,
            operator,
            *param,
            *n,
            *k,
            *tol,
            dump_operator.as_deref(),
        ),
        Command::GapSweep {
            function,
            dim,
            rotate_seed,
            operator,
            lambda,
            beta,
            scaling,
            n,
            tol,
            out,
        } => commands::cmd_gap_sweep(
            function,
            *dim,
            *rotate_seed,
            operator,
            lambda.as_deref(),
            beta.as_deref(),
            scaling,
            *n,
            *tol,
            out.as_deref(),
        ),
        Command::Potentials { function, n, lambda, beta, outdir, stem } => {
            commands::cmd_potentials(function, *n, *lambda, *beta, outdir, stem)
        }
        Command::FigureGaps { function, lambda, beta, n, outdir, stem } => {
            commands::cmd_figure_gaps(function, lambda, beta, *n, outdir, stem)
        }
        Command::Anneal {
            function,
            n,
            lambda_max,
            hessian_bound,
            radius,
            eps,
            criterion,
            t,
            rho,
            t_cap,
            t_start,
            overlap_target,
            steps,
            dt,
            gap_samples,
            checkpoint_csv,
            json_out,
        } => commands::cmd_anneal(&commands::AnnealArgs {
            function,
            n: *n,
            lambda_max,
            hessian_bound: *hessian_bound,
            radius: *radius,
            eps: *eps,
            criterion,
            t,
            rho: *rho,
            t_cap: *t_cap,
            t_start: *t_start,
            overlap_target: *overlap_target,
            steps: *steps,
            dt: *dt,
            gap_samples: *gap_samples,
            checkpoint_csv: checkpoint_csv.clone(),
            json_out: json_out.clone(),
        }),
        Command::Opt {
            algo,
            function,
            dim,
            rotate_seed,
            seed,
            budget,
            timeout,
            eps,
            trials,
            eta,
            beta,
            step,
            temperature,
            t0,
            cooling,
            population,
            weight,
            crossover,
        } => build_opt_algo(
            algo,
            *eta,
            *beta,
            *step,
            temperature.as_deref(),
            *t0,
            *cooling,
            population.as_deref(),
            *weight,
            *crossover,
        )
        .and_then(|runnable| {
            commands::cmd_opt(
                &runnable, function, *dim, *rotate_seed, *seed, *budget, *timeout, *eps, *trials,
            )
        }),
        Command::Tts { config, outdir } => commands::cmd_tts(config, outdir.as_deref()),
        Command::Morse { function, dim, resolution, json_out, dot } => {
            commands::cmd_morse(function, *dim, *resolution, json_out.as_deref(), dot.as_deref())
        }
        Command::Selftest => {
            return ExitCode::from(commands::cmd_selftest() as u8);
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn build_opt_algo(
    algo: &str,
    eta: Option<f64>,
    beta: Option<f64>,
    step: Option<f64>,
    temperature: Option<&str>,
    t0: Option<f64>,
    cooling: Option<f64>,
    population: Option<&str>,
    weight: Option<f64>,
    crossover: Option<f64>,
) -> anyhow::Result<config::RunnableAlgo> {
    let spec = match algo {
        "langevin" => config::AlgorithmSpec::Langevin { eta, beta },
        "basin-hopping" => config::AlgorithmSpec::BasinHopping {
            step,
            temperature: temperature.map(|s| s.to_string()),
        },
        "simulated-annealing" => config::AlgorithmSpec::SimulatedAnnealing {
            t0,
            cooling,
            polish_every: None,
        },
        "differential-evolution" => config::AlgorithmSpec::DifferentialEvolution {
            population: population.map(|s| s.to_string()),
            weight,
            crossover,
        },
        "convexity-honing" => config::AlgorithmSpec::ConvexityHoning {
            beta_coefficient: None,
            eta,
            phase1_steps: None,
            restarts: None,
        },
        "hessian" => config::AlgorithmSpec::Hessian {
            max_block: None,
            grid_resolution: None,
            search_radius: None,
        },
        other => anyhow::bail!(
            "unknown algorithm '{other}'; expected langevin, basin-hopping, \
             simulated-annealing, differential-evolution, convexity-honing or hessian"
        ),
    };
    spec.build()
}
