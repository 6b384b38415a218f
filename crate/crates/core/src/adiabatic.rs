//! Desk-scale real-space adiabatic annealing: Crank-Nicolson propagation of
//! the rescaled Schrodinger evolution `(1/T) i ∂ₛΦ = H(s)Φ` with the linear
//! schedule `H(s) = -Δ + (λ_max² s) f`, success-probability measurement, and
//! the runtime/parameter formulas (θ functional, λ_max rule).

#[cfg(not(feature = "std"))]
use crate::fx::F64Ext;

use crate::error::Error;
use crate::functions::ObjectiveSpec;
use crate::grid::{self, GridND};
use crate::linalg;
use crate::spectral::{self, GapCurve};
use crate::Result;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
use rand::Rng;

/// Linear annealing schedule: `b(s) = λ_max² · s`, kinetic prefactor 1.
#[derive(Debug, Clone, Copy)]
pub struct AnnealSchedule {
    pub lambda_max: f64,
    /// Total rescaled evolution time T.
    pub total_time: f64,
    /// Crank-Nicolson substeps covering s ∈ [0, 1].
    pub steps: usize,
}

impl AnnealSchedule {
    /// Potential prefactor at schedule position s.
    pub fn b(&self, s: f64) -> f64 {
        self.lambda_max * self.lambda_max * s
    }

    /// Steps from the conservative default `dt · ‖H(1)‖_Gershgorin ≤ 0.5`;
    /// override `steps` directly to trade accuracy for speed (Crank-Nicolson
    /// is unconditionally stable).
    pub fn with_gershgorin_steps(
        grid: &GridND,
        spec: &ObjectiveSpec,
        lambda_max: f64,
        total_time: f64,
    ) -> Result<Self> {
        let h1 = grid::build_hamiltonian(grid, spec, lambda_max)?;
        let (lo, hi) = h1.gershgorin();
        let norm = lo.abs().max(hi.abs());
        let steps = (2.0 * total_time * norm).ceil().max(1.0) as usize;
        Ok(AnnealSchedule { lambda_max, total_time, steps })
    }
}

/// Complex grid wavefunction.
#[derive(Debug, Clone)]
pub struct WaveState {
    pub amplitudes: Vec<Complex64>,
}

impl WaveState {
    pub fn uniform(n: usize) -> Self {
        let a = 1.0 / (n as f64).sqrt();
        WaveState { amplitudes: vec![Complex64::new(a, 0.0); n] }
    }

    pub fn from_real(v: &[f64]) -> Self {
        WaveState { amplitudes: v.iter().map(|&x| Complex64::new(x, 0.0)).collect() }
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// |ψᵢ|² measurement weights.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// |⟨φ|ψ⟩| against a real vector.
    pub fn overlap_real(&self, phi: &[f64]) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, &p) in self.amplitudes.iter().zip(phi) {
            acc += a * p;
        }
        acc.norm()
    }
}

/// Which state the propagation starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialState {
    /// Normalized constant over the interior nodes (the algorithm's own
    /// start). Against a Dirichlet box this overlaps the s=0 ground mode at
    /// 2√2/π ≈ 0.9003 per axis, which caps the reachable final overlap.
    Uniform,
    /// Instantaneous ground state at s = 0 (the box sine mode); isolates
    /// propagator quality from the uniform-start ceiling.
    InstantaneousGround,
}

#[derive(Debug, Clone)]
pub struct EvolveOptions {
    pub initial: InitialState,
    /// Instantaneous-ground-state checkpoints along the schedule (0 = none).
    pub checkpoints: usize,
    /// Tolerance of the inner linear solves.
    pub solver_tol: f64,
    /// Eigensolve tolerance for checkpoints.
    pub eigen_tol: f64,
    /// Uniform ±ε_f perturbation of the node potential, seeded; models a
    /// bounded-error function oracle. Off by default.
    pub oracle_noise: Option<(f64, u64)>,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions {
            initial: InitialState::Uniform,
            checkpoints: 32,
            solver_tol: 1e-10,
            eigen_tol: 1e-6,
            oracle_noise: None,
        }
    }
}

/// Probe of the instantaneous frame at a schedule checkpoint.
#[derive(Debug, Clone, Copy)]
pub struct Checkpoint {
    pub s: f64,
    /// |⟨ψ₁(s)|ψ⟩|
    pub ground_overlap: f64,
    /// ⟨ψ|H(s)|ψ⟩
    pub energy: f64,
    pub ground_energy: f64,
}

#[derive(Debug, Clone)]
pub struct EvolveReport {
    pub state: WaveState,
    /// max over steps of |‖ψ‖ - 1|
    pub max_norm_drift: f64,
    pub checkpoints: Vec<Checkpoint>,
}

/// Crank-Nicolson propagation of the annealing schedule with midpoint
/// Hamiltonians. 1D grids solve the complex tridiagonal system directly;
/// higher dimensions run conjugate gradients on the normal equations
/// `(I + κ²H²)ψ' = (I - iκH)² ψ`.
pub fn evolve(
    grid: &GridND,
    spec: &ObjectiveSpec,
    schedule: &AnnealSchedule,
    opts: &EvolveOptions,
) -> Result<EvolveReport> {
    if schedule.steps == 0 || !(schedule.total_time > 0.0) {
        return Err(Error::Invalid(alloc::string::String::from(
            "schedule needs steps >= 1 and positive total time",
        )));
    }
    let n = grid.len();
    let lap = grid::build_laplacian(grid)?;
    let mut fvals = Vec::with_capacity(n);
    for i in 0..n {
        fvals.push(spec.value(&grid.node(i))?);
    }
    if let Some((eps_f, seed)) = opts.oracle_noise {
        let mut rng = crate::rng::stream(seed);
        for v in fvals.iter_mut() {
            *v += eps_f * (2.0 * rng.gen::<f64>() - 1.0);
        }
    }
    let tridiag = lap.as_tridiagonal();

    let mut state = match opts.initial {
        InitialState::Uniform => WaveState::uniform(n),
        InitialState::InstantaneousGround => {
            let sol = spectral::lowest_eigenpairs(&lap, 1, opts.eigen_tol)?;
            WaveState::from_real(&sol.vectors[0])
        }
    };

    let dt = schedule.total_time / schedule.steps as f64;
    let kappa = 0.5 * dt;
    let mut max_norm_drift: f64 = 0.0;
    let mut checkpoints = Vec::new();
    let checkpoint_every = if opts.checkpoints > 0 {
        (schedule.steps / opts.checkpoints).max(1)
    } else {
        usize::MAX
    };

    // scratch buffers
    let mut hre = vec![0.0; n];
    let mut him = vec![0.0; n];
    let mut re = vec![0.0; n];
    let mut im = vec![0.0; n];

    let apply_h = |b: f64, x_re: &[f64], x_im: &[f64], y_re: &mut [f64], y_im: &mut [f64]| {
        lap.matvec(x_re, y_re);
        lap.matvec(x_im, y_im);
        for i in 0..n {
            y_re[i] += b * fvals[i] * x_re[i];
            y_im[i] += b * fvals[i] * x_im[i];
        }
    };

    for step in 0..schedule.steps {
        let s_mid = (step as f64 + 0.5) / schedule.steps as f64;
        let b = schedule.b(s_mid);
        for i in 0..n {
            re[i] = state.amplitudes[i].re;
            im[i] = state.amplitudes[i].im;
        }
        if let Some((ldiag, loff)) = &tridiag {
            // direct complex Thomas solve of (I + iκH)ψ' = (I - iκH)ψ
            apply_h(b, &re, &im, &mut hre, &mut him);
            let mut rhs: Vec<Complex64> = (0..n)
                .map(|i| {
                    Complex64::new(re[i] + kappa * him[i], im[i] - kappa * hre[i])
                })
                .collect();
            let adiag: Vec<Complex64> = (0..n)
                .map(|i| Complex64::new(1.0, kappa * (ldiag[i] + b * fvals[i])))
                .collect();
            let aoff: Vec<Complex64> =
                loff.iter().map(|&v| Complex64::new(0.0, kappa * v)).collect();
            linalg::tridiag_solve_complex(&adiag, &aoff, &mut rhs);
            for i in 0..n {
                state.amplitudes[i] = rhs[i];
            }
        } else {
            // normal equations: (I + κ²H²) ψ' = (I - 2iκH - κ²H²) ψ
            apply_h(b, &re, &im, &mut hre, &mut him);
            let mut h2re = vec![0.0; n];
            let mut h2im = vec![0.0; n];
            apply_h(b, &hre, &him, &mut h2re, &mut h2im);
            let rhs_re: Vec<f64> =
                (0..n).map(|i| re[i] + 2.0 * kappa * him[i] - kappa * kappa * h2re[i]).collect();
            let rhs_im: Vec<f64> =
                (0..n).map(|i| im[i] - 2.0 * kappa * hre[i] - kappa * kappa * h2im[i]).collect();
            let spd = |x: &[f64], y: &mut [f64]| {
                let mut hx = vec![0.0; n];
                lap.matvec(x, &mut hx);
                for i in 0..n {
                    hx[i] += b * fvals[i] * x[i];
                }
                lap.matvec(&hx, y);
                for i in 0..n {
                    y[i] = x[i] + kappa * kappa * (y[i] + b * fvals[i] * hx[i]);
                }
            };
            let mut sol_re = re.clone();
            let mut sol_im = im.clone();
            let it1 = linalg::conjugate_gradient(&spd, &rhs_re, &mut sol_re, opts.solver_tol, 800);
            let it2 = linalg::conjugate_gradient(&spd, &rhs_im, &mut sol_im, opts.solver_tol, 800);
            if it1.is_none() || it2.is_none() {
                return Err(Error::LinearSolveFailure { step, residual: f64::NAN });
            }
            for i in 0..n {
                state.amplitudes[i] = Complex64::new(sol_re[i], sol_im[i]);
            }
        }
        let norm = state.norm();
        max_norm_drift = max_norm_drift.max((norm - 1.0).abs());

        let at_checkpoint =
            (step + 1) % checkpoint_every == 0 || step + 1 == schedule.steps;
        if opts.checkpoints > 0 && at_checkpoint {
            let s = (step as f64 + 1.0) / schedule.steps as f64;
            let op = lap_with_potential(&lap, &fvals, schedule.b(s));
            let sol = spectral::lowest_eigenpairs(&op, 1, opts.eigen_tol)?;
            for i in 0..n {
                re[i] = state.amplitudes[i].re;
                im[i] = state.amplitudes[i].im;
            }
            apply_h(schedule.b(s), &re, &im, &mut hre, &mut him);
            let energy: f64 = (0..n)
                .map(|i| re[i] * hre[i] + im[i] * him[i])
                .sum::<f64>()
                / norm.max(1e-300).powi(2);
            checkpoints.push(Checkpoint {
                s,
                ground_overlap: state.overlap_real(&sol.vectors[0]),
                energy,
                ground_energy: sol.values[0],
            });
        }
    }
    Ok(EvolveReport { state, max_norm_drift, checkpoints })
}

fn lap_with_potential(
    lap: &grid::SparseSymOperator,
    fvals: &[f64],
    b: f64,
) -> grid::SparseSymOperator {
    let pot: Vec<f64> = fvals.iter().map(|&v| b * v).collect();
    lap.with_added_diagonal(&pot)
}

/// Success criterion for a measurement of the final state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuccessCriterion {
    /// f(X) - f(x*) ≤ ε
    Value,
    /// ‖X - x*‖ ≤ ε
    Distance,
}

/// Probability that measuring the state yields a point satisfying the
/// criterion; sums |ψ|² over qualifying nodes.
pub fn success_probability(
    grid: &GridND,
    spec: &ObjectiveSpec,
    state: &WaveState,
    epsilon: f64,
    criterion: SuccessCriterion,
) -> Result<f64> {
    let minimizer = spec.minimizer.as_ref().ok_or(Error::MissingMinimizer)?;
    let probs = state.probabilities();
    let total: f64 = probs.iter().sum();
    let mut hit = 0.0;
    for i in 0..grid.len() {
        let x = grid.node(i);
        let ok = match criterion {
            SuccessCriterion::Value => spec.value(&x)? - minimizer.value <= epsilon,
            SuccessCriterion::Distance => {
                let mut d2 = 0.0;
                for (a, b) in x.iter().zip(&minimizer.x) {
                    d2 += (a - b) * (a - b);
                }
                d2.sqrt() <= epsilon
            }
        };
        if ok {
            hit += probs[i];
        }
    }
    Ok(hit / total.max(1e-300))
}

/// θ functional of the digital-simulation bound:
/// `θ = λ_max² Λ δ(1)⁻² + 12 ∫₀¹ δ(s)⁻³ λ_max⁴ Λ² ds` by trapezoidal
/// quadrature, and the adiabatic time `T = θ/ρ` it implies.
#[derive(Debug, Clone, Copy)]
pub struct ThetaReport {
    pub theta: f64,
    pub t_adiabatic: f64,
}

pub fn adiabatic_theta(
    s_samples: &[f64],
    gap_samples: &[f64],
    lambda_max: f64,
    big_lambda: f64,
    rho: f64,
) -> Result<ThetaReport> {
    if s_samples.len() != gap_samples.len() || s_samples.len() < 2 {
        return Err(Error::Invalid(alloc::string::String::from(
            "need matching s and gap samples, at least two",
        )));
    }
    for (i, &g) in gap_samples.iter().enumerate() {
        if !(g > 0.0) {
            return Err(Error::NonPositiveGap { index: i, gap: g });
        }
    }
    if !(rho > 0.0) {
        return Err(Error::Invalid(alloc::string::String::from("rho must be positive")));
    }
    let l2 = lambda_max * lambda_max;
    let end_gap = *gap_samples.last().unwrap();
    let endpoint = l2 * big_lambda / (end_gap * end_gap);
    let mut integral = 0.0;
    for w in s_samples.windows(2).zip(gap_samples.windows(2)) {
        let (sw, gw) = w;
        let f0 = 1.0 / (gw[0] * gw[0] * gw[0]);
        let f1 = 1.0 / (gw[1] * gw[1] * gw[1]);
        integral += 0.5 * (f0 + f1) * (sw[1] - sw[0]);
    }
    let theta = endpoint + 12.0 * l2 * l2 * big_lambda * big_lambda * integral;
    Ok(ThetaReport { theta, t_adiabatic: theta / rho })
}

/// Gap profile δ(s) of `H(s) = -Δ + λ_max² s f` on `n_samples`+1 evenly
/// spaced s values including both endpoints.
pub fn gap_profile(
    spec: &ObjectiveSpec,
    grid: &GridND,
    lambda_max: f64,
    n_samples: usize,
    tol: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let lap = grid::build_laplacian(grid)?;
    let mut fvals = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        fvals.push(spec.value(&grid.node(i))?);
    }
    let mut ss = Vec::with_capacity(n_samples + 1);
    let mut gaps = Vec::with_capacity(n_samples + 1);
    for i in 0..=n_samples {
        let s = i as f64 / n_samples as f64;
        let op = lap_with_potential(&lap, &fvals, lambda_max * lambda_max * s);
        let g = spectral::spectral_gap(&op, tol)?;
        ss.push(s);
        gaps.push(g.gap);
    }
    Ok((ss, gaps))
}

/// Convert a λ gap sweep into (s, δ) samples for the θ quadrature, using
/// s = (λ/λ_max)².
pub fn sweep_to_s_profile(curve: &GapCurve, lambda_max: f64) -> (Vec<f64>, Vec<f64>) {
    let ss: Vec<f64> =
        curve.parameter.iter().map(|&l| (l / lambda_max) * (l / lambda_max)).collect();
    (ss, curve.gap.clone())
}

/// Sufficient λ_max from the potential-energy concentration bound:
/// `max(8 d sqrt(L) / ε, 4 / (sqrt(ε) r))` for a local Hessian bound
/// `‖∇²f‖ ≤ L` on a radius-r ball around the minimizer.
pub fn required_lambda_max(d: usize, hessian_bound: f64, epsilon: f64, radius: f64) -> Result<f64> {
    if !(hessian_bound > 0.0 && epsilon > 0.0 && radius > 0.0) || d == 0 {
        return Err(Error::Invalid(alloc::string::String::from(
            "all concentration-bound arguments must be positive",
        )));
    }
    let branch1 = 8.0 * d as f64 * hessian_bound.sqrt() / epsilon;
    let branch2 = 4.0 / (epsilon.sqrt() * radius);
    Ok(branch1.max(branch2))
}

/// Empirical version of the concentration bound: the tail mass
/// `P[f(X) - f(x*) ≥ ε]` of a state, checked against the lemma's 1/5.
#[derive(Debug, Clone, Copy)]
pub struct MarkovReport {
    pub tail: f64,
    pub within_bound: bool,
}

pub fn energy_markov_check(
    grid: &GridND,
    spec: &ObjectiveSpec,
    state: &WaveState,
    epsilon: f64,
) -> Result<MarkovReport> {
    let p = success_probability(grid, spec, state, epsilon, SuccessCriterion::Value)?;
    let tail = 1.0 - p;
    Ok(MarkovReport { tail, within_bound: tail <= 0.2 })
}
