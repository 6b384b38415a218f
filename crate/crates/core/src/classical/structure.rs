//! Structure-aware algorithms: convexity honing (low-temperature Langevin
//! into gradient descent) and Hessian block recovery (joint
//! block-diagonalization of two finite-difference Hessians).

#[cfg(not(feature = "std"))]
use crate::fx::F64Ext;

use super::{lbfgs, uniform_in_box, Evaluator, RunParams, RunRecord, StopFlag};
use crate::error::Error;
use crate::functions::ObjectiveSpec;
use crate::linalg;
use crate::Result;
use alloc::vec;
use alloc::vec::Vec;
use rand::Rng;

#[derive(Debug, Clone, Copy)]
pub struct ConvexityHoningConfig {
    /// Phase-1 inverse temperature is `coef * ln(d + 1)`.
    pub beta_coefficient: f64,
    pub step_size: f64,
    /// Langevin iterations per restart chain.
    pub phase1_steps: usize,
    /// Number of chains; each ends with a descent from its best sample.
    pub restarts: usize,
    pub local_tol: f64,
    pub local_iters: usize,
}

impl Default for ConvexityHoningConfig {
    fn default() -> Self {
        ConvexityHoningConfig {
            beta_coefficient: 4.0,
            step_size: 5e-3,
            phase1_steps: 20_000,
            restarts: 8,
            local_tol: 1e-9,
            local_iters: 300,
        }
    }
}

/// Phase 1 samples the Gibbs measure at the mild `β = c·log d` (separable
/// landscapes concentrate inside the convex region around the optimum at
/// that temperature); phase 2 descends from the best sample of each chain.
pub fn run_convexity_honing(
    spec: &ObjectiveSpec,
    cfg: &ConvexityHoningConfig,
    params: &RunParams,
    stop: StopFlag<'_>,
) -> Result<RunRecord> {
    let d = spec.dim;
    let beta = cfg.beta_coefficient * ((d as f64) + 1.0).ln();
    if !(beta > 0.0) || !(cfg.step_size > 0.0) {
        return Err(Error::Invalid(alloc::string::String::from(
            "honing needs positive beta and step size",
        )));
    }
    let mut rng = crate::rng::stream(params.seed);
    let mut ev = Evaluator::new(spec, params, stop);
    let bounds = spec.bounds().to_vec();
    let seed = params.seed;
    let noise_scale = (2.0 * cfg.step_size / beta).sqrt();
    'chains: for _chain in 0..cfg.restarts.max(1) {
        let mut x = uniform_in_box(&bounds, &mut rng);
        let mut chain_best = f64::INFINITY;
        let mut chain_best_x = x.clone();
        for _ in 0..cfg.phase1_steps {
            let v = match ev.value(&x) {
                Ok(v) => v,
                Err(Error::BudgetExhausted) => break 'chains,
                Err(e) => return Err(e),
            };
            if v < chain_best {
                chain_best = v;
                chain_best_x.copy_from_slice(&x);
            }
            let g = match ev.gradient(&x) {
                Ok(g) => g,
                Err(Error::BudgetExhausted) => break 'chains,
                Err(e) => return Err(e),
            };
            for i in 0..d {
                x[i] += -cfg.step_size * g[i]
                    + noise_scale * crate::rng::standard_normal(&mut rng);
            }
            super::reflect_into(&mut x, &bounds);
        }
        match lbfgs(&mut ev, chain_best_x, cfg.local_tol, cfg.local_iters) {
            Ok(_) => {}
            Err(Error::BudgetExhausted) => break,
            Err(e) => return Err(e),
        }
        if ev.done() {
            break;
        }
    }
    Ok(ev.finish(seed))
}

#[derive(Debug, Clone, Copy)]
pub struct HessianAlgorithmConfig {
    /// Off-diagonal entries above `threshold * max|entry|` are graph edges.
    pub edge_threshold: f64,
    /// Recovered components above this size mean the spectra were too
    /// degenerate to split; the points are resampled.
    pub max_block: usize,
    pub resample_attempts: usize,
    /// Per-block grid-search resolution.
    pub grid_resolution: f64,
    /// Per-block grid-search half-width in the rotated coordinates.
    pub search_radius: f64,
    pub local_tol: f64,
    pub local_iters: usize,
}

impl Default for HessianAlgorithmConfig {
    fn default() -> Self {
        HessianAlgorithmConfig {
            edge_threshold: 1e-6,
            max_block: 3,
            resample_attempts: 5,
            grid_resolution: 0.05,
            search_radius: 2.5,
            local_tol: 1e-10,
            local_iters: 400,
        }
    }
}

/// Recover the hidden rotation of a block-separable objective from two
/// finite-difference Hessians (value access only), then optimize block by
/// block: eigendecompose H(x₁), cluster coordinates through the
/// above-threshold entries of `Vᵀ H(x₂) V`, grid-search each recovered
/// block, and polish with the local minimizer.
pub fn run_hessian_algorithm(
    spec: &ObjectiveSpec,
    cfg: &HessianAlgorithmConfig,
    params: &RunParams,
    stop: StopFlag<'_>,
) -> Result<RunRecord> {
    let d = spec.dim;
    let mut rng = crate::rng::stream(params.seed);
    let mut ev = Evaluator::new(spec, params, stop);
    let bounds = spec.bounds().to_vec();
    let seed = params.seed;

    let mut blocks_and_v: Option<(Vec<Vec<usize>>, Vec<f64>)> = None;
    let mut last_component = 0usize;
    for _attempt in 0..cfg.resample_attempts.max(1) {
        // Hessians at two random interior points (shrunk so stencils stay in
        // the box).
        let x1 = sample_shrunk(&bounds, 0.2, &mut rng);
        let x2 = sample_shrunk(&bounds, 0.2, &mut rng);
        let h1 = match fd_hessian(&mut ev, &x1) {
            Ok(h) => h,
            Err(Error::BudgetExhausted) => return Ok(ev.finish(seed)),
            Err(e) => return Err(e),
        };
        let h2 = match fd_hessian(&mut ev, &x2) {
            Ok(h) => h,
            Err(Error::BudgetExhausted) => return Ok(ev.finish(seed)),
            Err(e) => return Err(e),
        };
        let (_, v) = linalg::jacobi_eigen(&h1, d);
        // M = Vᵀ H₂ V; V also diagonalizes H₁ by construction, so the union
        // of the two conjugated sparsity patterns is M's pattern.
        let m = conjugate(&h2, &v, d);
        let maxabs = m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        let mut uf: Vec<usize> = (0..d).collect();
        fn find(p: &mut Vec<usize>, mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for i in 0..d {
            for j in i + 1..d {
                if m[i * d + j].abs() > cfg.edge_threshold * maxabs {
                    let (a, b) = (find(&mut uf, i), find(&mut uf, j));
                    if a != b {
                        uf[a] = b;
                    }
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut root_of: Vec<Option<usize>> = vec![None; d];
        for i in 0..d {
            let r = find(&mut uf, i);
            match root_of[r] {
                Some(g) => groups[g].push(i),
                None => {
                    root_of[r] = Some(groups.len());
                    groups.push(vec![i]);
                }
            }
        }
        last_component = groups.iter().map(|g| g.len()).max().unwrap_or(0);
        if last_component <= cfg.max_block {
            blocks_and_v = Some((groups, v));
            break;
        }
    }
    let (groups, v) = match blocks_and_v {
        Some(bv) => bv,
        None => return Err(Error::BlockRecoveryFailed { component: last_component, max: cfg.max_block }),
    };

    // Block-wise grid search in the recovered eigenbasis from y = 0, then a
    // full-space polish.
    let mut y = vec![0.0; d];
    let steps = ((2.0 * cfg.search_radius / cfg.grid_resolution).ceil() as usize).max(2);
    let mut x_scratch = vec![0.0; d];
    for group in &groups {
        let gd = group.len();
        let total: usize = steps.pow(gd as u32);
        let mut best = f64::INFINITY;
        let mut best_assign = vec![0.0; gd];
        for flat in 0..total {
            let mut rem = flat;
            for (slot, &coord) in group.iter().enumerate() {
                let idx = rem % steps;
                rem /= steps;
                y[coord] = -cfg.search_radius
                    + 2.0 * cfg.search_radius * idx as f64 / (steps as f64 - 1.0);
                let _ = slot;
            }
            rotate_into(&v, &y, &mut x_scratch, d);
            if !spec.contains(&x_scratch) {
                continue;
            }
            let val = match ev.value(&x_scratch) {
                Ok(v) => v,
                Err(Error::BudgetExhausted) => return Ok(ev.finish(seed)),
                Err(e) => return Err(e),
            };
            if val < best {
                best = val;
                for (slot, &coord) in group.iter().enumerate() {
                    best_assign[slot] = y[coord];
                }
            }
        }
        for (slot, &coord) in group.iter().enumerate() {
            y[coord] = best_assign[slot];
        }
    }
    rotate_into(&v, &y, &mut x_scratch, d);
    super::project_into(&mut x_scratch, &bounds);
    match lbfgs(&mut ev, x_scratch, cfg.local_tol, cfg.local_iters) {
        Ok(_) | Err(Error::BudgetExhausted) => {}
        Err(e) => return Err(e),
    }
    Ok(ev.finish(seed))
}

fn sample_shrunk(bounds: &[(f64, f64)], margin: f64, rng: &mut impl Rng) -> Vec<f64> {
    bounds
        .iter()
        .map(|(lo, hi)| {
            let mid = 0.5 * (lo + hi);
            let half = 0.5 * (hi - lo) * (1.0 - margin);
            mid + (2.0 * rng.gen::<f64>() - 1.0) * half
        })
        .collect()
}

/// Central-difference Hessian with value access only, O(d²) evaluations.
fn fd_hessian(ev: &mut Evaluator<'_>, x: &[f64]) -> Result<Vec<f64>> {
    let d = x.len();
    let step = |xi: f64| f64::EPSILON.sqrt().sqrt() * (1.0 + xi.abs());
    let f0 = ev.value(x)?;
    let mut h = vec![0.0; d * d];
    let mut probe = x.to_vec();
    for i in 0..d {
        let hi = step(x[i]);
        probe[i] = x[i] + hi;
        let fp = ev.value(&probe)?;
        probe[i] = x[i] - hi;
        let fm = ev.value(&probe)?;
        probe[i] = x[i];
        h[i * d + i] = (fp - 2.0 * f0 + fm) / (hi * hi);
        for j in i + 1..d {
            let hj = step(x[j]);
            probe[i] = x[i] + hi;
            probe[j] = x[j] + hj;
            let fpp = ev.value(&probe)?;
            probe[j] = x[j] - hj;
            let fpm = ev.value(&probe)?;
            probe[i] = x[i] - hi;
            let fmm = ev.value(&probe)?;
            probe[j] = x[j] + hj;
            let fmp = ev.value(&probe)?;
            probe[i] = x[i];
            probe[j] = x[j];
            let val = (fpp - fpm - fmp + fmm) / (4.0 * hi * hj);
            h[i * d + j] = val;
            h[j * d + i] = val;
        }
    }
    Ok(h)
}

fn conjugate(h: &[f64], v: &[f64], d: usize) -> Vec<f64> {
    // Vᵀ H V with V stored row-major (columns are eigenvectors)
    let mut hv = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            let mut s = 0.0;
            for k in 0..d {
                s += h[i * d + k] * v[k * d + j];
            }
            hv[i * d + j] = s;
        }
    }
    let mut out = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            let mut s = 0.0;
            for k in 0..d {
                s += v[k * d + i] * hv[k * d + j];
            }
            out[i * d + j] = s;
        }
    }
    out
}

fn rotate_into(v: &[f64], y: &[f64], x: &mut [f64], d: usize) {
    for i in 0..d {
        let mut s = 0.0;
        for j in 0..d {
            s += v[i * d + j] * y[j];
        }
        x[i] = s;
    }
}
