//! Figure-data regeneration: the gap-comparison overlay (rescaled
//! Schrodinger against Witten) and the 2D potential surfaces (objective,
//! ground-state potential, WKB effective potential) with near-global
//! cluster counts.

use crate::output::{csv_bytes, fmt_f64, svg_heatmap, svg_line_chart, write_atomic};
use anyhow::{bail, Result};
use rsaa_core::functions::ObjectiveSpec;
use rsaa_core::grid::{self, GridND};
use rsaa_core::spectral::{self, OperatorKind, ScalingMode};
use std::path::Path;

pub struct GapComparison {
    pub lambdas: Vec<f64>,
    pub schrodinger_rescaled: Vec<f64>,
    pub betas: Vec<f64>,
    pub witten: Vec<f64>,
}

/// Two sweeps (rescaled Schrodinger over λ, Witten over β) plus CSV and SVG
/// overlays.
pub fn figure_gap_comparison(
    spec: &ObjectiveSpec,
    grid: &GridND,
    lambdas: &[f64],
    betas: &[f64],
    outdir: &Path,
    stem: &str,
) -> Result<GapComparison> {
    let s = spectral::gap_sweep(
        spec,
        grid,
        lambdas,
        OperatorKind::Schrodinger,
        ScalingMode::Rescaled,
        1e-7,
    )?;
    let w = spectral::gap_sweep(spec, grid, betas, OperatorKind::Witten, ScalingMode::Raw, 1e-7)?;
    let mut rows = Vec::new();
    for (p, g) in s.parameter.iter().zip(&s.gap) {
        rows.push(vec!["schrodinger-rescaled".into(), fmt_f64(*p), fmt_f64(*g)]);
    }
    for (p, g) in w.parameter.iter().zip(&w.gap) {
        rows.push(vec!["witten".into(), fmt_f64(*p), fmt_f64(*g)]);
    }
    write_atomic(
        &outdir.join(format!("{stem}.csv")),
        &csv_bytes(&["operator", "param (lambda or beta)", "gap (energy)"], &rows),
    )?;
    let chart = svg_line_chart(
        &[
            ("rescaled Schrodinger gap", &s.parameter, &s.gap),
            ("Witten gap", &w.parameter, &w.gap),
        ],
        true,
        &format!("spectral gaps, {}", spec.name),
    );
    write_atomic(&outdir.join(format!("{stem}.svg")), &chart)?;
    Ok(GapComparison {
        lambdas: s.parameter,
        schrodinger_rescaled: s.gap,
        betas: w.parameter,
        witten: w.gap,
    })
}

pub struct PotentialFigures {
    pub ground_clusters: usize,
    pub wkb_clusters: usize,
    pub objective_clusters: usize,
}

/// Sample the objective, the ground-state potential at λ, and the WKB
/// potential at β on a 2D grid; emit CSV surfaces plus SVG heatmaps and
/// count near-global minima (nodes within 1% of the surface range above the
/// minimum, clustered by grid adjacency).
pub fn figure_potentials(
    spec: &ObjectiveSpec,
    grid: &GridND,
    lambda: f64,
    beta: f64,
    outdir: &Path,
    stem: &str,
    eigen_tol: f64,
) -> Result<PotentialFigures> {
    if spec.dim != 2 {
        bail!("potential surfaces are 2D figures; got dimension {}", spec.dim);
    }
    let n = grid.len();
    let mut f_surface = Vec::with_capacity(n);
    for i in 0..n {
        f_surface.push(spec.value(&grid.node(i)).map_err(|e| anyhow::anyhow!("{e}"))?);
    }
    let wkb = grid::wkb_potential(grid, spec, beta).map_err(|e| anyhow::anyhow!("{e}"))?;
    let ground = if lambda > 0.0 {
        let h = grid::build_hamiltonian(grid, spec, lambda).map_err(|e| anyhow::anyhow!("{e}"))?;
        let sol = spectral::lowest_eigenpairs(&h, 1, eigen_tol).map_err(|e| anyhow::anyhow!("{e}"))?;
        spectral::ground_state_potential(&sol, 1e-300).map_err(|e| anyhow::anyhow!("{e}"))?
    } else {
        let lap = grid::build_laplacian(grid).map_err(|e| anyhow::anyhow!("{e}"))?;
        let sol = spectral::lowest_eigenpairs(&lap, 1, eigen_tol).map_err(|e| anyhow::anyhow!("{e}"))?;
        spectral::ground_state_potential(&sol, 1e-300).map_err(|e| anyhow::anyhow!("{e}"))?
    };

    let surfaces: [(&str, &Vec<f64>); 3] =
        [("objective", &f_surface), ("ground", &ground), ("wkb", &wkb)];
    let ny = grid.axes()[1].n;
    for (tag, surface) in &surfaces {
        let rows: Vec<Vec<String>> = (0..n)
            .map(|i| {
                let xy = grid.node(i);
                vec![fmt_f64(xy[0]), fmt_f64(xy[1]), fmt_f64(surface[i])]
            })
            .collect();
        write_atomic(
            &outdir.join(format!("{stem}-{tag}.csv")),
            &csv_bytes(&["x", "y", "value (objective units)"], &rows),
        )?;
        write_atomic(
            &outdir.join(format!("{stem}-{tag}.svg")),
            &svg_heatmap(surface, n / ny, ny, &format!("{} ({tag})", spec.name)),
        )?;
    }
    Ok(PotentialFigures {
        objective_clusters: near_global_clusters(&f_surface, grid),
        ground_clusters: near_global_clusters(&ground, grid),
        wkb_clusters: near_global_clusters(&wkb, grid),
    })
}

/// Count connected clusters of nodes whose value sits within 1% of the
/// surface range above the minimum.
pub fn near_global_clusters(surface: &[f64], grid: &GridND) -> usize {
    let vmin = surface.iter().cloned().fold(f64::INFINITY, f64::min);
    let vmax = surface.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let cut = vmin + 0.01 * (vmax - vmin);
    let n = surface.len();
    let qualifying: Vec<bool> = surface.iter().map(|&v| v <= cut).collect();
    let dims: Vec<usize> = grid.axes().iter().map(|a| a.n).collect();
    let d = dims.len();
    let mut strides = vec![1usize; d];
    for k in (0..d.saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let mut seen = vec![false; n];
    let mut clusters = 0;
    let mut stack = Vec::new();
    for start in 0..n {
        if !qualifying[start] || seen[start] {
            continue;
        }
        clusters += 1;
        stack.push(start);
        seen[start] = true;
        while let Some(v) = stack.pop() {
            let mi = grid.unravel(v);
            for k in 0..d {
                if mi[k] > 0 {
                    let u = v - strides[k];
                    if qualifying[u] && !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
                if mi[k] + 1 < dims[k] {
                    let u = v + strides[k];
                    if qualifying[u] && !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
        }
    }
    clusters
}
