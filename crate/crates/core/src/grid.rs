//! Uniform tensor grids and sparse symmetric realizations of `-Δ + V` with
//! Dirichlet boundary conditions (boundary nodes dropped, wavefunction
//! pinned to zero there).

#[cfg(not(feature = "std"))]
use crate::fx::F64Ext;

use crate::error::Error;
use crate::functions::{EvalRequest, ObjectiveSpec};
use crate::linalg;
use crate::Result;
use alloc::vec;
use alloc::vec::Vec;

/// Default cap on interior node count; dense d >= 4 grids are rejected, the
/// dimension-scaling route is tensorization in the spectral module.
pub const DEFAULT_NODE_CAP: u64 = 20_000_000;

/// One grid axis: interior points only, spacing `(max - min) / (n + 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Axis {
    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.n as f64 + 1.0)
    }
}

/// Uniform tensor-product grid over a box, row-major linearization, interior
/// nodes only.
#[derive(Debug, Clone)]
pub struct GridND {
    axes: Vec<Axis>,
    len: usize,
}

impl GridND {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        Self::with_cap(axes, DEFAULT_NODE_CAP)
    }

    pub fn with_cap(axes: Vec<Axis>, cap: u64) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::Invalid(alloc::string::String::from(
                "grid needs at least one axis",
            )));
        }
        let mut total: u128 = 1;
        for ax in &axes {
            if ax.n < 3 {
                return Err(Error::Invalid(alloc::format!(
                    "axis needs at least 3 interior points, got {}",
                    ax.n
                )));
            }
            if !(ax.min < ax.max) {
                return Err(Error::Invalid(alloc::string::String::from("axis needs min < max")));
            }
            total = total.saturating_mul(ax.n as u128);
        }
        if total > cap as u128 {
            return Err(Error::DimensionTooLarge { nodes: total, cap });
        }
        let len = total as usize;
        Ok(GridND { axes, len })
    }

    /// Same box with doubled interior resolution (n -> 2n + 1 keeps the old
    /// nodes as a subset); what refinement studies use.
    pub fn refined(&self) -> Result<Self> {
        let axes = self
            .axes
            .iter()
            .map(|a| Axis { min: a.min, max: a.max, n: 2 * a.n + 1 })
            .collect();
        GridND::new(axes)
    }

    /// 1D helper.
    pub fn line(min: f64, max: f64, n: usize) -> Result<Self> {
        GridND::new(vec![Axis { min, max, n }])
    }

    /// Uniform box in `d` dimensions.
    pub fn cube(min: f64, max: f64, n: usize, d: usize) -> Result<Self> {
        GridND::new(vec![Axis { min, max, n }; d])
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    /// Interior node count.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Volume element, product of spacings.
    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(|a| a.spacing()).product()
    }

    /// Multi-index of a linear node id (row-major, last axis fastest).
    pub fn unravel(&self, mut idx: usize) -> Vec<usize> {
        let d = self.dim();
        let mut out = vec![0; d];
        for k in (0..d).rev() {
            out[k] = idx % self.axes[k].n;
            idx /= self.axes[k].n;
        }
        out
    }

    /// Coordinates of a node: `min + (j + 1) h` per axis.
    pub fn node(&self, idx: usize) -> Vec<f64> {
        self.unravel(idx)
            .iter()
            .zip(&self.axes)
            .map(|(&j, a)| a.min + (j as f64 + 1.0) * a.spacing())
            .collect()
    }

    /// Evaluate a function on every node.
    pub fn sample(&self, mut f: impl FnMut(&[f64]) -> f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len);
        for idx in 0..self.len {
            out.push(f(&self.node(idx)));
        }
        out
    }

    pub fn check_inside(&self, spec: &ObjectiveSpec) -> Result<()> {
        if spec.dim != self.dim() {
            return Err(Error::Invalid(alloc::format!(
                "objective dimension {} does not match grid dimension {}",
                spec.dim,
                self.dim()
            )));
        }
        for (axis, (a, (lo, hi))) in self.axes.iter().zip(spec.bounds()).enumerate() {
            if a.min < *lo || a.max > *hi {
                return Err(Error::OutOfDomain { axis, value: a.min.min(a.max), lo: *lo, hi: *hi });
            }
        }
        Ok(())
    }

    /// Grid covering an objective's whole domain box with `n` interior
    /// points per axis.
    pub fn over(spec: &ObjectiveSpec, n: usize) -> Result<Self> {
        GridND::new(spec.bounds().iter().map(|&(min, max)| Axis { min, max, n }).collect())
    }
}

/// Symmetric sparse operator in compressed-row storage with a cached
/// diagonal. Immutable after build; `matvec` is reentrant.
#[derive(Debug, Clone)]
pub struct SparseSymOperator {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    vals: Vec<f64>,
    diag: Vec<f64>,
}

impl SparseSymOperator {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        for i in 0..self.n {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.vals[k] * x[self.col_idx[k]];
            }
            y[i] = s;
        }
    }

    pub fn rayleigh_quotient(&self, x: &[f64]) -> f64 {
        let mut ax = vec![0.0; self.n];
        self.matvec(x, &mut ax);
        linalg::dot(x, &ax) / linalg::dot(x, x)
    }

    /// Gershgorin bounds on the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.n {
            let mut radius = 0.0;
            let mut d = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                if self.col_idx[k] == i {
                    d = self.vals[k];
                } else {
                    radius += self.vals[k].abs();
                }
            }
            lo = lo.min(d - radius);
            hi = hi.max(d + radius);
        }
        (lo, hi)
    }

    /// Exact structural symmetry check (stored pattern equals its transpose).
    pub fn is_symmetric(&self) -> bool {
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.col_idx[k];
                let v = self.vals[k];
                let mut found = false;
                for k2 in self.row_ptr[j]..self.row_ptr[j + 1] {
                    if self.col_idx[k2] == i {
                        found = self.vals[k2] == v;
                        break;
                    }
                }
                if !found {
                    return false;
                }
            }
        }
        true
    }

    /// Tridiagonal extraction when the pattern allows it (1D operators).
    pub fn as_tridiagonal(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        let n = self.n;
        let mut diag = vec![0.0; n];
        let mut off = vec![0.0; n.saturating_sub(1)];
        for i in 0..n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.col_idx[k];
                if j == i {
                    diag[i] = self.vals[k];
                } else if j + 1 == i {
                    // lower triangle; the symmetric partner fills `off`
                } else if j == i + 1 {
                    off[i] = self.vals[k];
                } else if self.vals[k] != 0.0 {
                    return None;
                }
            }
        }
        Some((diag, off))
    }

    /// COO triplets (row, col, value) of the stored entries.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| {
            (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |k| (i, self.col_idx[k], self.vals[k]))
        })
    }

    /// Add `v[i]` to each diagonal entry, returning a new operator.
    pub fn with_added_diagonal(&self, v: &[f64]) -> SparseSymOperator {
        debug_assert_eq!(v.len(), self.n);
        let mut out = self.clone();
        for i in 0..self.n {
            for k in out.row_ptr[i]..out.row_ptr[i + 1] {
                if out.col_idx[k] == i {
                    out.vals[k] += v[i];
                }
            }
            out.diag[i] += v[i];
        }
        out
    }
}

/// Second-order 3-point Dirichlet Laplacian as a Kronecker sum over axes.
pub fn build_laplacian(grid: &GridND) -> Result<SparseSymOperator> {
    let d = grid.dim();
    if !(1..=3).contains(&d) {
        return Err(Error::Invalid(alloc::format!(
            "dense grids support 1 to 3 axes, got {d}; use per-block tensorization beyond that"
        )));
    }
    let n = grid.len();
    let dims: Vec<usize> = grid.axes().iter().map(|a| a.n).collect();
    let inv_h2: Vec<f64> =
        grid.axes().iter().map(|a| 1.0 / (a.spacing() * a.spacing())).collect();
    let diag_val: f64 = inv_h2.iter().map(|v| 2.0 * v).sum();

    let mut strides = vec![1usize; d];
    for k in (0..d.saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }

    let mut row_ptr = Vec::with_capacity(n + 1);
    let mut col_idx = Vec::new();
    let mut vals = Vec::new();
    let mut diag = Vec::with_capacity(n);
    row_ptr.push(0);
    let mut index = vec![0usize; d];
    let mut entries: Vec<(usize, f64)> = Vec::with_capacity(2 * d + 1);
    for i in 0..n {
        entries.clear();
        for k in 0..d {
            if index[k] > 0 {
                entries.push((i - strides[k], -inv_h2[k]));
            }
            if index[k] + 1 < dims[k] {
                entries.push((i + strides[k], -inv_h2[k]));
            }
        }
        entries.push((i, diag_val));
        entries.sort_by_key(|e| e.0);
        for &(c, v) in entries.iter() {
            col_idx.push(c);
            vals.push(v);
        }
        row_ptr.push(col_idx.len());
        diag.push(diag_val);
        // odometer over the multi-index, last axis fastest
        let mut k = d;
        while k > 0 {
            k -= 1;
            index[k] += 1;
            if index[k] < dims[k] {
                break;
            }
            index[k] = 0;
        }
    }
    Ok(SparseSymOperator { n, row_ptr, col_idx, vals, diag })
}

/// `H(λ) = -Δ + λ² f` on the grid nodes.
pub fn build_hamiltonian(
    grid: &GridND,
    spec: &ObjectiveSpec,
    lambda: f64,
) -> Result<SparseSymOperator> {
    if lambda < 0.0 {
        return Err(Error::Invalid(alloc::string::String::from("lambda must be non-negative")));
    }
    grid.check_inside(spec)?;
    let lap = build_laplacian(grid)?;
    let mut pot = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        pot.push(lambda * lambda * spec.value(&grid.node(i))?);
    }
    Ok(lap.with_added_diagonal(&pot))
}

/// Witten Laplacian for `φ = βf`: `-Δ + β²‖∇f‖² - βΔf`, spectrally
/// equivalent to the Langevin diffusion with stationary measure ∝ e^{-2βf}.
pub fn build_witten(grid: &GridND, spec: &ObjectiveSpec, beta: f64) -> Result<SparseSymOperator> {
    let lap = build_laplacian(grid)?;
    let pot = wkb_potential(grid, spec, beta)?;
    Ok(lap.with_added_diagonal(&pot))
}

/// WKB effective potential values `β²‖∇f‖² - βΔf` on the grid.
pub fn wkb_potential(grid: &GridND, spec: &ObjectiveSpec, beta: f64) -> Result<Vec<f64>> {
    if beta <= 0.0 {
        return Err(Error::Invalid(alloc::string::String::from("beta must be positive")));
    }
    grid.check_inside(spec)?;
    let req = EvalRequest { gradient: true, hessian: false, laplacian: true };
    let mut pot = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let out = spec.eval(&grid.node(i), req)?;
        let g = out.gradient.as_ref().unwrap();
        pot.push(beta * beta * linalg::dot(g, g) - beta * out.laplacian.unwrap());
    }
    Ok(pot)
}

/// Witten operator `-Δ + ‖∇φ‖² - Δφ` from a drift potential sampled on the
/// grid; derivatives of φ by central differences in the interior and
/// one-sided differences at the first and last interior nodes. The ground
/// energy shift E₁ is left out so gaps are shift-independent.
pub fn build_witten_from_potential(grid: &GridND, phi: &[f64]) -> Result<SparseSymOperator> {
    if phi.len() != grid.len() {
        return Err(Error::Invalid(alloc::string::String::from(
            "potential sample length does not match grid",
        )));
    }
    if phi.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput);
    }
    let d = grid.dim();
    let dims: Vec<usize> = grid.axes().iter().map(|a| a.n).collect();
    let spacings: Vec<f64> = grid.axes().iter().map(|a| a.spacing()).collect();
    let mut strides = vec![1usize; d];
    for k in (0..d.saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let lap = build_laplacian(grid)?;
    let n = grid.len();
    let mut pot = vec![0.0; n];
    let mut index = vec![0usize; d];
    for i in 0..n {
        let mut grad2 = 0.0;
        let mut lap_phi = 0.0;
        for k in 0..d {
            let h = spacings[k];
            let j = index[k];
            let (g, l) = if j > 0 && j + 1 < dims[k] {
                let fp = phi[i + strides[k]];
                let fm = phi[i - strides[k]];
                ((fp - fm) / (2.0 * h), (fp - 2.0 * phi[i] + fm) / (h * h))
            } else if j == 0 {
                let f0 = phi[i];
                let f1 = phi[i + strides[k]];
                let f2 = phi[i + 2 * strides[k]];
                ((-1.5 * f0 + 2.0 * f1 - 0.5 * f2) / h, (f0 - 2.0 * f1 + f2) / (h * h))
            } else {
                let f0 = phi[i];
                let f1 = phi[i - strides[k]];
                let f2 = phi[i - 2 * strides[k]];
                ((1.5 * f0 - 2.0 * f1 + 0.5 * f2) / h, (f0 - 2.0 * f1 + f2) / (h * h))
            };
            grad2 += g * g;
            lap_phi += l;
        }
        pot[i] = grad2 - lap_phi;
        let mut k = d;
        while k > 0 {
            k -= 1;
            index[k] += 1;
            if index[k] < dims[k] {
                break;
            }
            index[k] = 0;
        }
    }
    Ok(lap.with_added_diagonal(&pot))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::make_sphere;

    #[test]
    fn node_layout_and_spacing() {
        let g = GridND::line(0.0, 1.0, 3).unwrap();
        assert!((g.axes()[0].spacing() - 0.25).abs() < 1e-15);
        assert_eq!(g.node(0), vec![0.25]);
        assert_eq!(g.node(2), vec![0.75]);
        let g2 = GridND::cube(0.0, 1.0, 3, 2).unwrap();
        assert_eq!(g2.len(), 9);
        // row-major: last axis fastest
        assert_eq!(g2.node(1), vec![0.25, 0.5]);
        assert_eq!(g2.node(3), vec![0.5, 0.25]);
    }

    #[test]
    fn laplacian_symmetric_and_boundary_deficit() {
        let g = GridND::cube(0.0, 1.0, 4, 2).unwrap();
        let lap = build_laplacian(&g).unwrap();
        assert!(lap.is_symmetric());
        // matvec on the all-ones vector: interior rows cancel, rows touching
        // the boundary keep a +1/h^2 deficit per missing neighbour.
        let ones = vec![1.0; g.len()];
        let mut y = vec![0.0; g.len()];
        lap.matvec(&ones, &mut y);
        let h2 = g.axes()[0].spacing() * g.axes()[0].spacing();
        // corner node misses two neighbours
        assert!((y[0] - 2.0 / h2).abs() < 1e-9);
        // the node at multi-index (1,1) -> 1*4+1 = 5 misses none
        assert!(y[5].abs() < 1e-9);
        // edge-center nodes miss one
        assert!((y[1] - 1.0 / h2).abs() < 1e-9);
    }

    #[test]
    fn laplacian_positive_semidefinite_by_gershgorin() {
        let g = GridND::cube(-1.0, 1.0, 8, 2).unwrap();
        let lap = build_laplacian(&g).unwrap();
        let (lo, _) = lap.gershgorin();
        assert!(lo >= -1e-9);
    }

    #[test]
    fn hamiltonian_at_lambda_zero_is_laplacian() {
        let g = GridND::line(-2.0, 2.0, 17).unwrap();
        let spec = make_sphere(1);
        let h0 = build_hamiltonian(&g, &spec, 0.0).unwrap();
        let lap = build_laplacian(&g).unwrap();
        let x: Vec<f64> = (0..g.len()).map(|i| (i as f64 * 0.37).sin()).collect();
        let mut y0 = vec![0.0; g.len()];
        let mut y1 = vec![0.0; g.len()];
        h0.matvec(&x, &mut y0);
        lap.matvec(&x, &mut y1);
        for i in 0..g.len() {
            assert_eq!(y0[i], y1[i]);
        }
    }

    #[test]
    fn grid_outside_domain_rejected() {
        let g = GridND::line(-3.0, 3.0, 17).unwrap();
        let spec = crate::functions::make_biquartic(); // box [-2, 2]
        match build_hamiltonian(&g, &spec, 1.0) {
            Err(Error::OutOfDomain { .. }) => {}
            other => panic!("expected OutOfDomain, got {other:?}"),
        }
    }

    #[test]
    fn node_cap_enforced() {
        match GridND::cube(0.0, 1.0, 4000, 3) {
            Err(Error::DimensionTooLarge { .. }) => {}
            other => panic!("expected DimensionTooLarge, got {other:?}"),
        }
    }

    #[test]
    fn tridiagonal_extraction() {
        let g = GridND::line(0.0, core::f64::consts::PI, 31).unwrap();
        let lap = build_laplacian(&g).unwrap();
        let (diag, off) = lap.as_tridiagonal().unwrap();
        let h2 = g.axes()[0].spacing() * g.axes()[0].spacing();
        assert!(diag.iter().all(|&v| (v - 2.0 / h2).abs() < 1e-12));
        assert!(off.iter().all(|&v| (v + 1.0 / h2).abs() < 1e-12));
        let g2 = GridND::cube(0.0, 1.0, 4, 2).unwrap();
        assert!(build_laplacian(&g2).unwrap().as_tridiagonal().is_none());
    }

    #[test]
    fn witten_potential_for_quadratic_phi() {
        // φ = x²/2 on a fine grid: potential x² - 1 up to O(h²) interior.
        let g = GridND::line(-8.0, 8.0, 511).unwrap();
        let phi: Vec<f64> = (0..g.len())
            .map(|i| {
                let x = g.node(i)[0];
                0.5 * x * x
            })
            .collect();
        let w = build_witten_from_potential(&g, &phi).unwrap();
        let lap = build_laplacian(&g).unwrap();
        for i in (5..g.len() - 5).step_by(50) {
            let x = g.node(i)[0];
            let v = w.diagonal()[i] - lap.diagonal()[i];
            assert!((v - (x * x - 1.0)).abs() < 1e-6, "pot({x}) = {v}");
        }
    }
}
