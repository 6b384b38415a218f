//! The benchmark-function corpus: every objective the experiments use, with
//! analytic gradients, Hessians and Laplacians where available, finite
//! difference fallbacks elsewhere, and rotated block-separable composition.

pub mod expr;

#[cfg(not(feature = "std"))]
use crate::fx::F64Ext;

use crate::error::Error;
use crate::linalg;
use crate::rng::QuasiRandom;
use crate::Result;
use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

/// Which derivatives an objective can produce analytically.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DerivCaps {
    pub gradient: bool,
    pub hessian: bool,
    pub laplacian: bool,
}

/// Which derivatives a caller wants in the bundle.
#[derive(Debug, Clone, Copy, Default)]
pub struct EvalRequest {
    pub gradient: bool,
    pub hessian: bool,
    pub laplacian: bool,
}

impl EvalRequest {
    pub fn value() -> Self {
        EvalRequest::default()
    }
    pub fn gradient() -> Self {
        EvalRequest { gradient: true, ..Default::default() }
    }
    pub fn full() -> Self {
        EvalRequest { gradient: true, hessian: true, laplacian: true }
    }
}

/// Value plus the requested derivatives. The Hessian is row-major d x d.
#[derive(Debug, Clone)]
pub struct EvalBundle {
    pub value: f64,
    pub gradient: Option<Vec<f64>>,
    pub hessian: Option<Vec<f64>>,
    pub laplacian: Option<f64>,
}

/// Known-minimizer metadata.
#[derive(Debug, Clone)]
pub struct Minimizer {
    pub x: Vec<f64>,
    pub value: f64,
}

/// A benchmark objective: domain box, derivative capabilities, optional
/// minimizer metadata, and the evaluation kernel. Immutable after
/// construction; evaluation is reentrant.
#[derive(Debug, Clone)]
pub struct ObjectiveSpec {
    pub name: String,
    pub dim: usize,
    bounds: Vec<(f64, f64)>,
    pub minimizer: Option<Minimizer>,
    pub caps: DerivCaps,
    kernel: Kernel,
}

#[derive(Debug, Clone)]
enum Kernel {
    Biquartic { c: f64 },
    ModifiedRastrigin,
    Fi1d,
    Levy2,
    RastriginSep,
    Sphere,
    DoubleWell,
    PerturbedOscillatory { sign: f64, dim_scaled: bool },
    PerturbedAnnulus { center: Vec<f64>, strength: f64, radius: f64 },
    Expr(expr::Expr),
    Rotated(Box<RotatedSeparable>),
}

/// Rotated block-separable composite: `f(x) = sum_i g_i((U^T x)_block_i)`.
#[derive(Debug, Clone)]
pub struct RotatedSeparable {
    pub blocks: Vec<ObjectiveSpec>,
    block_offsets: Vec<usize>,
    pub dim: usize,
    /// Orthogonal d x d matrix, row-major.
    pub rotation: Vec<f64>,
}

impl ObjectiveSpec {
    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim
            && x.iter().zip(&self.bounds).all(|(v, (lo, hi))| *v >= *lo && *v <= *hi)
    }

    fn check_domain(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::Invalid(alloc::format!(
                "point has dimension {}, objective expects {}",
                x.len(),
                self.dim
            )));
        }
        for (axis, (v, (lo, hi))) in x.iter().zip(&self.bounds).enumerate() {
            if !(*v >= *lo && *v <= *hi) {
                return Err(Error::OutOfDomain { axis, value: *v, lo: *lo, hi: *hi });
            }
        }
        Ok(())
    }

    /// Evaluate at a point inside the domain box. Out-of-box points are an
    /// error, never clamped.
    pub fn eval(&self, x: &[f64], req: EvalRequest) -> Result<EvalBundle> {
        self.check_domain(x)?;
        Ok(self.eval_unchecked(x, req))
    }

    /// Convenience: value only.
    pub fn value(&self, x: &[f64]) -> Result<f64> {
        Ok(self.eval(x, EvalRequest::value())?.value)
    }

    /// Convenience: analytic-or-fallback gradient.
    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.eval(x, EvalRequest::gradient())?.gradient.unwrap())
    }

    /// Kernel evaluation without the domain check; finite-difference probe
    /// points just outside the box rely on this (all kernels are total
    /// functions).
    pub(crate) fn eval_unchecked(&self, x: &[f64], req: EvalRequest) -> EvalBundle {
        let mut out = self.kernel_eval(x, req);
        if req.gradient && out.gradient.is_none() {
            out.gradient = Some(self.fd_gradient(x));
        }
        if req.hessian && out.hessian.is_none() {
            out.hessian = Some(self.fd_hessian(x));
        }
        if req.laplacian && out.laplacian.is_none() {
            out.laplacian = if let Some(h) = &out.hessian {
                Some((0..self.dim).map(|i| h[i * self.dim + i]).sum())
            } else {
                Some(self.fd_laplacian(x))
            };
        }
        out
    }

    pub fn value_unchecked(&self, x: &[f64]) -> f64 {
        self.eval_unchecked(x, EvalRequest::value()).value
    }

    fn fd_step(xi: f64) -> f64 {
        f64::EPSILON.cbrt() * (1.0 + xi.abs())
    }

    // Second differences balance truncation against roundoff at eps^(1/4).
    fn fd_step2(xi: f64) -> f64 {
        f64::EPSILON.sqrt().sqrt() * (1.0 + xi.abs())
    }

    fn fd_gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.dim];
        let mut probe = x.to_vec();
        for i in 0..self.dim {
            let h = Self::fd_step(x[i]);
            probe[i] = x[i] + h;
            let fp = self.value_unchecked(&probe);
            probe[i] = x[i] - h;
            let fm = self.value_unchecked(&probe);
            probe[i] = x[i];
            g[i] = (fp - fm) / (2.0 * h);
        }
        g
    }

    fn fd_laplacian(&self, x: &[f64]) -> f64 {
        let f0 = self.value_unchecked(x);
        let mut lap = 0.0;
        let mut probe = x.to_vec();
        for i in 0..self.dim {
            let h = Self::fd_step2(x[i]);
            probe[i] = x[i] + h;
            let fp = self.value_unchecked(&probe);
            probe[i] = x[i] - h;
            let fm = self.value_unchecked(&probe);
            probe[i] = x[i];
            lap += (fp - 2.0 * f0 + fm) / (h * h);
        }
        lap
    }

    fn fd_hessian(&self, x: &[f64]) -> Vec<f64> {
        let d = self.dim;
        let mut hess = vec![0.0; d * d];
        let f0 = self.value_unchecked(x);
        let mut probe = x.to_vec();
        for i in 0..d {
            let hi = Self::fd_step2(x[i]);
            probe[i] = x[i] + hi;
            let fp = self.value_unchecked(&probe);
            probe[i] = x[i] - hi;
            let fm = self.value_unchecked(&probe);
            probe[i] = x[i];
            hess[i * d + i] = (fp - 2.0 * f0 + fm) / (hi * hi);
            for j in i + 1..d {
                let hj = Self::fd_step2(x[j]);
                probe[i] = x[i] + hi;
                probe[j] = x[j] + hj;
                let fpp = self.value_unchecked(&probe);
                probe[j] = x[j] - hj;
                let fpm = self.value_unchecked(&probe);
                probe[i] = x[i] - hi;
                let fmm = self.value_unchecked(&probe);
                probe[j] = x[j] + hj;
                let fmp = self.value_unchecked(&probe);
                probe[i] = x[i];
                probe[j] = x[j];
                let v = (fpp - fpm - fmp + fmm) / (4.0 * hi * hj);
                hess[i * d + j] = v;
                hess[j * d + i] = v;
            }
        }
        hess
    }

    fn kernel_eval(&self, x: &[f64], req: EvalRequest) -> EvalBundle {
        match &self.kernel {
            Kernel::Biquartic { c } => biquartic_eval(x[0], *c, req),
            Kernel::ModifiedRastrigin => mod_rastrigin_eval(x, req, true),
            Kernel::Fi1d => mod_rastrigin_eval(x, req, false),
            Kernel::Levy2 => levy2_eval(x, req),
            Kernel::RastriginSep => rastrigin_eval(x, req),
            Kernel::Sphere => sphere_eval(x, req),
            Kernel::DoubleWell => double_well_eval(x[0], req),
            Kernel::PerturbedOscillatory { sign, dim_scaled } => {
                perturbed_osc_eval(x, *sign, *dim_scaled, req)
            }
            Kernel::PerturbedAnnulus { center, strength, radius } => {
                perturbed_annulus_eval(x, center, *strength, *radius, req)
            }
            Kernel::Expr(e) => {
                EvalBundle { value: e.eval(x), gradient: None, hessian: None, laplacian: None }
            }
            Kernel::Rotated(rs) => rs.eval_unchecked(x, req),
        }
    }

    /// The rotated-separable payload, when this objective is one.
    pub fn as_rotated(&self) -> Option<&RotatedSeparable> {
        match &self.kernel {
            Kernel::Rotated(rs) => Some(rs),
            _ => None,
        }
    }

    /// Deterministic quasi-random interior samples (shrunk slightly away
    /// from the box faces).
    pub fn quasi_samples(&self, n: usize, shrink: f64) -> Vec<Vec<f64>> {
        let mut seq = QuasiRandom::new(self.dim);
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let u = seq.next_point();
            let x: Vec<f64> = u
                .iter()
                .zip(&self.bounds)
                .map(|(t, (lo, hi))| {
                    let half = 0.5 * (hi - lo) * (1.0 - shrink);
                    let mid = 0.5 * (lo + hi);
                    mid + (2.0 * t - 1.0) * half
                })
                .collect();
            out.push(x);
        }
        out
    }
}

// ---------------------------------------------------------------------------
// kernels

fn biquartic_eval(x: f64, c: f64, req: EvalRequest) -> EvalBundle {
    let s = x - 1.0 / 32.0;
    let value = x * x * x * x - s * s + c;
    let gradient = req.gradient.then(|| vec![4.0 * x * x * x - 2.0 * s]);
    let h = 12.0 * x * x - 2.0;
    EvalBundle {
        value,
        gradient,
        hessian: req.hessian.then(|| vec![h]),
        laplacian: req.laplacian.then_some(h),
    }
}

/// Polynomial part of the modified Rastrigin coordinate function,
/// p(x) = x^2((x^2-1)^2+4)((x^2-4)^2+1/8), expanded in u = x^2.
fn mr_poly(x: f64) -> (f64, f64, f64) {
    let u = x * x;
    let p = ((((u - 10.0) * u + 37.125) * u - 72.25) * u + 80.625) * u;
    let dp = x * ((((10.0 * u - 80.0) * u + 222.75) * u - 289.0) * u + 161.25);
    let ddp = (((90.0 * u - 560.0) * u + 1113.75) * u - 867.0) * u + 161.25;
    (p, dp, ddp)
}

fn mod_rastrigin_eval(x: &[f64], req: EvalRequest, offset: bool) -> EvalBundle {
    let d = x.len();
    let mut value = if offset { 10.0 * d as f64 } else { 0.0 };
    let mut grad = req.gradient.then(|| vec![0.0; d]);
    let mut hess = req.hessian.then(|| vec![0.0; d * d]);
    let mut lap = 0.0;
    for (i, &xi) in x.iter().enumerate() {
        let (p, dp, ddp) = mr_poly(xi);
        let two_pi_x = 2.0 * PI * xi;
        value += p - 100.0 * two_pi_x.cos();
        let second = ddp + 400.0 * PI * PI * two_pi_x.cos();
        if let Some(g) = grad.as_mut() {
            g[i] = dp + 200.0 * PI * two_pi_x.sin();
        }
        if let Some(h) = hess.as_mut() {
            h[i * d + i] = second;
        }
        lap += second;
    }
    EvalBundle { value, gradient: grad, hessian: hess, laplacian: req.laplacian.then_some(lap) }
}

fn levy2_eval(x: &[f64], req: EvalRequest) -> EvalBundle {
    let w1 = 1.0 + (x[0] - 1.0) / 4.0;
    let w2 = 1.0 + (x[1] - 1.0) / 4.0;
    // a(w) = sin^2(pi w) + (w-1)^2 (1 + 10 sin^2(pi w + 1))
    let sa = (PI * w1).sin();
    let s1 = (PI * w1 + 1.0).sin();
    let a = sa * sa + (w1 - 1.0) * (w1 - 1.0) * (1.0 + 10.0 * s1 * s1);
    // b(w) = (w-1)^2 (1 + sin^2(2 pi w))
    let s2 = (2.0 * PI * w2).sin();
    let b = (w2 - 1.0) * (w2 - 1.0) * (1.0 + s2 * s2);
    let value = a + b;
    let need_first = req.gradient;
    let need_second = req.hessian || req.laplacian;
    let mut gradient = None;
    let mut hessian = None;
    let mut laplacian = None;
    if need_first || need_second {
        let da = PI * (2.0 * PI * w1).sin()
            + 2.0 * (w1 - 1.0) * (1.0 + 10.0 * s1 * s1)
            + 10.0 * PI * (w1 - 1.0) * (w1 - 1.0) * (2.0 * PI * w1 + 2.0).sin();
        let db = 2.0 * (w2 - 1.0) * (1.0 + s2 * s2)
            + 2.0 * PI * (w2 - 1.0) * (w2 - 1.0) * (4.0 * PI * w2).sin();
        if need_first {
            gradient = Some(vec![da / 4.0, db / 4.0]);
        }
        if need_second {
            let dda = 2.0 * PI * PI * (2.0 * PI * w1).cos()
                + 2.0
                + 20.0 * s1 * s1
                + 40.0 * PI * (w1 - 1.0) * (2.0 * PI * w1 + 2.0).sin()
                + 20.0 * PI * PI * (w1 - 1.0) * (w1 - 1.0) * (2.0 * PI * w1 + 2.0).cos();
            let ddb = 2.0
                + 2.0 * s2 * s2
                + 8.0 * PI * (w2 - 1.0) * (4.0 * PI * w2).sin()
                + 8.0 * PI * PI * (w2 - 1.0) * (w2 - 1.0) * (4.0 * PI * w2).cos();
            let fxx = dda / 16.0;
            let fyy = ddb / 16.0;
            if req.hessian {
                hessian = Some(vec![fxx, 0.0, 0.0, fyy]);
            }
            if req.laplacian {
                laplacian = Some(fxx + fyy);
            }
        }
    }
    EvalBundle { value, gradient, hessian, laplacian }
}

fn rastrigin_eval(x: &[f64], req: EvalRequest) -> EvalBundle {
    let d = x.len();
    let mut value = 10.0 * d as f64;
    let mut grad = req.gradient.then(|| vec![0.0; d]);
    let mut hess = req.hessian.then(|| vec![0.0; d * d]);
    let mut lap = 0.0;
    for (i, &xi) in x.iter().enumerate() {
        let t = 2.0 * PI * xi;
        value += xi * xi - 10.0 * t.cos();
        let second = 2.0 + 40.0 * PI * PI * t.cos();
        if let Some(g) = grad.as_mut() {
            g[i] = 2.0 * xi + 20.0 * PI * t.sin();
        }
        if let Some(h) = hess.as_mut() {
            h[i * d + i] = second;
        }
        lap += second;
    }
    EvalBundle { value, gradient: grad, hessian: hess, laplacian: req.laplacian.then_some(lap) }
}

fn sphere_eval(x: &[f64], req: EvalRequest) -> EvalBundle {
    let d = x.len();
    let value = linalg::dot(x, x);
    let gradient = req.gradient.then(|| x.iter().map(|v| 2.0 * v).collect());
    let hessian = req.hessian.then(|| {
        let mut h = vec![0.0; d * d];
        for i in 0..d {
            h[i * d + i] = 2.0;
        }
        h
    });
    EvalBundle { value, gradient, hessian, laplacian: req.laplacian.then_some(2.0 * d as f64) }
}

fn double_well_eval(x: f64, req: EvalRequest) -> EvalBundle {
    let t = x * x - 1.0;
    let h = 12.0 * x * x - 4.0;
    EvalBundle {
        value: t * t,
        gradient: req.gradient.then(|| vec![4.0 * x * t]),
        hessian: req.hessian.then(|| vec![h]),
        laplacian: req.laplacian.then_some(h),
    }
}

fn perturbed_osc_eval(x: &[f64], sign: f64, dim_scaled: bool, req: EvalRequest) -> EvalBundle {
    let d = x.len();
    let scale = if dim_scaled { d as f64 } else { 1.0 };
    let r2 = linalg::dot(x, x);
    let r = r2.sqrt();
    let u = scale * r2;
    let value = r2 + sign * (r / scale) * u.sin();
    let gradient = req.gradient.then(|| perturbed_osc_gradient(x, sign, scale, r, u));
    let laplacian = req.laplacian.then(|| {
        if r < 1e-150 {
            2.0 * d as f64
        } else {
            let sinu = u.sin();
            let cosu = u.cos();
            2.0 * d as f64
                + sign
                    * (6.0 * r * cosu - 4.0 * scale * r * r2 * sinu
                        + (d as f64 - 1.0) * (sinu / (scale * r) + 2.0 * r * cosu))
        }
    });
    EvalBundle { value, gradient, hessian: None, laplacian }
}

fn perturbed_osc_gradient(x: &[f64], sign: f64, scale: f64, r: f64, u: f64) -> Vec<f64> {
    if r < 1e-150 {
        return x.iter().map(|&xi| 2.0 * xi).collect();
    }
    // d/dx_i of (r/s) sin(s r^2) = x_i [sin(u)/(s r) + 2 r cos(u)]
    let radial = u.sin() / (scale * r) + 2.0 * r * u.cos();
    x.iter().map(|&xi| 2.0 * xi + sign * xi * radial).collect()
}

fn perturbed_annulus_eval(
    x: &[f64],
    center: &[f64],
    strength: f64,
    radius: f64,
    req: EvalRequest,
) -> EvalBundle {
    let d = x.len();
    let df = d as f64;
    let rel: Vec<f64> = x.iter().zip(center).map(|(a, b)| a - b).collect();
    let r2 = linalg::dot(&rel, &rel);
    let quad = 0.5 * strength * r2;
    if r2 <= radius * radius {
        let gradient = req.gradient.then(|| rel.iter().map(|v| strength * v).collect());
        let hessian = req.hessian.then(|| {
            let mut h = vec![0.0; d * d];
            for i in 0..d {
                h[i * d + i] = strength;
            }
            h
        });
        return EvalBundle {
            value: quad,
            gradient,
            hessian,
            laplacian: req.laplacian.then_some(strength * df),
        };
    }
    // Outside the ball: direction weight h == 1 (documented default).
    let u = df * (r2 - radius * radius) / 2.0;
    let value = quad + u.sin() + 1.0;
    let gradient =
        req.gradient.then(|| rel.iter().map(|v| (strength + df * u.cos()) * v).collect());
    let hessian = req.hessian.then(|| {
        let mut h = vec![0.0; d * d];
        let a = strength + df * u.cos();
        let b = -df * df * u.sin();
        for i in 0..d {
            h[i * d + i] = a;
            for j in 0..d {
                h[i * d + j] += b * rel[i] * rel[j];
            }
        }
        h
    });
    let laplacian =
        req.laplacian.then(|| strength * df - df * df * r2 * u.sin() + df * df * u.cos());
    EvalBundle { value, gradient, hessian, laplacian }
}

impl RotatedSeparable {
    /// z = U^T x
    pub fn to_block_coords(&self, x: &[f64]) -> Vec<f64> {
        let d = self.dim;
        let mut z = vec![0.0; d];
        for j in 0..d {
            let mut s = 0.0;
            for i in 0..d {
                s += self.rotation[i * d + j] * x[i];
            }
            z[j] = s;
        }
        z
    }

    /// x = U z
    pub fn from_block_coords(&self, z: &[f64]) -> Vec<f64> {
        let d = self.dim;
        let mut x = vec![0.0; d];
        for i in 0..d {
            let mut s = 0.0;
            for j in 0..d {
                s += self.rotation[i * d + j] * z[j];
            }
            x[i] = s;
        }
        x
    }

    fn eval_unchecked(&self, x: &[f64], req: EvalRequest) -> EvalBundle {
        let d = self.dim;
        let z = self.to_block_coords(x);
        let mut value = 0.0;
        let inner_req = EvalRequest {
            gradient: req.gradient,
            hessian: req.hessian,
            laplacian: req.laplacian,
        };
        let mut grad_z = req.gradient.then(|| vec![0.0; d]);
        let mut hess_z = req.hessian.then(|| vec![0.0; d * d]);
        let mut lap = 0.0;
        for (block, &off) in self.blocks.iter().zip(&self.block_offsets) {
            let bd = block.dim;
            let zb = &z[off..off + bd];
            let out = block.eval_unchecked(zb, inner_req);
            value += out.value;
            if let (Some(gz), Some(g)) = (grad_z.as_mut(), out.gradient.as_ref()) {
                gz[off..off + bd].copy_from_slice(g);
            }
            if let (Some(hz), Some(h)) = (hess_z.as_mut(), out.hessian.as_ref()) {
                for a in 0..bd {
                    for b in 0..bd {
                        hz[(off + a) * d + (off + b)] = h[a * bd + b];
                    }
                }
            }
            if let Some(l) = out.laplacian {
                lap += l;
            }
        }
        let gradient = grad_z.map(|gz| self.from_block_coords(&gz));
        let hessian = hess_z.map(|hz| {
            // U H U^T
            let mut tmp = vec![0.0; d * d];
            for i in 0..d {
                for k in 0..d {
                    let mut s = 0.0;
                    for j in 0..d {
                        s += self.rotation[i * d + j] * hz[j * d + k];
                    }
                    tmp[i * d + k] = s;
                }
            }
            let mut out = vec![0.0; d * d];
            for i in 0..d {
                for k in 0..d {
                    let mut s = 0.0;
                    for j in 0..d {
                        s += tmp[i * d + j] * self.rotation[k * d + j];
                    }
                    out[i * d + k] = s;
                }
            }
            out
        });
        EvalBundle {
            value,
            gradient,
            hessian,
            laplacian: req.laplacian.then_some(lap),
        }
    }

    /// Max deviation of U^T U from the identity.
    pub fn orthogonality_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let mut s = 0.0;
                for k in 0..d {
                    s += self.rotation[k * d + i] * self.rotation[k * d + j];
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((s - expect).abs());
            }
        }
        worst
    }
}

// ---------------------------------------------------------------------------
// constructors

/// 1D asymmetric double well `x^4 - (x - 1/32)^2 + c` on [-2, 2], with `c`
/// computed at construction so the global minimum value is exactly 0.
pub fn make_biquartic() -> ObjectiveSpec {
    // Global minimizer: the negative root of 4x^3 - 2x + 1/16.
    let dfd = |x: f64| 4.0 * x * x * x - 2.0 * (x - 1.0 / 32.0);
    let mut lo = -1.0;
    let mut hi = -0.5;
    debug_assert!(dfd(lo) < 0.0 && dfd(hi) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if dfd(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let xstar = 0.5 * (lo + hi);
    let s = xstar - 1.0 / 32.0;
    let c = s * s - xstar * xstar * xstar * xstar;
    ObjectiveSpec {
        name: String::from("biquartic"),
        dim: 1,
        bounds: vec![(-2.0, 2.0)],
        minimizer: Some(Minimizer { x: vec![xstar], value: 0.0 }),
        caps: DerivCaps { gradient: true, hessian: true, laplacian: true },
        kernel: Kernel::Biquartic { c },
    }
}

/// Modified Rastrigin on [-3, 3]^d:
/// `10d + sum_i [x_i^2((x_i^2-1)^2+4)((x_i^2-4)^2+1/8) - 100cos(2 pi x_i)]`.
pub fn make_modified_rastrigin(d: usize) -> ObjectiveSpec {
    assert!(d >= 1);
    ObjectiveSpec {
        name: alloc::format!("modified-rastrigin-{d}d"),
        dim: d,
        bounds: vec![(-3.0, 3.0); d],
        minimizer: Some(Minimizer { x: vec![0.0; d], value: -90.0 * d as f64 }),
        caps: DerivCaps { gradient: true, hessian: true, laplacian: true },
        kernel: Kernel::ModifiedRastrigin,
    }
}

/// One coordinate of the modified Rastrigin sum (no `10d` offset), on [-3, 3].
pub fn make_fi_1d() -> ObjectiveSpec {
    ObjectiveSpec {
        name: String::from("fi-1d"),
        dim: 1,
        bounds: vec![(-3.0, 3.0)],
        minimizer: Some(Minimizer { x: vec![0.0], value: -100.0 }),
        caps: DerivCaps { gradient: true, hessian: true, laplacian: true },
        kernel: Kernel::Fi1d,
    }
}

/// 2D Levy function on [-10, 10]^2 with global minimum 0 at (1, 1).
pub fn make_levy2() -> ObjectiveSpec {
    ObjectiveSpec {
        name: String::from("levy2"),
        dim: 2,
        bounds: vec![(-10.0, 10.0); 2],
        minimizer: Some(Minimizer { x: vec![1.0, 1.0], value: 0.0 }),
        caps: DerivCaps { gradient: true, hessian: true, laplacian: true },
        kernel: Kernel::Levy2,
    }
}

/// Separable Rastrigin `10d + sum_i [x_i^2 - 10 cos(2 pi x_i)]` on
/// [-5.12, 5.12]^d.
pub fn make_rastrigin_sep(d: usize) -> ObjectiveSpec {
    assert!(d >= 1);
    ObjectiveSpec {
        name: alloc::format!("rastrigin-sep-{d}d"),
        dim: d,
        bounds: vec![(-5.12, 5.12); d],
        minimizer: Some(Minimizer { x: vec![0.0; d], value: 0.0 }),
        caps: DerivCaps { gradient: true, hessian: true, laplacian: true },
        kernel: Kernel::RastriginSep,
    }
}

/// Convex reference `‖x‖^2` on [-12, 12]^d.
pub fn make_sphere(d: usize) -> ObjectiveSpec {
    assert!(d >= 1);
    ObjectiveSpec {
        name: alloc::format!("sphere-{d}d"),
        dim: d,
        bounds: vec![(-12.0, 12.0); d],
        minimizer: Some(Minimizer { x: vec![0.0; d], value: 0.0 }),
        caps: DerivCaps { gradient: true, hessian: true, laplacian: true },
        kernel: Kernel::Sphere,
    }
}

/// Symmetric double well `(x^2-1)^2` on [-2, 2]; the two global minima are
/// degenerate, metadata records the positive one.
pub fn make_double_well() -> ObjectiveSpec {
    ObjectiveSpec {
        name: String::from("double-well"),
        dim: 1,
        bounds: vec![(-2.0, 2.0)],
        minimizer: Some(Minimizer { x: vec![1.0], value: 0.0 }),
        caps: DerivCaps { gradient: true, hessian: true, laplacian: true },
        kernel: Kernel::DoubleWell,
    }
}

/// Which perturbed-convex construction to build.
#[derive(Debug, Clone, Copy)]
pub enum PerturbedKind {
    /// `‖x‖^2 + sign * (‖x‖/s) sin(s‖x‖^2)` with `s = d` when `dim_scaled`
    /// (the equation form) or `s = 1` (the figure form). Defaults follow the
    /// equation: sign = -1, dim_scaled = true.
    Oscillatory { sign: f64, dim_scaled: bool },
    /// Piecewise: quadratic bowl inside a ball, sinusoidal annulus ring
    /// outside, minimum at `center`.
    Annulus { strength: f64 },
}

impl Default for PerturbedKind {
    fn default() -> Self {
        PerturbedKind::Oscillatory { sign: -1.0, dim_scaled: true }
    }
}

/// Strongly convex base plus nonconvex perturbation on [-R, R]^d with
/// R = 3 sqrt(d ln(d+1)).
pub fn make_perturbed_convex(d: usize, kind: PerturbedKind) -> ObjectiveSpec {
    assert!(d >= 1);
    let df = d as f64;
    let r_box = 3.0 * (df * (df + 1.0).ln()).sqrt();
    match kind {
        PerturbedKind::Oscillatory { sign, dim_scaled } => ObjectiveSpec {
            name: alloc::format!("perturbed-oscillatory-{d}d"),
            dim: d,
            bounds: vec![(-r_box, r_box); d],
            minimizer: Some(Minimizer { x: vec![0.0; d], value: 0.0 }),
            caps: DerivCaps { gradient: true, hessian: false, laplacian: true },
            kernel: Kernel::PerturbedOscillatory { sign, dim_scaled },
        },
        PerturbedKind::Annulus { strength } => ObjectiveSpec {
            name: alloc::format!("perturbed-annulus-{d}d"),
            dim: d,
            bounds: vec![(-r_box, r_box); d],
            minimizer: Some(Minimizer { x: vec![0.0; d], value: 0.0 }),
            caps: DerivCaps { gradient: true, hessian: true, laplacian: true },
            kernel: Kernel::PerturbedAnnulus {
                center: vec![0.0; d],
                strength,
                radius: 0.5 * r_box,
            },
        },
    }
}

/// Custom objective from an expression string; derivatives by finite
/// differences.
pub fn make_expression(
    name: &str,
    dim: usize,
    bounds: Vec<(f64, f64)>,
    expression: &str,
    minimizer: Option<Minimizer>,
) -> Result<ObjectiveSpec> {
    if bounds.len() != dim {
        return Err(Error::Invalid(String::from("bounds length must equal dimension")));
    }
    for (lo, hi) in &bounds {
        if !(lo < hi) {
            return Err(Error::Invalid(String::from("each bound needs lower < upper")));
        }
    }
    let e = expr::Expr::parse(expression, dim)?;
    Ok(ObjectiveSpec {
        name: String::from(name),
        dim,
        bounds,
        minimizer,
        caps: DerivCaps::default(),
        kernel: Kernel::Expr(e),
    })
}

/// Compose blocks into a rotated block-separable objective with a
/// Haar-random rotation drawn from `seed`.
pub fn compose_rotated_blocks(blocks: Vec<ObjectiveSpec>, seed: u64) -> ObjectiveSpec {
    let d: usize = blocks.iter().map(|b| b.dim).sum();
    let mut rng = crate::rng::stream(seed);
    let u = linalg::haar_orthogonal(d, &mut rng);
    compose_with_rotation(blocks, u)
}

/// Compose blocks with an explicit orthogonal matrix (row-major d x d).
pub fn compose_with_rotation(blocks: Vec<ObjectiveSpec>, rotation: Vec<f64>) -> ObjectiveSpec {
    let d: usize = blocks.iter().map(|b| b.dim).sum();
    assert_eq!(rotation.len(), d * d);
    let mut offsets = Vec::with_capacity(blocks.len());
    let mut off = 0;
    for b in &blocks {
        offsets.push(off);
        off += b.dim;
    }
    let caps = DerivCaps {
        gradient: blocks.iter().all(|b| b.caps.gradient),
        hessian: blocks.iter().all(|b| b.caps.hessian),
        laplacian: blocks.iter().all(|b| b.caps.laplacian),
    };
    // Minimizer in block coordinates, rotated forward.
    let minimizer = blocks
        .iter()
        .map(|b| b.minimizer.as_ref())
        .collect::<Option<Vec<_>>>()
        .map(|ms| {
            let mut z = Vec::with_capacity(d);
            let mut value = 0.0;
            for m in ms {
                z.extend_from_slice(&m.x);
                value += m.value;
            }
            (z, value)
        });
    // A box large enough to contain the rotated image of the block product
    // box: per-axis radius sqrt(d) * max block half-width.
    let max_hw = blocks
        .iter()
        .flat_map(|b| b.bounds.iter())
        .map(|(lo, hi)| 0.5 * (hi - lo))
        .fold(0.0f64, f64::max);
    let r = (d as f64).sqrt() * max_hw;
    let name = alloc::format!("rotated-{}blocks-{d}d", blocks.len());
    let rs = RotatedSeparable { blocks, block_offsets: offsets, dim: d, rotation };
    let minimizer = minimizer.map(|(z, value)| Minimizer { x: rs.from_block_coords(&z), value });
    ObjectiveSpec {
        name,
        dim: d,
        bounds: vec![(-r, r); d],
        minimizer,
        caps,
        kernel: Kernel::Rotated(Box::new(rs)),
    }
}

/// Builtin lookup for the CLI and config files.
pub fn builtin(name: &str, dim: usize) -> Option<ObjectiveSpec> {
    match name {
        "biquartic" => Some(make_biquartic()),
        "modified-rastrigin" => Some(make_modified_rastrigin(dim.max(1))),
        "fi-1d" => Some(make_fi_1d()),
        "levy2" => Some(make_levy2()),
        "rastrigin-sep" => Some(make_rastrigin_sep(dim.max(1))),
        "sphere" => Some(make_sphere(dim.max(1))),
        "double-well" => Some(make_double_well()),
        "perturbed-oscillatory" => {
            Some(make_perturbed_convex(dim.max(1), PerturbedKind::default()))
        }
        "perturbed-annulus" => {
            Some(make_perturbed_convex(dim.max(1), PerturbedKind::Annulus { strength: 1.0 }))
        }
        "biquartic-sep" => {
            let blocks: Vec<ObjectiveSpec> = (0..dim.max(1)).map(|_| make_biquartic()).collect();
            let d = blocks.len();
            let mut eye = vec![0.0; d * d];
            for i in 0..d {
                eye[i * d + i] = 1.0;
            }
            let mut spec = compose_with_rotation(blocks, eye);
            spec.name = alloc::format!("biquartic-sep-{d}d");
            Some(spec)
        }
        _ => None,
    }
}

/// Names `builtin` accepts.
pub const BUILTIN_NAMES: &[&str] = &[
    "biquartic",
    "modified-rastrigin",
    "fi-1d",
    "levy2",
    "rastrigin-sep",
    "sphere",
    "double-well",
    "perturbed-oscillatory",
    "perturbed-annulus",
    "biquartic-sep",
];

// ---------------------------------------------------------------------------
// verification helpers

/// Finite-difference audit of the analytic derivatives.
#[derive(Debug, Clone)]
pub struct FdReport {
    pub points: usize,
    pub max_gradient_rel_err: f64,
    pub max_laplacian_rel_err: f64,
}

/// Compare analytic gradient and Laplacian against central differences over
/// quasi-random interior samples. Requires analytic derivative caps.
pub fn fd_check(spec: &ObjectiveSpec, n_points: usize) -> Result<FdReport> {
    if !spec.caps.gradient {
        return Err(Error::Invalid(String::from("objective has no analytic gradient")));
    }
    let mut worst_g: f64 = 0.0;
    let mut worst_l: f64 = 0.0;
    for x in spec.quasi_samples(n_points, 0.1) {
        let out = spec.eval_unchecked(
            &x,
            EvalRequest { gradient: true, hessian: false, laplacian: spec.caps.laplacian },
        );
        let g = out.gradient.as_ref().unwrap();
        let g_fd = spec.fd_gradient(&x);
        let gn = linalg::norm2(&g_fd).max(1.0);
        for (a, b) in g.iter().zip(&g_fd) {
            worst_g = worst_g.max((a - b).abs() / gn);
        }
        if spec.caps.laplacian {
            let l = out.laplacian.unwrap();
            let l_fd = spec.fd_laplacian(&x);
            worst_l = worst_l.max((l - l_fd).abs() / l_fd.abs().max(1.0));
        }
    }
    Ok(FdReport {
        points: n_points,
        max_gradient_rel_err: worst_g,
        max_laplacian_rel_err: worst_l,
    })
}

/// Certify the recorded minimizer against quasi-random box samples:
/// returns the largest violation `f(x*) - f(sample)` (non-positive means the
/// metadata survived).
pub fn certify_minimizer(spec: &ObjectiveSpec, n_samples: usize) -> Result<f64> {
    let m = spec.minimizer.as_ref().ok_or(Error::MissingMinimizer)?;
    let f_star = spec.value_unchecked(&m.x);
    if (f_star - m.value).abs() > 1e-8 * (1.0 + m.value.abs()) {
        return Ok(f64::INFINITY);
    }
    let mut worst = f64::NEG_INFINITY;
    for x in spec.quasi_samples(n_samples, 0.0) {
        worst = worst.max(f_star - spec.value_unchecked(&x));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_scan_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> (f64, f64) {
        let mut best_x = lo;
        let mut best_f = f64::INFINITY;
        for i in 0..=n {
            let x = lo + (hi - lo) * i as f64 / n as f64;
            let v = f(x);
            if v < best_f {
                best_f = v;
                best_x = x;
            }
        }
        (best_x, best_f)
    }

    /// Derived oracle: refine a bracketed root of `g` by bisection.
    fn bisect_root(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        assert!(g(lo) * g(hi) < 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(lo) * g(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn trivial_values() {
        let ras = make_rastrigin_sep(2);
        assert_eq!(ras.value(&[0.0, 0.0]).unwrap(), 0.0);
        let levy = make_levy2();
        assert!(levy.value(&[1.0, 1.0]).unwrap().abs() < 1e-14);
        let mr1 = make_modified_rastrigin(1);
        assert!((mr1.value(&[0.0]).unwrap() + 90.0).abs() < 1e-12);
        let mr2 = make_modified_rastrigin(2);
        assert!((mr2.value(&[0.0, 0.0]).unwrap() + 180.0).abs() < 1e-12);
        let fi = make_fi_1d();
        assert!((fi.value(&[0.0]).unwrap() + 100.0).abs() < 1e-12);
    }

    #[test]
    fn biquartic_constant_and_minimizer() {
        let spec = make_biquartic();
        let m = spec.minimizer.clone().unwrap();
        // Global minimizer location reported by the paper: around -0.7.
        assert!((m.x[0] + 0.7).abs() < 0.05, "x* = {}", m.x[0]);
        assert!(spec.value(&m.x).unwrap().abs() < 1e-14);
        // Derived oracle: dense scan plus bisection of the derivative.
        let c = match spec.kernel {
            Kernel::Biquartic { c } => c,
            _ => unreachable!(),
        };
        let f = |x: f64| x.powi(4) - (x - 1.0 / 32.0).powi(2) + c;
        let df = |x: f64| 4.0 * x * x * x - 2.0 * (x - 1.0 / 32.0);
        let (scan_x, _) = dense_scan_min(f, -2.0, 2.0, 1_000_000);
        let refined = bisect_root(df, scan_x - 4.0 / 1_000_000.0, scan_x + 4.0 / 1_000_000.0);
        assert!((refined - m.x[0]).abs() < 1e-12);
        assert!((f(refined) - 0.0).abs() < 1e-14);
        // c close to the figure's 0.296
        assert!((c - 0.296).abs() < 5e-4, "c = {c}");
    }

    #[test]
    fn fi_critical_point_count_matches_scan() {
        let fi = make_fi_1d();
        // Independent oracle: sign changes of the derivative over a dense scan.
        let n = 1_000_000;
        let mut count = 0;
        let mut prev = None;
        for i in 0..=n {
            let x = -3.0 + 6.0 * i as f64 / n as f64;
            let g = fi.gradient(&[x]).unwrap()[0];
            if let Some(p) = prev {
                if (p < 0.0) != (g < 0.0) {
                    count += 1;
                }
            }
            prev = Some(g);
        }
        // Minima at 0, +-1, +-2 plus the four maxima between them; the
        // polynomial envelope swamps the cosine beyond |x| ~ 2.2, so no
        // critical pairs survive near the box edge.
        assert_eq!(count, 9, "critical point count on [-3,3]");
    }

    #[test]
    fn perturbed_oscillatory_values() {
        let spec = make_perturbed_convex(2, PerturbedKind::default());
        let v = spec.value(&[1.0, 0.0]).unwrap();
        let expect = 1.0 - 0.5 * (2.0f64).sin();
        assert!((v - expect).abs() < 1e-14, "{v} vs {expect}");
        assert_eq!(spec.value(&[0.0, 0.0]).unwrap(), 0.0);
        // Figure-caption variant: positive sign, no dimension scaling.
        let fig = make_perturbed_convex(2, PerturbedKind::Oscillatory { sign: 1.0, dim_scaled: false });
        let vf = fig.value(&[1.0, 0.0]).unwrap();
        assert!((vf - (1.0 + (1.0f64).sin())).abs() < 1e-14);
    }

    #[test]
    fn annulus_strongly_convex_inside_ball() {
        let spec = make_perturbed_convex(3, PerturbedKind::Annulus { strength: 2.0 });
        let radius = match &spec.kernel {
            Kernel::PerturbedAnnulus { radius, .. } => *radius,
            _ => unreachable!(),
        };
        // Hessian eigenvalue scan strictly inside the ball.
        for x in spec.quasi_samples(200, 0.0) {
            let r = linalg::norm2(&x);
            if r >= 0.95 * radius {
                continue;
            }
            let h = spec.eval(&x, EvalRequest { hessian: true, ..Default::default() }).unwrap();
            let (vals, _) = linalg::jacobi_eigen(h.hessian.as_ref().unwrap(), 3);
            assert!(vals[0] > 1.9, "hessian eigenvalue {} at r={r}", vals[0]);
        }
    }

    #[test]
    fn out_of_domain_is_an_error() {
        let spec = make_biquartic();
        match spec.value(&[2.5]) {
            Err(Error::OutOfDomain { axis: 0, .. }) => {}
            other => panic!("expected OutOfDomain, got {other:?}"),
        }
    }

    #[test]
    fn fd_check_builtins() {
        let biq = make_biquartic();
        let rep = fd_check(&biq, 100).unwrap();
        assert!(rep.max_gradient_rel_err < 1e-6, "{rep:?}");
        let sphere = make_sphere(3);
        let out = sphere.eval(&[0.3, -0.2, 1.0], EvalRequest::full()).unwrap();
        let h = out.hessian.unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 2.0 } else { 0.0 };
                assert_eq!(h[i * 3 + j], expect);
            }
        }
        assert_eq!(out.laplacian.unwrap(), 6.0);
        let levy = make_levy2();
        let rep = fd_check(&levy, 100).unwrap();
        assert!(rep.max_gradient_rel_err < 1e-5, "{rep:?}");
        // Second differences carry O(h^2 f_4) truncation; on the Levy box
        // that floors near 1e-4, which is what the oracle itself delivers.
        assert!(rep.max_laplacian_rel_err < 1e-3, "{rep:?}");
        let mr = make_modified_rastrigin(2);
        let rep = fd_check(&mr, 100).unwrap();
        assert!(rep.max_gradient_rel_err < 1e-5, "{rep:?}");
        let per = make_perturbed_convex(3, PerturbedKind::default());
        let rep = fd_check(&per, 100).unwrap();
        assert!(rep.max_gradient_rel_err < 1e-5, "{rep:?}");
        assert!(rep.max_laplacian_rel_err < 1e-3, "{rep:?}");
    }

    #[test]
    fn laplacian_equals_hessian_trace() {
        for name in BUILTIN_NAMES {
            let spec = builtin(name, 2).unwrap();
            if !(spec.caps.hessian && spec.caps.laplacian) {
                continue;
            }
            for x in spec.quasi_samples(20, 0.05) {
                let out = spec.eval(&x, EvalRequest::full()).unwrap();
                let h = out.hessian.unwrap();
                let tr: f64 = (0..spec.dim).map(|i| h[i * spec.dim + i]).sum();
                let lap = out.laplacian.unwrap();
                assert!(
                    (tr - lap).abs() <= 1e-10 * lap.abs().max(1.0),
                    "{name}: trace {tr} vs laplacian {lap}"
                );
            }
        }
    }

    #[test]
    fn builtin_minimizers_beat_quasi_samples() {
        for name in BUILTIN_NAMES {
            let spec = builtin(name, 3).unwrap();
            let worst = certify_minimizer(&spec, 10_000).unwrap();
            assert!(worst <= 1e-9, "{name}: minimizer violated by {worst}");
        }
    }

    #[test]
    fn rotated_composition() {
        // Identity rotation, single block: evaluation matches the block.
        let block = make_biquartic();
        let spec = compose_with_rotation(vec![block.clone()], vec![1.0]);
        for x in [-1.0, 0.3, 0.9] {
            assert!((spec.value(&[x]).unwrap() - block.value(&[x]).unwrap()).abs() < 1e-15);
        }
        // Haar rotation: orthogonality and value decomposition.
        let blocks = vec![make_biquartic(), make_biquartic(), make_sphere(2)];
        let spec = compose_rotated_blocks(blocks, 42);
        let rs = spec.as_rotated().unwrap();
        assert!(rs.orthogonality_defect() <= 1e-12);
        for x in spec.quasi_samples(50, 0.5) {
            let z = rs.to_block_coords(&x);
            let direct = rs.blocks[0].value_unchecked(&z[0..1])
                + rs.blocks[1].value_unchecked(&z[1..2])
                + rs.blocks[2].value_unchecked(&z[2..4]);
            assert!((spec.value(&x).unwrap() - direct).abs() <= 1e-12 * (1.0 + direct.abs()));
        }
        // Gradient chain rule against finite differences.
        let rep = fd_check(&spec, 100).unwrap();
        assert!(rep.max_gradient_rel_err < 1e-6, "{rep:?}");
    }

    #[test]
    fn conjugated_hessian_is_block_diagonal() {
        let blocks = vec![make_biquartic(), make_sphere(2), make_biquartic()];
        let spec = compose_rotated_blocks(blocks, 7);
        let rs = spec.as_rotated().unwrap();
        let d = spec.dim;
        for x in spec.quasi_samples(10, 0.5) {
            let out = spec.eval(&x, EvalRequest { hessian: true, ..Default::default() }).unwrap();
            let h = out.hessian.unwrap();
            // U^T H U should be block diagonal: blocks {0}, {1,2}, {3}.
            let u = &rs.rotation;
            let mut conj = vec![0.0; d * d];
            for i in 0..d {
                for j in 0..d {
                    let mut s = 0.0;
                    for a in 0..d {
                        for b in 0..d {
                            s += u[a * d + i] * h[a * d + b] * u[b * d + j];
                        }
                    }
                    conj[i * d + j] = s;
                }
            }
            let in_same_block = |i: usize, j: usize| {
                let block_of = |k: usize| match k {
                    0 => 0,
                    1 | 2 => 1,
                    _ => 2,
                };
                block_of(i) == block_of(j)
            };
            let scale = conj.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for i in 0..d {
                for j in 0..d {
                    if !in_same_block(i, j) {
                        assert!(
                            conj[i * d + j].abs() <= 1e-10 * scale,
                            "off-block entry ({i},{j}) = {}",
                            conj[i * d + j]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn expression_objective_roundtrip() {
        let spec = make_expression(
            "custom",
            2,
            vec![(-3.0, 3.0), (-3.0, 3.0)],
            "x1^2 + x2^2 - norm2/2*sin(2*norm2^2)",
            None,
        )
        .unwrap();
        let v = spec.value(&[1.0, 0.0]).unwrap();
        assert!((v - (1.0 - 0.5 * (2.0f64).sin())).abs() < 1e-14);
        // FD gradient against a manual difference.
        let g = spec.gradient(&[0.7, -0.4]).unwrap();
        let h = 1e-6;
        let manual = (spec.value(&[0.7 + h, -0.4]).unwrap()
            - spec.value(&[0.7 - h, -0.4]).unwrap())
            / (2.0 * h);
        assert!((g[0] - manual).abs() < 1e-5);
    }
}
