//! Small dense and tridiagonal linear algebra: Jacobi eigensolves, Haar
//! rotations, Sturm-bisection tridiagonal eigensolves with inverse iteration,
//! Thomas solves (real and complex), conjugate gradients, and least-squares
//! fits. All routines are allocation-light and deterministic.

#[cfg(not(feature = "std"))]
use crate::fx::F64Ext;

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
use rand::Rng;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn scale(alpha: f64, x: &mut [f64]) {
    for xi in x.iter_mut() {
        *xi *= alpha;
    }
}

pub fn normalize(x: &mut [f64]) -> f64 {
    let n = norm2(x);
    if n > 0.0 {
        scale(1.0 / n, x);
    }
    n
}

/// Row-major dense matrix-vector product, y = A x for an n x n matrix.
pub fn dense_matvec(a: &[f64], x: &[f64], y: &mut [f64]) {
    let n = x.len();
    for i in 0..n {
        y[i] = dot(&a[i * n..(i + 1) * n], x);
    }
}

/// Gaussian elimination with partial pivoting for small dense systems.
/// Overwrites nothing; returns None on (numerical) singularity.
pub fn solve_dense(a: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m = a.to_vec();
    let mut x = b.to_vec();
    for col in 0..n {
        let mut piv = col;
        let mut best = m[col * n + col].abs();
        for row in col + 1..n {
            let v = m[row * n + col].abs();
            if v > best {
                best = v;
                piv = row;
            }
        }
        if best == 0.0 {
            return None;
        }
        if piv != col {
            for j in 0..n {
                m.swap(col * n + j, piv * n + j);
            }
            x.swap(col, piv);
        }
        let d = m[col * n + col];
        for row in col + 1..n {
            let f = m[row * n + col] / d;
            if f == 0.0 {
                continue;
            }
            for j in col..n {
                m[row * n + j] -= f * m[col * n + j];
            }
            x[row] -= f * x[col];
        }
    }
    for col in (0..n).rev() {
        let mut s = x[col];
        for j in col + 1..n {
            s -= m[col * n + j] * x[j];
        }
        x[col] = s / m[col * n + col];
    }
    Some(x)
}

/// Eigendecomposition of a small symmetric matrix by cyclic Jacobi sweeps.
/// Returns eigenvalues ascending and eigenvectors as matrix columns
/// (row-major storage, column j is the j-th eigenvector).
pub fn jacobi_eigen(a: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut m = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let idx = |i: usize, j: usize| i * n + j;
    for _sweep in 0..64 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += m[idx(i, j)] * m[idx(i, j)];
            }
        }
        if off.sqrt() <= 1e-14 * (1.0 + frobenius(&m)) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[idx(p, q)];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = m[idx(p, p)];
                let aqq = m[idx(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[idx(k, p)];
                    let mkq = m[idx(k, q)];
                    m[idx(k, p)] = c * mkp - s * mkq;
                    m[idx(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[idx(p, k)];
                    let mqk = m[idx(q, k)];
                    m[idx(p, k)] = c * mpk - s * mqk;
                    m[idx(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[idx(k, p)];
                    let vkq = v[idx(k, q)];
                    v[idx(k, p)] = c * vkp - s * vkq;
                    v[idx(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[idx(i, i)].partial_cmp(&m[idx(j, j)]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| m[idx(i, i)]).collect();
    let mut vecs = vec![0.0; n * n];
    for (newcol, &oldcol) in order.iter().enumerate() {
        for row in 0..n {
            vecs[idx(row, newcol)] = v[idx(row, oldcol)];
        }
    }
    (vals, vecs)
}

fn frobenius(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Haar-distributed orthogonal matrix: QR of a standard-normal matrix with
/// the R diagonal sign fixed (Mezzadri's recipe). Row-major, columns
/// orthonormal.
pub fn haar_orthogonal<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    let mut a = vec![0.0; n * n];
    for v in a.iter_mut() {
        *v = crate::rng::standard_normal(rng);
    }
    // Modified Gram-Schmidt over columns, two passes for orthogonality near
    // machine precision.
    let idx = |i: usize, j: usize| i * n + j;
    for col in 0..n {
        for _pass in 0..2 {
            for prev in 0..col {
                let mut proj = 0.0;
                for row in 0..n {
                    proj += a[idx(row, col)] * a[idx(row, prev)];
                }
                for row in 0..n {
                    a[idx(row, col)] -= proj * a[idx(row, prev)];
                }
            }
        }
        let mut nrm = 0.0;
        for row in 0..n {
            nrm += a[idx(row, col)] * a[idx(row, col)];
        }
        // Normalizing against the positive norm IS the sign fix: it pins
        // every R diagonal entry positive, which makes Ginibre -> Q exactly
        // Haar distributed.
        let inv = 1.0 / nrm.sqrt();
        for row in 0..n {
            a[idx(row, col)] *= inv;
        }
    }
    a
}

/// Symmetric tridiagonal eigen machinery based on Sturm sequences: robust
/// for the huge condition ratios that deep-tunneling Witten operators
/// produce, where plain Krylov iteration stalls.
pub struct SymTridiag<'a> {
    pub diag: &'a [f64],
    pub off: &'a [f64],
}

impl<'a> SymTridiag<'a> {
    pub fn new(diag: &'a [f64], off: &'a [f64]) -> Self {
        debug_assert_eq!(off.len() + 1, diag.len());
        SymTridiag { diag, off }
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x` (Sturm count via LDL).
    pub fn count_below(&self, x: f64) -> usize {
        let n = self.diag.len();
        let scale = self.gershgorin_scale();
        let tiny = f64::EPSILON * scale.max(1.0) * 1e-3;
        let mut count = 0;
        let mut d = self.diag[0] - x;
        if d < 0.0 {
            count += 1;
        }
        for i in 1..n {
            if d.abs() < tiny {
                d = if d < 0.0 { -tiny } else { tiny };
            }
            d = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / d;
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin_scale(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs())
    }

    /// The k lowest eigenvalues by bisection, to near machine precision.
    pub fn lowest_eigenvalues(&self, k: usize) -> Vec<f64> {
        let (glo, ghi) = self.gershgorin();
        let span = (ghi - glo).max(f64::MIN_POSITIVE);
        let mut vals = Vec::with_capacity(k);
        for j in 0..k {
            let mut lo = glo - 1e-12 * span;
            let mut hi = ghi + 1e-12 * span;
            // invariant: count_below(lo) <= j < count_below(hi)
            for _ in 0..128 {
                let mid = 0.5 * (lo + hi);
                if hi - lo <= f64::EPSILON * mid.abs().max(span * 1e-15) * 4.0 {
                    break;
                }
                if self.count_below(mid) > j {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            vals.push(0.5 * (lo + hi));
        }
        vals
    }

    /// Eigenvector for an isolated eigenvalue estimate by inverse iteration,
    /// orthogonalized against `against` (vectors of a close-by cluster).
    pub fn eigenvector<R: Rng>(
        &self,
        eigenvalue: f64,
        against: &[&[f64]],
        rng: &mut R,
    ) -> Vec<f64> {
        let n = self.diag.len();
        let scale = self.gershgorin_scale().max(1.0);
        let mut v: Vec<f64> = (0..n).map(|_| crate::rng::standard_normal(rng)).collect();
        orthogonalize(&mut v, against);
        normalize(&mut v);
        let shift = eigenvalue + scale * f64::EPSILON * 8.0;
        for _it in 0..6 {
            let mut shifted: Vec<f64> = self.diag.iter().map(|d| d - shift).collect();
            let mut w = v.clone();
            if !tridiag_solve_pivot(&mut shifted, self.off, &mut w) {
                // Singular shift: nudge and retry next pass.
                break;
            }
            orthogonalize(&mut w, against);
            if normalize(&mut w) == 0.0 {
                break;
            }
            let res = self.residual(&w, eigenvalue);
            v = w;
            if res <= scale * f64::EPSILON * 64.0 {
                break;
            }
        }
        v
    }

    pub fn residual(&self, v: &[f64], eigenvalue: f64) -> f64 {
        let n = self.diag.len();
        let mut r = 0.0;
        for i in 0..n {
            let mut t = (self.diag[i] - eigenvalue) * v[i];
            if i > 0 {
                t += self.off[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                t += self.off[i] * v[i + 1];
            }
            r += t * t;
        }
        r.sqrt()
    }
}

fn orthogonalize(v: &mut [f64], against: &[&[f64]]) {
    for basis in against {
        let p = dot(v, basis);
        axpy(-p, basis, v);
    }
}

/// Tridiagonal solve with partial pivoting (handles the nearly singular
/// shifted systems of inverse iteration). `diag` is consumed; `rhs` becomes
/// the solution. Returns false if a pivot vanished.
pub fn tridiag_solve_pivot(diag: &mut [f64], off: &[f64], rhs: &mut [f64]) -> bool {
    let n = diag.len();
    if n == 1 {
        if diag[0] == 0.0 {
            return false;
        }
        rhs[0] /= diag[0];
        return true;
    }
    let d = diag;
    let dl: Vec<f64> = off.to_vec();
    let mut du: Vec<f64> = off.to_vec();
    let mut du2: Vec<f64> = vec![0.0; n.saturating_sub(2)];
    for i in 0..n - 1 {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                return false;
            }
            let fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            rhs[i + 1] -= fact * rhs[i];
        } else {
            // Swap rows i and i+1, then eliminate.
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let tmp = d[i + 1];
            d[i + 1] = du[i] - fact * tmp;
            du[i] = tmp;
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du2[i];
            }
            rhs.swap(i, i + 1);
            rhs[i + 1] -= fact * rhs[i];
        }
    }
    if d[n - 1] == 0.0 {
        return false;
    }
    rhs[n - 1] /= d[n - 1];
    if n >= 2 {
        let i = n - 2;
        rhs[i] = (rhs[i] - du[i] * rhs[i + 1]) / d[i];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        rhs[i] = (rhs[i] - du[i] * rhs[i + 1] - du2[i] * rhs[i + 2]) / d[i];
    }
    true
}

/// Thomas solve for a complex symmetric tridiagonal system
/// (diag + i*kappa*T pattern from Crank-Nicolson). No pivoting: the unit
/// real part keeps the system strictly diagonally dominant.
pub fn tridiag_solve_complex(
    diag: &[Complex64],
    off: &[Complex64],
    rhs: &mut [Complex64],
) {
    let n = diag.len();
    let mut c = vec![Complex64::new(0.0, 0.0); n.saturating_sub(1)];
    let mut d = diag[0];
    rhs[0] /= d;
    if n == 1 {
        return;
    }
    c[0] = off[0] / d;
    for i in 1..n {
        d = diag[i] - off[i - 1] * c[i - 1];
        let r = (rhs[i] - off[i - 1] * rhs[i - 1]) / d;
        rhs[i] = r;
        if i + 1 < n {
            c[i] = off[i] / d;
        }
    }
    for i in (0..n - 1).rev() {
        let t = rhs[i] - c[i] * rhs[i + 1];
        rhs[i] = t;
    }
}

/// Conjugate gradients for a symmetric positive definite operator given as a
/// closure. Returns iterations used, or None when `max_iter` was not enough.
pub fn conjugate_gradient<F>(
    apply: F,
    b: &[f64],
    x: &mut [f64],
    rel_tol: f64,
    max_iter: usize,
) -> Option<usize>
where
    F: Fn(&[f64], &mut [f64]),
{
    let n = b.len();
    let mut r = vec![0.0; n];
    let mut ax = vec![0.0; n];
    apply(x, &mut ax);
    for i in 0..n {
        r[i] = b[i] - ax[i];
    }
    let bnorm = norm2(b).max(f64::MIN_POSITIVE);
    let mut p = r.clone();
    let mut rs = dot(&r, &r);
    if rs.sqrt() <= rel_tol * bnorm {
        return Some(0);
    }
    let mut ap = vec![0.0; n];
    for it in 1..=max_iter {
        apply(&p, &mut ap);
        let alpha = rs / dot(&p, &ap);
        axpy(alpha, &p, x);
        axpy(-alpha, &ap, &mut r);
        let rs_new = dot(&r, &r);
        if rs_new.sqrt() <= rel_tol * bnorm {
            return Some(it);
        }
        let beta = rs_new / rs;
        rs = rs_new;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
    }
    None
}

/// Least-squares straight line through (x, y); returns (slope, intercept,
/// r-squared).
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        sxx += (xi - mx) * (xi - mx);
        sxy += (xi - mx) * (yi - my);
        syy += (yi - my) * (yi - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    (slope, intercept, r2)
}

/// Least-squares quadratic a*x^2 + b*x + c; returns ((a, b, c), r-squared).
pub fn quadratic_fit(x: &[f64], y: &[f64]) -> ([f64; 3], f64) {
    let mut m = [0.0f64; 9];
    let mut rhs = [0.0f64; 3];
    for (&xi, &yi) in x.iter().zip(y) {
        let basis = [xi * xi, xi, 1.0];
        for i in 0..3 {
            for j in 0..3 {
                m[i * 3 + j] += basis[i] * basis[j];
            }
            rhs[i] += basis[i] * yi;
        }
    }
    let sol = solve_dense(&m, &rhs).unwrap_or([0.0, 0.0, 0.0].to_vec());
    let coef = [sol[0], sol[1], sol[2]];
    let my = y.iter().sum::<f64>() / y.len() as f64;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        let fit = coef[0] * xi * xi + coef[1] * xi + coef[2];
        ss_res += (yi - fit) * (yi - fit);
        ss_tot += (yi - my) * (yi - my);
    }
    let r2 = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    (coef, r2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn jacobi_small_known() {
        // [[2,1],[1,2]] has eigenvalues 1 and 3.
        let (vals, vecs) = jacobi_eigen(&[2.0, 1.0, 1.0, 2.0], 2);
        assert!((vals[0] - 1.0).abs() < 1e-12);
        assert!((vals[1] - 3.0).abs() < 1e-12);
        // eigenvector for 1 is (1,-1)/sqrt2 up to sign
        let v0 = [vecs[0], vecs[2]];
        assert!((v0[0] + v0[1]).abs() < 1e-10);
    }

    #[test]
    fn haar_is_orthogonal() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let n = 12;
        let u = haar_orthogonal(n, &mut rng);
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += u[k * n + i] * u[k * n + j];
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((s - expect).abs() < 1e-12, "gram {i},{j} = {s}");
            }
        }
    }

    #[test]
    fn sturm_matches_dense_on_random_tridiag() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let n = 24;
        let diag: Vec<f64> = (0..n).map(|_| crate::rng::standard_normal(&mut rng)).collect();
        let off: Vec<f64> = (0..n - 1).map(|_| crate::rng::standard_normal(&mut rng)).collect();
        let mut dense = vec![0.0; n * n];
        for i in 0..n {
            dense[i * n + i] = diag[i];
            if i + 1 < n {
                dense[i * n + i + 1] = off[i];
                dense[(i + 1) * n + i] = off[i];
            }
        }
        let (dvals, _) = jacobi_eigen(&dense, n);
        let t = SymTridiag::new(&diag, &off);
        let svals = t.lowest_eigenvalues(5);
        for k in 0..5 {
            assert!(
                (dvals[k] - svals[k]).abs() < 1e-10,
                "eig {k}: {} vs {}",
                dvals[k],
                svals[k]
            );
        }
        let mut rng2 = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let v = t.eigenvector(svals[0], &[], &mut rng2);
        assert!(t.residual(&v, svals[0]) < 1e-9);
    }

    #[test]
    fn pivoted_tridiag_solve() {
        // System where the naive first pivot is small.
        let diag0 = [1e-14, 2.0, 3.0];
        let off = [1.0, 0.5];
        let x_true = [1.0, -2.0, 0.5];
        // rhs = T x
        let rhs0 = [
            diag0[0] * x_true[0] + off[0] * x_true[1],
            off[0] * x_true[0] + diag0[1] * x_true[1] + off[1] * x_true[2],
            off[1] * x_true[1] + diag0[2] * x_true[2],
        ];
        let mut diag = diag0.to_vec();
        let mut rhs = rhs0.to_vec();
        assert!(tridiag_solve_pivot(&mut diag, &off, &mut rhs));
        for i in 0..3 {
            assert!((rhs[i] - x_true[i]).abs() < 1e-9, "x[{i}] = {}", rhs[i]);
        }
    }

    #[test]
    fn complex_thomas_roundtrip() {
        let n = 50;
        let diag: Vec<Complex64> =
            (0..n).map(|i| Complex64::new(1.0, 0.1 * (i as f64 + 1.0))).collect();
        let off: Vec<Complex64> = (0..n - 1).map(|i| Complex64::new(0.0, 0.05 * i as f64)).collect();
        let x: Vec<Complex64> =
            (0..n).map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos())).collect();
        let mut rhs = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            rhs[i] = diag[i] * x[i];
            if i > 0 {
                rhs[i] += off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                rhs[i] += off[i] * x[i + 1];
            }
        }
        tridiag_solve_complex(&diag, &off, &mut rhs);
        for i in 0..n {
            assert!((rhs[i] - x[i]).norm() < 1e-10);
        }
    }

    #[test]
    fn cg_solves_spd() {
        let n = 40;
        // SPD operator: 2I + discrete Laplacian stencil.
        let apply = |x: &[f64], y: &mut [f64]| {
            for i in 0..n {
                let mut v = 4.0 * x[i];
                if i > 0 {
                    v -= x[i - 1];
                }
                if i + 1 < n {
                    v -= x[i + 1];
                }
                y[i] = v;
            }
        };
        let b: Vec<f64> = (0..n).map(|i| (i as f64 * 0.17).sin()).collect();
        let mut x = vec![0.0; n];
        let it = conjugate_gradient(apply, &b, &mut x, 1e-12, 500).unwrap();
        assert!(it <= 200);
        let mut ax = vec![0.0; n];
        apply(&x, &mut ax);
        for i in 0..n {
            assert!((ax[i] - b[i]).abs() < 1e-9);
        }
    }
}
