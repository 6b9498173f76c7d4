//! Dense linear-algebra helpers shared by the solver and the clustering code.
//!
//! Everything here runs sequentially so results are bit-identical between runs.

use faer::linalg::matmul::matmul;
use faer::{Accum, Mat, MatRef, Par, Side};

use crate::error::{Error, Result};

/// Relative tolerance and iteration cap for the power-iteration norm estimate.
pub const POWER_TOL: f64 = 1e-10;
pub const POWER_MAX_ITER: usize = 1000;

pub fn frobenius(a: MatRef<'_, f64>) -> f64 {
    let mut acc = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            let v = a[(i, j)];
            acc += v * v;
        }
    }
    acc.sqrt()
}

pub fn max_abs(a: MatRef<'_, f64>) -> f64 {
    let mut m = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max(a[(i, j)].abs());
        }
    }
    m
}

pub fn all_finite(a: MatRef<'_, f64>) -> bool {
    (0..a.ncols()).all(|j| (0..a.nrows()).all(|i| a[(i, j)].is_finite()))
}

/// `lhs * rhs` without touching faer's global parallelism setting.
pub fn mul(lhs: MatRef<'_, f64>, rhs: MatRef<'_, f64>) -> Mat<f64> {
    let mut out = Mat::zeros(lhs.nrows(), rhs.ncols());
    matmul(out.as_mut(), Accum::Replace, lhs, rhs, 1.0, Par::Seq);
    out
}

/// `lhsᵀ * rhs`.
pub fn mul_tn(lhs: MatRef<'_, f64>, rhs: MatRef<'_, f64>) -> Mat<f64> {
    mul(lhs.transpose(), rhs)
}

/// Deterministic, non-degenerate start vector for Krylov and power methods.
fn start_vector(n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n)
        .map(|i| 1.0 + 0.5 * (((i * 7919 + 13) % 101) as f64 / 101.0))
        .collect();
    normalize(&mut v);
    v
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = dot(v, v).sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    n
}

fn matvec(a: MatRef<'_, f64>, x: &[f64], out: &mut [f64]) {
    out.iter_mut().for_each(|o| *o = 0.0);
    for (j, &xj) in x.iter().enumerate() {
        if xj == 0.0 {
            continue;
        }
        let col = a.col(j);
        for (i, o) in out.iter_mut().enumerate() {
            *o += col[i] * xj;
        }
    }
}

fn matvec_t(a: MatRef<'_, f64>, x: &[f64], out: &mut [f64]) {
    for (j, o) in out.iter_mut().enumerate() {
        let col = a.col(j);
        let mut s = 0.0;
        for (i, &xi) in x.iter().enumerate() {
            s += col[i] * xi;
        }
        *o = s;
    }
}

/// Largest singular value by power iteration on `AᵀA`.
///
/// Stops when the estimate changes by less than [`POWER_TOL`] relative, or
/// after [`POWER_MAX_ITER`] iterations.
pub fn spectral_norm(a: MatRef<'_, f64>) -> f64 {
    let (m, n) = (a.nrows(), a.ncols());
    if m == 0 || n == 0 {
        return 0.0;
    }
    let mut v = start_vector(n);
    let mut av = vec![0.0; m];
    let mut atav = vec![0.0; n];
    let mut sigma = 0.0;
    for _ in 0..POWER_MAX_ITER {
        matvec(a, &v, &mut av);
        matvec_t(a, &av, &mut atav);
        let lambda = normalize(&mut atav);
        if lambda == 0.0 {
            return 0.0;
        }
        let next = lambda.sqrt();
        std::mem::swap(&mut v, &mut atav);
        if (next - sigma).abs() <= POWER_TOL * next {
            return next;
        }
        sigma = next;
    }
    sigma
}

/// Thin SVD `A = U diag(s) Vᵀ`, singular values in nonincreasing order.
pub struct Svd {
    pub u: Mat<f64>,
    pub s: Vec<f64>,
    pub v: Mat<f64>,
}

pub fn thin_svd(a: MatRef<'_, f64>) -> Result<Svd> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Ok(Svd {
            u: Mat::zeros(a.nrows(), 0),
            s: Vec::new(),
            v: Mat::zeros(a.ncols(), 0),
        });
    }
    let svd = a
        .thin_svd()
        .map_err(|e| Error::Numerical(format!("svd failed: {e:?}")))?;
    let s = svd.S().column_vector().iter().copied().collect();
    Ok(Svd {
        u: svd.U().to_owned(),
        s,
        v: svd.V().to_owned(),
    })
}

/// Eigen-decomposition of a symmetric matrix; eigenvalues ascending.
pub fn sym_eigen(a: MatRef<'_, f64>) -> Result<(Vec<f64>, Mat<f64>)> {
    let evd = a
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("symmetric eigensolver failed: {e:?}")))?;
    let values = evd.S().column_vector().iter().copied().collect();
    Ok((values, evd.U().to_owned()))
}

pub fn sym_eigenvalues(a: MatRef<'_, f64>) -> Result<Vec<f64>> {
    a.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Numerical(format!("symmetric eigensolver failed: {e:?}")))
}

/// Orthonormal basis stored column by column.
struct Basis {
    dim: usize,
    cols: Vec<Vec<f64>>,
}

impl Basis {
    fn new(dim: usize) -> Self {
        Self {
            dim,
            cols: Vec::new(),
        }
    }

    /// Two passes of classical Gram-Schmidt against the stored columns.
    fn orthogonalize(&self, w: &mut [f64]) {
        for _ in 0..2 {
            let coeffs: Vec<f64> = self.cols.iter().map(|c| dot(c, w)).collect();
            for (c, h) in self.cols.iter().zip(coeffs) {
                for (wi, ci) in w.iter_mut().zip(c) {
                    *wi -= h * ci;
                }
            }
        }
    }

    /// A unit vector orthogonal to the basis, built from the first canonical
    /// direction with a usable residual.
    fn fresh_direction(&self) -> Option<Vec<f64>> {
        for i in 0..self.dim {
            let mut e = vec![0.0; self.dim];
            e[i] = 1.0;
            self.orthogonalize(&mut e);
            if normalize(&mut e) > 1e-8 {
                return Some(e);
            }
        }
        None
    }

    fn to_mat(&self, coeffs: MatRef<'_, f64>, count: usize) -> Mat<f64> {
        Mat::from_fn(self.dim, count, |i, r| {
            self.cols
                .iter()
                .enumerate()
                .map(|(k, c)| c[i] * coeffs[(k, r)])
                .sum()
        })
    }
}

/// Relative residual under which a Ritz triplet counts as converged.
const RITZ_TOL: f64 = 1e-11;

/// Singular triplets of `a` whose singular values exceed `tau`, computed by
/// Golub-Kahan-Lanczos bidiagonalization with full reorthogonalization.
///
/// Returns `None` when `steps` Lanczos steps do not converge every triplet above
/// `tau` together with at least one Ritz value at or below `tau`; the caller is
/// expected to retry with more steps or fall back to a dense SVD.
pub fn partial_svd_above(a: MatRef<'_, f64>, tau: f64, steps: usize) -> Option<Svd> {
    let (m, n) = (a.nrows(), a.ncols());
    let kmax = steps.min(m).min(n);
    if kmax == 0 {
        return None;
    }

    let mut ubasis = Basis::new(m);
    let mut vbasis = Basis::new(n);
    let mut alphas = Vec::with_capacity(kmax);
    let mut betas = Vec::with_capacity(kmax);

    let mut v = start_vector(n);
    let mut u = vec![0.0; m];
    let mut w = vec![0.0; n];
    let mut last_beta = 0.0;

    for j in 0..kmax {
        vbasis.cols.push(v.clone());
        matvec(a, &v, &mut u);
        if let Some(prev) = ubasis.cols.last() {
            let b = betas[j - 1];
            for (ui, pi) in u.iter_mut().zip(prev) {
                *ui -= b * pi;
            }
        }
        ubasis.orthogonalize(&mut u);
        let mut alpha = normalize(&mut u);
        if alpha <= 1e-14 * (1.0 + alphas.iter().cloned().fold(0.0, f64::max)) {
            alpha = 0.0;
            u = ubasis.fresh_direction()?;
        }
        alphas.push(alpha);
        ubasis.cols.push(u.clone());

        matvec_t(a, &u, &mut w);
        for (wi, vi) in w.iter_mut().zip(&v) {
            *wi -= alpha * vi;
        }
        vbasis.orthogonalize(&mut w);
        let mut beta = normalize(&mut w);
        if j + 1 < kmax && beta <= 1e-14 * (1.0 + alphas.iter().cloned().fold(0.0, f64::max)) {
            beta = 0.0;
            w = vbasis.fresh_direction()?;
        }
        last_beta = beta;
        if j + 1 < kmax {
            betas.push(beta);
        }
        v.clone_from(&w);
    }

    let k = alphas.len();
    let bidiag = Mat::from_fn(k, k, |i, j| {
        if i == j {
            alphas[i]
        } else if j == i + 1 {
            betas[i]
        } else {
            0.0
        }
    });
    let small = thin_svd(bidiag.as_ref()).ok()?;
    let scale = small.s.first().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
    let converged = |r: usize| (last_beta * small.u[(k - 1, r)]).abs() <= RITZ_TOL * scale;

    let rank = small.s.iter().take_while(|&&s| s > tau).count();
    // An exhausted Krylov space (k = min(m, n)) captures the full spectrum.
    let exhausted = k == m.min(n);
    if !exhausted {
        if rank >= k {
            return None;
        }
        if !(0..=rank).all(converged) {
            return None;
        }
    }

    let u_out = ubasis.to_mat(small.u.as_ref(), rank);
    let v_out = vbasis.to_mat(small.v.as_ref(), rank);
    Some(Svd {
        u: u_out,
        s: small.s[..rank].to_vec(),
        v: v_out,
    })
}
