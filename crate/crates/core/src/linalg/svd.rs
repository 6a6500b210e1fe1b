//! One-sided (Hestenes) Jacobi SVD and the kernel/range/least-squares
//! routines built on it.

use super::matrix::{axpy, dot, norm2, DenseMatrix};
use crate::error::{Error, Result};

/// Default relative rank tolerance for kernel-dimension verdicts.
pub const RANK_RTOL: f64 = 1e-10;

/// Thin SVD `a = u · diag(s) · vᵗ` with singular values sorted descending.
/// `u` is rows×k, `v` is cols×k with k = cols.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: DenseMatrix,
    pub s: Vec<f64>,
    pub v: DenseMatrix,
}

impl Svd {
    pub fn sigma_max(&self) -> f64 {
        self.s.first().copied().unwrap_or(0.0)
    }

    /// Number of singular values above `rtol · σ_max`.
    pub fn rank(&self, rtol: f64) -> usize {
        let cut = rtol * self.sigma_max();
        self.s.iter().filter(|&&s| s > cut).count()
    }
}

/// One-sided Jacobi SVD. Columns are rotated until pairwise orthogonal;
/// the sweep cap is `100 · min(rows, cols)` (at least 30).
pub fn svd(a: &DenseMatrix) -> Result<Svd> {
    let (m, n) = a.shape();
    let mut w: Vec<Vec<f64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            e
        })
        .collect();
    let max_sweeps = (100 * m.min(n)).max(30);
    let eps = f64::EPSILON;
    let mut norms: Vec<f64> = w.iter().map(|c| dot(c, c)).collect();
    // Columns this small are rounding noise (a wide matrix must shed n − m
    // of them); rotating them against each other never settles.
    let negligible = (n as f64 * eps).powi(2) * norms.iter().sum::<f64>();
    let mut converged = n < 2;
    for _ in 0..max_sweeps {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = norms[p];
                let beta = norms[q];
                if alpha <= negligible || beta <= negligible {
                    continue;
                }
                let gamma = dot(&w[p], &w[q]);
                if gamma.abs() <= 4.0 * eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut w, p, q, c, s);
                rotate_pair(&mut v, p, q, c, s);
                norms[p] = dot(&w[p], &w[p]);
                norms[q] = dot(&w[q], &w[q]);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::SvdNoConvergence(max_sweeps));
    }
    let mut order: Vec<usize> = (0..n).collect();
    let sig: Vec<f64> = w.iter().map(|c| norm2(c)).collect();
    order.sort_by(|&i, &j| sig[j].partial_cmp(&sig[i]).unwrap());
    let mut u = DenseMatrix::zeros(m, n);
    let mut vm = DenseMatrix::zeros(n, n);
    let mut s = Vec::with_capacity(n);
    for (k, &j) in order.iter().enumerate() {
        s.push(sig[j]);
        if sig[j] > 0.0 {
            let col: Vec<f64> = w[j].iter().map(|x| x / sig[j]).collect();
            u.set_column(k, &col);
        }
        vm.set_column(k, &v[j]);
    }
    Ok(Svd { u, s, v: vm })
}

fn rotate_pair(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (lo, hi) = cols.split_at_mut(q);
    let (cp, cq) = (&mut lo[p], &mut hi[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}

/// Orthonormal basis of the column space, singular values at or below
/// `rtol · σ_max` treated as zero.
pub fn range_basis(a: &DenseMatrix, rtol: f64) -> Result<DenseMatrix> {
    if a.cols() == 0 {
        return Ok(DenseMatrix::zeros(a.rows(), 0));
    }
    if a.rows() >= a.cols() {
        let d = svd(a)?;
        let r = d.rank(rtol);
        Ok(d.u.select_columns(&(0..r).collect::<Vec<_>>()))
    } else {
        // Column space of a wide matrix: left singular vectors are the
        // right singular vectors of its transpose.
        let d = svd(&a.transpose())?;
        let r = d.rank(rtol);
        Ok(d.v.select_columns(&(0..r).collect::<Vec<_>>()))
    }
}

/// Orthonormal basis of `{x : a·x = 0}` at relative tolerance `rtol`.
pub fn nullspace(a: &DenseMatrix, rtol: f64) -> Result<DenseMatrix> {
    let n = a.cols();
    if a.rows() == 0 {
        return Ok(DenseMatrix::identity(n));
    }
    if a.rows() >= n {
        let d = svd(a)?;
        let r = d.rank(rtol);
        Ok(d.v.select_columns(&(r..n).collect::<Vec<_>>()))
    } else {
        let row_space = range_basis(&a.transpose(), rtol)?;
        Ok(orthonormal_complement(&row_space))
    }
}

pub fn rank(a: &DenseMatrix, rtol: f64) -> Result<usize> {
    if a.rows() == 0 || a.cols() == 0 {
        return Ok(0);
    }
    let d = if a.rows() >= a.cols() { svd(a)? } else { svd(&a.transpose())? };
    Ok(d.rank(rtol))
}

/// Householder reflectors of a QR factorisation of `q` (n×k): the returned
/// unit vectors `h_i` satisfy `H_k ⋯ H_1 q = [R; 0]` with `H_i = I − 2 h_i h_iᵗ`.
pub fn householder_qr_vectors(q: &DenseMatrix) -> Vec<Vec<f64>> {
    let (n, k) = q.shape();
    let mut work: Vec<Vec<f64>> = (0..k).map(|j| q.column(j)).collect();
    let mut reflectors = Vec::with_capacity(k);
    for j in 0..k.min(n) {
        let x = &work[j];
        let alpha = norm2(&x[j..]);
        let mut h = vec![0.0; n];
        h[j..].copy_from_slice(&x[j..]);
        h[j] += if x[j] >= 0.0 { alpha } else { -alpha };
        let hn = norm2(&h);
        if hn > 0.0 {
            h.iter_mut().for_each(|v| *v /= hn);
        }
        for col in work.iter_mut().skip(j) {
            let f = 2.0 * dot(&h, col);
            axpy(-f, &h, col);
        }
        reflectors.push(h);
    }
    reflectors
}

/// Apply `H_1 ⋯ H_k` to a vector.
pub fn apply_reflectors(reflectors: &[Vec<f64>], x: &mut [f64]) {
    for h in reflectors.iter().rev() {
        let f = 2.0 * dot(h, x);
        axpy(-f, h, x);
    }
}

/// Orthonormal basis of the orthogonal complement of the span of the
/// orthonormal columns of `q`.
pub fn orthonormal_complement(q: &DenseMatrix) -> DenseMatrix {
    let (n, k) = q.shape();
    let refl = householder_qr_vectors(q);
    let mut out = DenseMatrix::zeros(n, n - k);
    for c in k..n {
        let mut e = vec![0.0; n];
        e[c] = 1.0;
        apply_reflectors(&refl, &mut e);
        out.set_column(c - k, &e);
    }
    out
}

/// Minimum-norm least-squares solution of `a·x = b` and the residual norm.
pub fn lstsq_with_rtol(a: &DenseMatrix, b: &[f64], rtol: f64) -> Result<(Vec<f64>, f64)> {
    assert_eq!(a.rows(), b.len(), "lstsq shape mismatch");
    let n = a.cols();
    let mut x = vec![0.0; n];
    if n > 0 && a.rows() > 0 {
        if a.rows() >= n {
            let d = svd(a)?;
            let cut = rtol * d.sigma_max();
            for k in 0..n {
                if d.s[k] > cut {
                    let coef = dot(&d.u.column(k), b) / d.s[k];
                    axpy(coef, &d.v.column(k), &mut x);
                }
            }
        } else {
            // a = v Σ uᵗ in terms of the SVD of aᵗ.
            let d = svd(&a.transpose())?;
            let cut = rtol * d.sigma_max();
            for k in 0..a.rows() {
                if d.s[k] > cut {
                    let coef = dot(&d.v.column(k), b) / d.s[k];
                    axpy(coef, &d.u.column(k), &mut x);
                }
            }
        }
    }
    let r: Vec<f64> = a.matvec(&x).iter().zip(b).map(|(ax, bi)| ax - bi).collect();
    Ok((x, norm2(&r)))
}

/// Minimum-norm least squares with the default SVD tolerance `1e-12`.
pub fn lstsq(a: &DenseMatrix, b: &[f64]) -> Result<(Vec<f64>, f64)> {
    lstsq_with_rtol(a, b, 1e-12)
}

/// Largest principal angle between the column spans of two matrices with
/// orthonormal columns; `π/2` when the dimensions differ.
pub fn max_principal_angle(u: &DenseMatrix, w: &DenseMatrix) -> Result<f64> {
    if u.cols() != w.cols() {
        return Ok(std::f64::consts::FRAC_PI_2);
    }
    if u.cols() == 0 {
        return Ok(0.0);
    }
    let proj = w.matmul(&w.tr_matmul(u));
    let resid = u.sub(&proj);
    let s = svd(&resid)?;
    Ok(s.sigma_max().min(1.0).asin())
}

/// Orthonormalise the columns of `a` (span only).
pub fn orthonormal_span(a: &DenseMatrix, rtol: f64) -> Result<DenseMatrix> {
    range_basis(a, rtol)
}
