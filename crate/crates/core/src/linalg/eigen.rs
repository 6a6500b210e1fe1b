//! Symmetric eigensolvers: cyclic Jacobi for small matrices, Householder
//! tridiagonalisation with implicit QL for larger ones.

use super::matrix::{axpy, dot, norm2, DenseMatrix};
use crate::error::{Error, Result};

/// Above this order the tridiagonal route replaces Jacobi.
pub const JACOBI_MAX_ORDER: usize = 120;

/// Eigenvalues in ascending order with matching unit eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
}

/// Cyclic Jacobi eigensolver. Expects a symmetric matrix.
pub fn jacobi_eigen(a: &DenseMatrix) -> Result<SymmetricEigen> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "jacobi_eigen needs a square matrix");
    let mut m = a.clone();
    m.symmetrize();
    let mut v = DenseMatrix::identity(n);
    let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut converged = n < 2;
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)] * m[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::EigenNoConvergence);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].partial_cmp(&m[(j, j)]).unwrap());
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = v.select_columns(&order);
    Ok(SymmetricEigen { values, vectors })
}

/// Householder reduction `a = Q T Qᵗ` of a symmetric matrix to tridiagonal form.
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    /// `off[i]` couples rows `i` and `i + 1`.
    pub off: Vec<f64>,
    reflectors: Vec<(usize, Vec<f64>)>,
}

impl Tridiagonal {
    pub fn new(a: &DenseMatrix) -> Self {
        let n = a.rows();
        let mut m = a.clone();
        m.symmetrize();
        let mut reflectors = Vec::new();
        for k in 0..n.saturating_sub(2) {
            let len = n - k - 1;
            let mut h: Vec<f64> = (k + 1..n).map(|i| m[(i, k)]).collect();
            let alpha = norm2(&h);
            if alpha == 0.0 {
                continue;
            }
            h[0] += if h[0] >= 0.0 { alpha } else { -alpha };
            let hn = norm2(&h);
            h.iter_mut().for_each(|x| *x /= hn);
            // Trailing block update with H = I - 2 h hᵗ.
            let mut p = vec![0.0; len];
            for (a, i) in (k + 1..n).enumerate() {
                p[a] = 2.0 * dot(&m.row(i)[k + 1..], &h);
            }
            let kk = dot(&h, &p);
            let w: Vec<f64> = p.iter().zip(&h).map(|(pi, hi)| pi - kk * hi).collect();
            for (a, i) in (k + 1..n).enumerate() {
                let (ha, wa) = (h[a], w[a]);
                let row = &mut m.row_mut(i)[k + 1..];
                for ((r, hb), wb) in row.iter_mut().zip(&h).zip(&w) {
                    *r -= ha * wb + wa * hb;
                }
            }
            let new_sub = if m[(k + 1, k)] >= 0.0 { -alpha } else { alpha };
            m[(k + 1, k)] = new_sub;
            m[(k, k + 1)] = new_sub;
            for i in k + 2..n {
                m[(i, k)] = 0.0;
                m[(k, i)] = 0.0;
            }
            reflectors.push((k + 1, h));
        }
        let diag = (0..n).map(|i| m[(i, i)]).collect();
        let off = (0..n).map(|i| if i + 1 < n { m[(i + 1, i)] } else { 0.0 }).collect();
        Self { diag, off, reflectors }
    }

    /// All eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let mut d = self.diag.clone();
        let mut e = self.off.clone();
        tql_eigenvalues(&mut d, &mut e)?;
        d.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(d)
    }

    /// Eigenvector of the original matrix for an (accurate) eigenvalue
    /// `lambda`, by inverse iteration on the tridiagonal factor.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.diag.len();
        let scale = self.diag.iter().chain(&self.off).fold(0.0_f64, |m, v| m.max(v.abs())).max(1e-300);
        let shift = lambda + 1e-13 * scale;
        let mut y = vec![1.0 / (n as f64).sqrt(); n];
        for (i, yi) in y.iter_mut().enumerate() {
            *yi *= 1.0 + 0.01 * ((i * 7919 % 97) as f64 / 97.0);
        }
        for _ in 0..4 {
            y = solve_tridiagonal_shifted(&self.diag, &self.off, shift, &y);
            let nrm = norm2(&y);
            y.iter_mut().for_each(|v| *v /= nrm);
        }
        for (start, h) in self.reflectors.iter().rev() {
            let f = 2.0 * dot(h, &y[*start..]);
            axpy(-f, h, &mut y[*start..]);
        }
        y
    }
}

/// Gaussian elimination with partial pivoting for `(T - shift I) x = b`.
fn solve_tridiagonal_shifted(diag: &[f64], off: &[f64], shift: f64, b: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let tiny = 1e-300;
    let mut d: Vec<f64> = diag.iter().map(|v| v - shift).collect();
    let mut dl: Vec<f64> = off[..n.saturating_sub(1)].to_vec();
    let mut du = dl.clone();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut swapped = vec![false; n.saturating_sub(1)];
    for i in 0..n.saturating_sub(1) {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                d[i] = tiny;
            }
            let f = dl[i] / d[i];
            dl[i] = f;
            d[i + 1] -= f * du[i];
        } else {
            let f = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = f;
            let tmp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = tmp - f * d[i + 1];
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] *= -f;
            }
            swapped[i] = true;
        }
    }
    if n > 0 && d[n - 1] == 0.0 {
        d[n - 1] = tiny;
    }
    let mut x = b.to_vec();
    for i in 0..n.saturating_sub(1) {
        if swapped[i] {
            let tmp = x[i];
            x[i] = x[i + 1];
            x[i + 1] = tmp - dl[i] * x[i];
        } else {
            x[i + 1] -= dl[i] * x[i];
        }
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        if i + 1 < n {
            s -= du[i] * x[i + 1];
        }
        if i + 2 < n {
            s -= du2[i] * x[i + 2];
        }
        x[i] = s / d[i];
    }
    x
}

/// Implicit QL iteration on a symmetric tridiagonal matrix; eigenvalues are
/// left in `d`.
fn tql_eigenvalues(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::EigenNoConvergence);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Smallest eigenvalue with a unit eigenvector, choosing Jacobi for small
/// orders and the tridiagonal route otherwise.
pub fn min_eigenpair(a: &DenseMatrix) -> Result<(f64, Vec<f64>)> {
    let n = a.rows();
    if n == 0 {
        return Err(Error::AllDeflated);
    }
    if n <= JACOBI_MAX_ORDER {
        let e = jacobi_eigen(a)?;
        Ok((e.values[0], e.vectors.column(0)))
    } else {
        let t = Tridiagonal::new(a);
        let values = t.eigenvalues()?;
        let v = t.eigenvector(values[0]);
        Ok((values[0], v))
    }
}

/// All eigenvalues, ascending.
pub fn symmetric_eigenvalues(a: &DenseMatrix) -> Result<Vec<f64>> {
    if a.rows() <= JACOBI_MAX_ORDER {
        Ok(jacobi_eigen(a)?.values)
    } else {
        Tridiagonal::new(a).eigenvalues()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize) -> DenseMatrix {
        let mut a = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = ((i * 31 + j * 17) % 13) as f64 / 13.0 + if i == j { i as f64 } else { 0.0 };
            }
        }
        a.symmetrize();
        a
    }

    #[test]
    fn jacobi_diagonalises() {
        let a = sample(8);
        let e = jacobi_eigen(&a).unwrap();
        for k in 0..8 {
            let v = e.vectors.column(k);
            let av = a.matvec(&v);
            let r: f64 = av.iter().zip(&v).map(|(x, y)| (x - e.values[k] * y).powi(2)).sum::<f64>().sqrt();
            assert!(r < 1e-12, "residual {r}");
        }
    }

    #[test]
    fn tridiagonal_route_matches_jacobi() {
        let a = sample(30);
        let j = jacobi_eigen(&a).unwrap().values;
        let t = Tridiagonal::new(&a).eigenvalues().unwrap();
        for (x, y) in j.iter().zip(&t) {
            assert!((x - y).abs() < 1e-11, "{x} vs {y}");
        }
        let tri = Tridiagonal::new(&a);
        let v = tri.eigenvector(t[0]);
        let av = a.matvec(&v);
        let r: f64 = av.iter().zip(&v).map(|(x, y)| (x - t[0] * y).powi(2)).sum::<f64>().sqrt();
        assert!(r < 1e-10, "residual {r}");
    }
}
