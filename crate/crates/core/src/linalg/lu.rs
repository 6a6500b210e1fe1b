use super::matrix::DenseMatrix;
use crate::error::{Error, Result};

/// Gaussian elimination with partial pivoting, `P a = L U`.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: DenseMatrix,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    pub fn new(a: &DenseMatrix) -> Result<Self> {
        let n = a.rows();
        if n != a.cols() {
            return Err(Error::Shape(format!("LU of a {}x{} matrix", n, a.cols())));
        }
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let piv = (k..n).max_by(|&i, &j| lu[(i, k)].abs().total_cmp(&lu[(j, k)].abs())).unwrap_or(k);
            if piv != k {
                for c in 0..n {
                    let t = lu[(k, c)];
                    lu[(k, c)] = lu[(piv, c)];
                    lu[(piv, c)] = t;
                }
                perm.swap(k, piv);
                sign = -sign;
            }
            let d = lu[(k, k)];
            if d == 0.0 {
                continue;
            }
            for i in k + 1..n {
                let f = lu[(i, k)] / d;
                lu[(i, k)] = f;
                if f != 0.0 {
                    for c in k + 1..n {
                        lu[(i, c)] -= f * lu[(k, c)];
                    }
                }
            }
        }
        Ok(Self { lu, perm, sign })
    }

    pub fn determinant(&self) -> f64 {
        (0..self.lu.rows()).map(|i| self.lu[(i, i)]).product::<f64>() * self.sign
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.lu.rows();
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                x[i] -= self.lu[(i, k)] * x[k];
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                x[i] -= self.lu[(i, k)] * x[k];
            }
            let d = self.lu[(i, i)];
            if d == 0.0 {
                return Err(Error::NotPositiveDefinite(i));
            }
            x[i] /= d;
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<DenseMatrix> {
        let n = self.lu.rows();
        let mut inv = DenseMatrix::zeros(n, n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e.iter_mut().for_each(|v| *v = 0.0);
            e[j] = 1.0;
            inv.set_column(j, &self.solve(&e)?);
        }
        Ok(inv)
    }
}

/// Rank by row echelon form with complete pivoting; pivots at or below
/// `rtol · max|a|` count as zero.
pub fn echelon_rank(a: &DenseMatrix, rtol: f64) -> usize {
    let (r, c) = a.shape();
    let mut m = a.clone();
    let tol = rtol * m.max_abs();
    let mut rank = 0;
    let mut col_used = vec![false; c];
    let mut row_used = vec![false; r];
    loop {
        let mut best = (0.0, 0, 0);
        for i in (0..r).filter(|&i| !row_used[i]) {
            for j in (0..c).filter(|&j| !col_used[j]) {
                if m[(i, j)].abs() > best.0 {
                    best = (m[(i, j)].abs(), i, j);
                }
            }
        }
        if best.0 <= tol {
            return rank;
        }
        let (_, pi, pj) = best;
        row_used[pi] = true;
        col_used[pj] = true;
        rank += 1;
        for i in (0..r).filter(|&i| !row_used[i]) {
            let f = m[(i, pj)] / m[(pi, pj)];
            if f != 0.0 {
                for j in 0..c {
                    m[(i, j)] -= f * m[(pi, j)];
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_determinant() {
        let a = DenseMatrix::from_rows(&[vec![0.0, 2.0, 1.0], vec![1.0, 1.0, 0.0], vec![3.0, 0.0, 1.0]]).unwrap();
        let lu = Lu::new(&a).unwrap();
        assert!((lu.determinant() - (-5.0)).abs() < 1e-14);
        let prod = a.matmul(&lu.inverse().unwrap());
        assert!(prod.sub(&DenseMatrix::identity(3)).max_abs() < 1e-14);
    }

    #[test]
    fn echelon_rank_of_rank_one() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0], vec![3.0, 6.0]]).unwrap();
        assert_eq!(echelon_rank(&a, 1e-12), 1);
    }
}
