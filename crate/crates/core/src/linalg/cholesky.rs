use super::matrix::{axpy, dot, DenseMatrix};
use crate::error::{Error, Result};

/// Lower Cholesky factor `a = l lᵗ` of a symmetric positive definite matrix.
#[derive(Clone, Debug)]
pub struct Cholesky {
    l: DenseMatrix,
}

impl Cholesky {
    pub fn new(a: &DenseMatrix) -> Result<Self> {
        let n = a.rows();
        if n != a.cols() {
            return Err(Error::Shape(format!("Cholesky of a {}x{} matrix", n, a.cols())));
        }
        let mut l = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let s = a[(i, j)] - dot(&l.row(i)[..j], &l.row(j)[..j]);
                if i == j {
                    if s <= 0.0 || !s.is_finite() {
                        return Err(Error::NotPositiveDefinite(i));
                    }
                    l[(i, i)] = s.sqrt();
                } else {
                    l[(i, j)] = s / l[(j, j)];
                }
            }
        }
        Ok(Self { l })
    }

    pub fn factor(&self) -> &DenseMatrix {
        &self.l
    }

    pub fn order(&self) -> usize {
        self.l.rows()
    }

    /// `b ← l⁻¹ b`, skipping the leading zeros of `b`.
    pub fn solve_lower_in_place(&self, b: &mut [f64]) {
        let n = self.order();
        let first = b.iter().position(|&v| v != 0.0).unwrap_or(n);
        for i in first..n {
            let s = b[i] - dot(&self.l.row(i)[first..i], &b[first..i]);
            b[i] = s / self.l[(i, i)];
        }
    }

    /// `b ← l⁻ᵗ b`.
    pub fn solve_upper_in_place(&self, b: &mut [f64]) {
        let n = self.order();
        for i in (0..n).rev() {
            b[i] /= self.l[(i, i)];
            let xi = b[i];
            axpy(-xi, &self.l.row(i)[..i], &mut b[..i]);
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_lower_in_place(&mut x);
        self.solve_upper_in_place(&mut x);
        x
    }

    /// Replace every row `r` of `rows` by `l⁻¹ r`.
    pub fn solve_lower_rows(&self, rows: &mut DenseMatrix) {
        for i in 0..rows.rows() {
            self.solve_lower_in_place(rows.row_mut(i));
        }
    }

    pub fn log_det(&self) -> f64 {
        (0..self.order()).map(|i| 2.0 * self.l[(i, i)].ln()).sum()
    }
}
