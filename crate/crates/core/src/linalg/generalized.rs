use super::cholesky::Cholesky;
use super::eigen::min_eigenpair;
use super::matrix::{axpy, dot, norm2, DenseMatrix};
use super::svd::{householder_qr_vectors, range_basis};
use crate::error::{Error, Result};

/// Smallest eigenpair of the pencil `(S, M)` on the `M`-orthogonal
/// complement of a deflated subspace.
#[derive(Clone, Debug)]
pub struct GeneralizedEig {
    pub value: f64,
    /// `M`-normalised eigenvector in the original coordinates.
    pub vector: Vec<f64>,
    /// `‖S x − λ M x‖ / ((‖S‖_F + |λ| ‖M‖_F) ‖x‖)`.
    pub residual: f64,
}

/// Minimum eigenvalue of `S x = λ M x` restricted to the `M`-orthogonal
/// complement of `span(deflate)`.
///
/// Route: Cholesky `M = L Lᵗ`, congruence `C = L⁻¹ S L⁻ᵗ`, Householder
/// reflection of the deflated directions `Lᵗ d` onto the leading
/// coordinates, then a symmetric eigensolve of the trailing block.
pub fn min_nonzero_generalized_eig_pair(
    s: &DenseMatrix,
    mass: &DenseMatrix,
    deflate: &[Vec<f64>],
) -> Result<GeneralizedEig> {
    let n = s.rows();
    if s.cols() != n || mass.shape() != (n, n) {
        return Err(Error::Shape("pencil matrices must be square and of equal order".into()));
    }
    let chol = Cholesky::new(mass)?;
    let mut half = s.clone();
    chol.solve_lower_rows(&mut half);
    let mut c = half.transpose();
    chol.solve_lower_rows(&mut c);
    c.symmetrize();

    // Deflated directions in the congruent coordinates: y = Lᵗ x.
    let l = chol.factor();
    let mut cols = Vec::with_capacity(deflate.len());
    for d in deflate {
        if d.len() != n {
            return Err(Error::Shape("deflation vector length".into()));
        }
        cols.push(l.tr_matvec(d));
    }
    let basis = if cols.is_empty() {
        DenseMatrix::zeros(n, 0)
    } else {
        range_basis(&DenseMatrix::from_columns(&cols)?, 1e-12)?
    };
    let k = basis.cols();
    if k >= n {
        return Err(Error::AllDeflated);
    }
    let refl = householder_qr_vectors(&basis);
    // c ← H_k ⋯ H_1 c H_1 ⋯ H_k
    for h in &refl {
        reflect_two_sided(&mut c, h);
    }
    let trailing: Vec<usize> = (k..n).collect();
    let block = c.select(&trailing, &trailing);
    let (value, y_tail) = min_eigenpair(&block)?;

    let mut y = vec![0.0; n];
    y[k..].copy_from_slice(&y_tail);
    for h in refl.iter().rev() {
        let f = 2.0 * dot(h, &y);
        axpy(-f, h, &mut y);
    }
    chol.solve_upper_in_place(&mut y);
    let x = y;
    let sx = s.matvec(&x);
    let mx = mass.matvec(&x);
    let r: Vec<f64> = sx.iter().zip(&mx).map(|(a, b)| a - value * b).collect();
    let denom = (s.frobenius_norm() + value.abs() * mass.frobenius_norm()) * norm2(&x);
    let residual = if denom > 0.0 { norm2(&r) / denom } else { 0.0 };
    Ok(GeneralizedEig { value, vector: x, residual })
}

/// Scalar form of [`min_nonzero_generalized_eig_pair`].
pub fn min_nonzero_generalized_eig(s: &DenseMatrix, mass: &DenseMatrix, deflate: &[Vec<f64>]) -> Result<f64> {
    Ok(min_nonzero_generalized_eig_pair(s, mass, deflate)?.value)
}

fn reflect_two_sided(c: &mut DenseMatrix, h: &[f64]) {
    let n = c.rows();
    // p = C h, then C ← C − 2 h pᵗ − 2 p hᵗ + 4 (hᵗ p) h hᵗ
    let p = c.matvec(h);
    let hp = dot(h, &p);
    let w: Vec<f64> = p.iter().zip(h).map(|(pi, hi)| 2.0 * pi - 2.0 * hp * hi).collect();
    for i in 0..n {
        let (hi, wi) = (h[i], w[i]);
        if hi == 0.0 && wi == 0.0 {
            continue;
        }
        let row = c.row_mut(i);
        for ((r, hj), wj) in row.iter_mut().zip(h).zip(&w) {
            *r -= hi * wj + wi * hj;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_pencil() {
        let i3 = DenseMatrix::identity(3);
        assert!((min_nonzero_generalized_eig(&i3, &i3, &[]).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn deflates_the_zero_mode() {
        let s = DenseMatrix::from_diag(&[0.0, 2.0, 5.0]);
        let v = min_nonzero_generalized_eig(&s, &DenseMatrix::identity(3), &[vec![1.0, 0.0, 0.0]]).unwrap();
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn two_by_two_by_hand() {
        let s = DenseMatrix::from_diag(&[0.0, 3.0]);
        let m = DenseMatrix::from_diag(&[1.0, 2.0]);
        let e = min_nonzero_generalized_eig_pair(&s, &m, &[vec![1.0, 0.0]]).unwrap();
        assert!((e.value - 1.5).abs() < 1e-14);
        assert!(e.residual < 1e-14);
    }

    #[test]
    fn rejects_full_deflation_and_indefinite_mass() {
        let i2 = DenseMatrix::identity(2);
        assert_eq!(
            min_nonzero_generalized_eig(&i2, &i2, &[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap_err(),
            Error::AllDeflated
        );
        let bad = DenseMatrix::from_diag(&[1.0, -1.0]);
        assert!(matches!(min_nonzero_generalized_eig(&i2, &bad, &[]), Err(Error::NotPositiveDefinite(_))));
    }
}
