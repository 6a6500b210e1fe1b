use std::collections::VecDeque;

use super::matrix::DenseMatrix;

/// Certify nonsingularity of a weakly chained diagonally dominant matrix:
/// every row weakly diagonally dominant, at least one strictly, and every
/// row linked through nonzero off-diagonal entries to a strictly dominant
/// row. Returns `false` when the certificate does not apply.
pub fn wcdd_nonsingular(a: &DenseMatrix) -> bool {
    let n = a.rows();
    if n == 0 || n != a.cols() {
        return false;
    }
    let mut strict = vec![false; n];
    for i in 0..n {
        let diag = a[(i, i)].abs();
        let off: f64 = (0..n).filter(|&j| j != i).map(|j| a[(i, j)].abs()).sum();
        let slack = 1e-13 * (diag + off);
        if diag + slack < off {
            return false;
        }
        strict[i] = diag > off + slack;
    }
    if !strict.iter().any(|&s| s) {
        return false;
    }
    // Row i reaches row j through an edge i -> j when a[i][j] != 0; search
    // backwards from the strictly dominant rows.
    let mut reached = strict.clone();
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| strict[i]).collect();
    while let Some(j) = queue.pop_front() {
        for i in 0..n {
            if !reached[i] && i != j && a[(i, j)] != 0.0 {
                reached[i] = true;
                queue.push_back(i);
            }
        }
    }
    reached.into_iter().all(|r| r)
}

/// The k×k tridiagonal matrix with unit diagonal, `-λ_i` below and
/// `λ_i - 1` above the diagonal in row i.
pub fn convex_tridiagonal(lambdas: &[f64]) -> DenseMatrix {
    let k = lambdas.len();
    let mut t = DenseMatrix::identity(k);
    for (i, &l) in lambdas.iter().enumerate() {
        if i > 0 {
            t[(i, i - 1)] = -l;
        }
        if i + 1 < k {
            t[(i, i + 1)] = l - 1.0;
        }
    }
    t
}

/// `1 + F` for the m×m cyclic Frobenius companion `F` (ones on the
/// subdiagonal and in the top-right corner).
pub fn identity_plus_companion(m: usize) -> DenseMatrix {
    let mut a = DenseMatrix::identity(m);
    for i in 1..m {
        a[(i, i - 1)] = 1.0;
    }
    if m > 1 {
        a[(0, m - 1)] = 1.0;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_certified() {
        assert!(wcdd_nonsingular(&DenseMatrix::identity(5)));
    }

    #[test]
    fn all_ones_is_not() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!(!wcdd_nonsingular(&a));
    }

    #[test]
    fn half_convex_tridiagonal_is_certified() {
        assert!(wcdd_nonsingular(&convex_tridiagonal(&[0.5; 4])));
    }

    #[test]
    fn unchained_weak_row_is_rejected() {
        // second row weakly dominant but not linked to the strict first row
        let a = DenseMatrix::from_rows(&[vec![2.0, 0.0, 0.0], vec![0.0, 1.0, 1.0], vec![0.0, 1.0, 1.0]]).unwrap();
        assert!(!wcdd_nonsingular(&a));
    }
}
