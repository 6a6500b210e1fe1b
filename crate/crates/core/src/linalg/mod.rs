//! Dense linear algebra: SVD-based kernels and ranks, symmetric and
//! generalized eigenproblems, Cholesky, least squares, and the weakly
//! chained diagonal dominance certificate.

mod cholesky;
mod eigen;
mod generalized;
mod lu;
mod matrix;
mod svd;
mod wcdd;

pub use cholesky::Cholesky;
pub use eigen::{jacobi_eigen, min_eigenpair, symmetric_eigenvalues, SymmetricEigen, Tridiagonal, JACOBI_MAX_ORDER};
pub use generalized::{min_nonzero_generalized_eig, min_nonzero_generalized_eig_pair, GeneralizedEig};
pub use lu::{echelon_rank, Lu};
pub use matrix::{axpy, dot, norm2, DenseMatrix};
pub use svd::{
    householder_qr_vectors, lstsq, lstsq_with_rtol, max_principal_angle, nullspace, orthonormal_complement,
    orthonormal_span, range_basis, rank, svd, Svd, RANK_RTOL,
};
pub use wcdd::{convex_tridiagonal, identity_plus_companion, wcdd_nonsingular};
