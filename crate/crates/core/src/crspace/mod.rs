//! The global Crouzeix–Raviart velocity space with zero boundary
//! conditions, the discontinuous pressure space, and the matrices that
//! define the inf-sup constant.

pub mod operators;
pub mod space;

pub use operators::{assemble_operators, energy, OperatorSet};
pub use space::{
    constraint_matrix, cr_space, cr_space_local, cr_space_nullspace, edge_functionals, gauss_point_defect,
    ConstraintKind, DofKind, TriangleBlock, VelocitySpace, DENSE_ROUTE_LIMIT,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{echelon_rank, nullspace, rank, symmetric_eigenvalues, DenseMatrix, RANK_RTOL};
    use crate::mesh::{refine_uniform, seeds, Triangulation};

    #[test]
    fn lowest_order_dimension_on_crisscross() {
        let t = seeds::criss_cross_square();
        assert_eq!(cr_space(&t, 1).unwrap().dim, 8);
        assert_eq!(cr_space_nullspace(&t, 1, ConstraintKind::Moments).unwrap().dim, 8);
    }

    #[test]
    fn moment_and_gauss_constraints_give_equal_dimensions() {
        let t = refine_uniform(&seeds::criss_cross_square());
        for p in [2, 3] {
            let a = cr_space_nullspace(&t, p, ConstraintKind::Moments).unwrap();
            let b = cr_space_nullspace(&t, p, ConstraintKind::GaussPoints).unwrap();
            assert_eq!(a.dim, b.dim, "p = {p}");
        }
        let local = cr_space(&t, 3).unwrap();
        assert_eq!(local.dim, cr_space_nullspace(&t, 3, ConstraintKind::Moments).unwrap().dim);
    }

    #[test]
    fn quadratic_dimension_matches_echelon_oracle() {
        let t = seeds::criss_cross_square();
        let c = constraint_matrix(&t, 2, ConstraintKind::Moments);
        let space = cr_space(&t, 2).unwrap();
        assert_eq!(space.dim, c.cols() - echelon_rank(&c, 1e-10));
    }

    #[test]
    fn rank_nullity_and_conformity() {
        let t = refine_uniform(&seeds::l_shape());
        for p in [1, 2, 3] {
            let c = constraint_matrix(&t, p, ConstraintKind::Moments);
            let space = cr_space(&t, p).unwrap();
            assert_eq!(space.dim + rank(&c, RANK_RTOL).unwrap(), c.cols(), "p = {p}");
            for k in (0..space.dim).step_by(7) {
                let mut e = vec![0.0; space.dim];
                e[k] = 1.0;
                assert!(gauss_point_defect(&t, &space, &e) <= 1e-10, "p = {p}, k = {k}");
            }
        }
    }

    #[test]
    fn nullspace_route_is_orthonormal() {
        let t = seeds::criss_cross_square();
        let s = cr_space_nullspace(&t, 3, ConstraintKind::Moments).unwrap();
        let b = s.dense_basis();
        assert!(b.tr_matmul(&b).sub(&DenseMatrix::identity(s.dim)).max_abs() < 1e-12);
    }

    #[test]
    fn operators_have_expected_structure() {
        let t = refine_uniform(&seeds::criss_cross_square());
        let space = cr_space(&t, 3).unwrap();
        let ops = assemble_operators(&t, &space).unwrap();
        assert!(ops.k.is_symmetric(1e-13 * ops.k.max_abs()));
        assert!(symmetric_eigenvalues(&ops.k).unwrap()[0] > 0.0);
        assert!(ops.constant_pressure_defect() <= 1e-12);
        assert!(nullspace(&ops.mp, RANK_RTOL).unwrap().cols() == 0);
    }

    #[test]
    fn linear_pressure_mass_on_unit_triangle() {
        // p = 2 gives linear pressures; the monomials 1, λ0, λ1 map to the
        // nodal basis λ2, λ0, λ1 by a fixed change of basis.
        let t = Triangulation::build(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], vec![[0, 1, 2]]).unwrap();
        let space = VelocitySpace::from_dense(2, 1, &DenseMatrix::zeros(12, 0), DofKind::GenericNullspace);
        let ops = assemble_operators(&t, &space).unwrap();
        // columns: λ0, λ1, λ2 in monomial coefficients (1, λ0, λ1)
        let cols = DenseMatrix::from_rows(&[vec![0.0, 0.0, 1.0], vec![1.0, 0.0, -1.0], vec![0.0, 1.0, -1.0]]).unwrap();
        let nodal = cols.tr_matmul(&ops.mp.matmul(&cols));
        let want = DenseMatrix::from_rows(&[vec![2.0, 1.0, 1.0], vec![1.0, 2.0, 1.0], vec![1.0, 1.0, 2.0]]).unwrap().scaled(0.5 / 12.0);
        assert!(nodal.sub(&want).max_abs() < 1e-15);
    }
}
