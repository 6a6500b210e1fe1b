mod common;

use common::*;
use crstokes::crspace::{assemble_operators, constraint_matrix, cr_space, gauss_point_defect, ConstraintKind};
use crstokes::divinverse::minimal_cr_space;
use crstokes::geom::{add, rotate, scale};
use crstokes::infsup::{
    beta_from_operators, constant_mode_residual, inf_sup_constant, refinement_sweep, schur_complement, SpaceKind,
};
use crstokes::linalg::{dot, min_nonzero_generalized_eig_pair, norm2, rank, Cholesky, RANK_RTOL};
use crstokes::mesh::{random_patch, refine_uniform, seeds, Triangulation};
use proptest::prelude::*;
use rand::Rng;

fn fan(m: usize, seed: u64) -> Triangulation {
    random_patch(m, TWENTY_DEGREES, seed).unwrap().to_triangulation().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn rank_nullity_of_the_constraints(m in 3usize..=8, seed in 0u64..1000, p in 1usize..=3) {
        let tri = refine_uniform(&fan(m, seed));
        let c = constraint_matrix(&tri, p, ConstraintKind::Moments);
        let space = cr_space(&tri, p).unwrap();
        prop_assert_eq!(space.dim + rank(&c, RANK_RTOL).unwrap(), c.cols());
    }

    #[test]
    fn random_members_are_continuous_at_gauss_points(m in 3usize..=8, seed in 0u64..1000, p in 1usize..=4) {
        let tri = fan(m, seed);
        let space = cr_space(&tri, p).unwrap();
        let mut rng = rng(seed);
        for _ in 0..20 {
            let c: Vec<f64> = (0..space.dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            prop_assert!(gauss_point_defect(&tri, &space, &c) <= 1e-10);
        }
    }

    #[test]
    fn beta_is_invariant_under_similarity(m in 3usize..=8, seed in 0u64..1000, angle in 0.0f64..6.3, c in 0.1f64..10.0) {
        let tri = fan(m, seed);
        let moved = tri.mapped(|x| add(scale(rotate(x, angle), c), [0.3, 2.0])).unwrap();
        for p in [1, 3] {
            let (a, b) = (inf_sup_constant(&tri, p, SpaceKind::Full).unwrap(), inf_sup_constant(&moved, p, SpaceKind::Full).unwrap());
            prop_assert!((a.beta - b.beta).abs() <= 1e-9 * a.beta);
            prop_assert!(a.residual <= 1e-8);
        }
    }

    #[test]
    fn minimal_space_never_beats_the_full_space(m in 3usize..=8, seed in 0u64..1000) {
        let tri = refine_uniform(&fan(m, seed));
        let full = inf_sup_constant(&tri, 3, SpaceKind::Full).unwrap();
        let min = inf_sup_constant(&tri, 3, SpaceKind::Minimal).unwrap();
        prop_assert!(min.dof_v < full.dof_v);
        prop_assert!(min.beta <= full.beta * (1.0 + 1e-12));
    }
}

#[test]
fn sampled_pressures_bound_beta_from_above() {
    let tri = seeds::criss_cross_square();
    let ops = assemble_operators(&tri, &cr_space(&tri, 3).unwrap()).unwrap();
    let s = schur_complement(&ops).unwrap();
    let eig = min_nonzero_generalized_eig_pair(&s, &ops.mp, std::slice::from_ref(&ops.constant)).unwrap();
    let beta = eig.value.sqrt();
    assert!(beta > 0.01);
    // sup over v of ∫ q div v / ‖v‖ is ‖K^{-1/2} Bᵗ q‖, evaluated directly
    let k = Cholesky::new(&ops.k).unwrap();
    let quotient = |q: &[f64]| {
        let bq = ops.bdiv.tr_matvec(q);
        (dot(&bq, &k.solve(&bq)) / dot(q, &ops.mp.matvec(q))).sqrt()
    };
    let mean_free = |q: &mut Vec<f64>| {
        let shift = dot(q, &ops.mean) / dot(&ops.constant, &ops.mean);
        for (x, c) in q.iter_mut().zip(&ops.constant) {
            *x -= shift * c;
        }
    };
    let mut rng = rng(200);
    let mut sampled_inf = f64::INFINITY;
    for _ in 0..200 {
        let mut q: Vec<f64> = (0..ops.n_pressure()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        mean_free(&mut q);
        sampled_inf = sampled_inf.min(quotient(&q));
    }
    assert!(sampled_inf >= beta * (1.0 - 1e-12));
    let mut q = eig.vector.clone();
    assert!(dot(&q, &ops.mean).abs() <= 1e-12 * norm2(&q) * norm2(&ops.mean));
    mean_free(&mut q);
    assert!((quotient(&q) - beta).abs() <= 1e-9 * beta);
}

#[test]
fn constant_pressure_is_deflated_exactly() {
    for tri in [seeds::criss_cross_square(), seeds::l_shape(), seeds::disk(12)] {
        for p in [1, 2, 3] {
            let ops = assemble_operators(&tri, &cr_space(&tri, p).unwrap()).unwrap();
            assert!(constant_mode_residual(&ops, &schur_complement(&ops).unwrap()) <= 1e-10);
        }
    }
}

#[test]
fn beta_is_bitwise_reproducible() {
    let tri = refine_uniform(&seeds::l_shape());
    let ops = assemble_operators(&tri, &cr_space(&tri, 3).unwrap()).unwrap();
    let a = beta_from_operators(&ops).unwrap().0;
    let b = inf_sup_constant(&tri, 3, SpaceKind::Full).unwrap().beta;
    assert_eq!(a.to_bits(), b.to_bits());
    let again = refinement_sweep(&tri, 3, 1, SpaceKind::Full).unwrap();
    assert_eq!(again[0].beta.to_bits(), b.to_bits());
}

#[test]
fn minimal_space_is_a_subspace_on_the_disk() {
    let tri = seeds::disk(12);
    let min = minimal_cr_space(&tri, 3).unwrap();
    let c = constraint_matrix(&tri, 3, ConstraintKind::Moments);
    let basis = min.dense_basis();
    assert!(c.matmul(&basis).max_abs() <= 1e-12 * basis.max_abs());
}
