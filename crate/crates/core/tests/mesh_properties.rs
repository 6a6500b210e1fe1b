mod common;

use common::TWENTY_DEGREES;
use crstokes::mesh::{check_admissible, extract_patch, random_patch, refine_uniform, seeds, Triangulation};
use proptest::prelude::*;

fn seed_mesh() -> impl Strategy<Value = Triangulation> {
    prop_oneof![
        Just(seeds::criss_cross_square()),
        Just(seeds::l_shape()),
        Just(seeds::disk(12)),
        (3usize..=10, 0u64..1000).prop_map(|(m, s)| random_patch(m, TWENTY_DEGREES, s).unwrap().to_triangulation().unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn refinement_quadruples_and_keeps_shape(tri in seed_mesh()) {
        let fine = refine_uniform(&tri);
        prop_assert_eq!(fine.n_triangles(), 4 * tri.n_triangles());
        prop_assert_eq!(fine.n_vertices(), tri.n_vertices() + tri.edges().len());
        prop_assert!((fine.area() - tri.area()).abs() <= 1e-12 * tri.area());
        prop_assert!((fine.min_angle() - tri.min_angle()).abs() <= 1e-12);
        prop_assert!((fine.h_max() - 0.5 * tri.h_max()).abs() <= 1e-12 * tri.h_max());
        // Euler characteristic of a disk
        let chi = fine.n_vertices() as i64 - fine.edges().len() as i64 + fine.n_triangles() as i64;
        prop_assert_eq!(chi, 1);
    }

    #[test]
    fn json_round_trip(tri in seed_mesh()) {
        let back = Triangulation::from_json_str(&tri.to_json_string()).unwrap();
        prop_assert_eq!(back.to_mesh_file(), tri.to_mesh_file());
    }

    #[test]
    fn every_interior_vertex_has_a_closed_fan(tri in seed_mesh()) {
        let fine = refine_uniform(&tri);
        for &z in fine.interior_vertices() {
            let patch = extract_patch(&fine, z).unwrap();
            let tris = patch.triangles.as_ref().unwrap();
            let ring = patch.ring_vertices.as_ref().unwrap();
            for j in 0..patch.m() {
                // consecutive triangles share the spoke z–P(j+1)
                let (a, b) = (fine.triangles()[tris[j]], fine.triangles()[tris[(j + 1) % patch.m()]]);
                let spoke = ring[(j + 1) % patch.m()];
                prop_assert!(a.contains(&z) && a.contains(&spoke) && b.contains(&z) && b.contains(&spoke));
            }
        }
    }

    #[test]
    fn random_patches_respect_the_angle_bound(m in 3usize..=12, seed in 0u64..10_000) {
        let patch = random_patch(m, TWENTY_DEGREES, seed).unwrap();
        prop_assert!(patch.min_angle() >= TWENTY_DEGREES - 1e-12);
        prop_assert_eq!(random_patch(m, TWENTY_DEGREES, seed).unwrap().ring, patch.ring);
    }
}

#[test]
fn criss_cross_family_stays_admissible() {
    let mut tri = seeds::criss_cross_square();
    for _ in 0..4 {
        let r = check_admissible(&tri, TWENTY_DEGREES, 1);
        assert!(r.admissible && r.has_interior_vertex);
        assert!(r.connectivity_m.unwrap() <= 1);
        tri = refine_uniform(&tri);
    }
}

#[test]
fn hexagon_patch_round_trips() {
    let hex = crstokes::mesh::regular_patch(6).unwrap();
    let tri = hex.to_triangulation().unwrap();
    let back = extract_patch(&tri, 0).unwrap();
    assert_eq!(back.m(), 6);
    for j in 0..6 {
        assert_eq!(back.p(j), hex.p(j));
    }
}
