#![allow(dead_code)]

use crstokes::geom::Triangle;
use crstokes::mesh::{random_patch, VertexPatch};
use crstokes::poly::{monomial_count, PolyOnTriangle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TWENTY_DEGREES: f64 = std::f64::consts::PI / 9.0;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape-regular patch with `m` drawn from 3..=12.
pub fn population_patch(seed: u64) -> VertexPatch {
    let m = 3 + (seed as usize * 7) % 10;
    random_patch(m, TWENTY_DEGREES, seed).expect("feasible patch")
}

pub fn random_poly(tri: Triangle, degree: usize, rng: &mut ChaCha8Rng) -> PolyOnTriangle {
    let c = (0..monomial_count(degree)).map(|_| rng.gen_range(-1.0..1.0)).collect();
    PolyOnTriangle::from_coeffs(tri, degree, c)
}

/// Piecewise polynomial with zero integral over the patch.
pub fn mean_free_data(patch: &VertexPatch, degree: usize, rng: &mut ChaCha8Rng) -> Vec<PolyOnTriangle> {
    let mut g: Vec<PolyOnTriangle> = (0..patch.m()).map(|i| random_poly(patch.triangle(i), degree, rng)).collect();
    let mean = g.iter().map(|q| q.integrate().unwrap()).sum::<f64>() / patch.area();
    for q in &mut g {
        *q = &*q - &PolyOnTriangle::constant(*q.triangle(), mean);
    }
    g
}

/// Same coefficients transported to the image patch.
pub fn transport(g: &[PolyOnTriangle], to: &VertexPatch) -> Vec<PolyOnTriangle> {
    g.iter()
        .enumerate()
        .map(|(i, q)| PolyOnTriangle::from_coeffs(to.triangle(i), q.degree(), q.coeffs().to_vec()))
        .collect()
}

pub fn rel_max_diff(a: &crstokes::linalg::DenseMatrix, b: &crstokes::linalg::DenseMatrix) -> f64 {
    a.sub(b).max_abs() / a.max_abs().max(b.max_abs())
}
