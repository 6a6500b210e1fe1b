//! Legendre polynomials, Gauss points, triangle quadrature and polynomial
//! calculus in barycentric coordinates.

pub mod legendre;
pub mod quadrature;
pub mod triangle_poly;

pub use legendre::{gauss_legendre, gauss_points, legendre, legendre_derivative_at_one};
pub use quadrature::{triangle_quadrature, QuadratureRule, MAX_QUADRATURE_DEGREE};
pub use triangle_poly::{
    mass_matrix, monomial_count, monomial_exponents, monomial_index, monomial_integral, PolyOnTriangle, VectorPoly,
};

/// Edge moments `∫_0^1 f(s) Le_k(2s − 1) ds` for k < `count`, by Gauss rule
/// with `n` points applied to `f`.
pub fn edge_moments(count: usize, n: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
    let (x, w) = gauss_legendre(n);
    (0..count)
        .map(|k| x.iter().zip(&w).map(|(xi, wi)| 0.5 * wi * f(0.5 * (xi + 1.0)) * legendre(k, *xi).0).sum())
        .collect()
}
