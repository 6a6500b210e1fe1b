//! Collapsed-tensor Gauss rules on the reference triangle.

use std::sync::OnceLock;

use super::legendre::gauss_legendre;
use crate::error::{Error, Result};

pub const MAX_QUADRATURE_DEGREE: usize = 20;

/// Quadrature on a triangle in barycentric form; weights sum to one and are
/// scaled by the triangle area at use.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
    pub degree: usize,
}

impl QuadratureRule {
    /// Collapsed Gauss (Duffy) rule with `⌈(D+2)/2⌉²` points, exact for total
    /// degree `D`.
    pub fn collapsed_gauss(degree: usize) -> Result<Self> {
        if degree == 0 || degree > MAX_QUADRATURE_DEGREE {
            return Err(Error::QuadratureDegree(degree));
        }
        let n = (degree + 3) / 2;
        let (x, w) = gauss_legendre(n);
        let mut points = Vec::with_capacity(n * n);
        let mut weights = Vec::with_capacity(n * n);
        for (xi, wi) in x.iter().zip(&w) {
            let s = 0.5 * (xi + 1.0);
            for (yj, wj) in x.iter().zip(&w) {
                let t = 0.5 * (yj + 1.0);
                let l0 = s;
                let l1 = (1.0 - s) * t;
                points.push([l0, l1, 1.0 - l0 - l1]);
                // reference area 1/2 normalised to 1: factor 2 · (1/4) · (1 - s)
                weights.push(0.5 * wi * wj * (1.0 - s));
            }
        }
        Ok(Self { points, weights, degree })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Cached rule of exactness at least `degree` (degree 0 maps to 1).
pub fn triangle_quadrature(degree: usize) -> Result<&'static QuadratureRule> {
    static RULES: OnceLock<Vec<QuadratureRule>> = OnceLock::new();
    if degree > MAX_QUADRATURE_DEGREE {
        return Err(Error::QuadratureDegree(degree));
    }
    let rules = RULES.get_or_init(|| {
        (1..=MAX_QUADRATURE_DEGREE)
            .map(|d| QuadratureRule::collapsed_gauss(d).expect("supported degree"))
            .collect()
    });
    Ok(&rules[degree.max(1) - 1])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: usize) -> f64 {
        (1..=n).map(|k| k as f64).product()
    }

    /// ∫ λ0^a λ1^b λ2^c over a triangle of area |T| is a! b! c! 2|T| / (a+b+c+2)!.
    fn beta_oracle(a: usize, b: usize, c: usize, area: f64) -> f64 {
        factorial(a) * factorial(b) * factorial(c) * 2.0 * area / factorial(a + b + c + 2)
    }

    #[test]
    fn weights_sum_to_one() {
        for d in 1..=MAX_QUADRATURE_DEGREE {
            let r = triangle_quadrature(d).unwrap();
            let s: f64 = r.weights.iter().sum();
            assert!((s - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn reference_examples() {
        let r = triangle_quadrature(3).unwrap();
        let area = 0.5;
        let one: f64 = r.weights.iter().map(|w| w * area).sum();
        assert!((one - 0.5).abs() < 1e-15);
        let v: f64 = r.points.iter().zip(&r.weights).map(|(p, w)| w * area * p[0] * p[0] * p[1]).sum();
        assert!((v - 1.0 / 60.0).abs() < 1e-15);
    }

    #[test]
    fn exact_for_all_monomials_up_to_declared_degree() {
        for d in 1..=MAX_QUADRATURE_DEGREE {
            let r = triangle_quadrature(d).unwrap();
            for a in 0..=d {
                for b in 0..=(d - a) {
                    for c in 0..=(d - a - b) {
                        let exact = beta_oracle(a, b, c, 1.0);
                        let q: f64 = r
                            .points
                            .iter()
                            .zip(&r.weights)
                            .map(|(p, w)| w * p[0].powi(a as i32) * p[1].powi(b as i32) * p[2].powi(c as i32))
                            .sum();
                        assert!((q - exact).abs() <= 1e-13 * exact, "D={d} ({a},{b},{c})");
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert_eq!(QuadratureRule::collapsed_gauss(21).unwrap_err(), Error::QuadratureDegree(21));
        assert_eq!(QuadratureRule::collapsed_gauss(0).unwrap_err(), Error::QuadratureDegree(0));
    }
}
