use serde::Serialize;

use super::patch::VertexPatch;
use super::triangulation::DEGENERACY_RTOL;
use crate::error::{Error, Result};

fn cot(x: f64) -> f64 {
    x.cos() / x.sin()
}

/// Per-edge geometry of a vertex patch, indexed like [`VertexPatch`].
///
/// In triangle `j`: `omega[j]` at `z`, `alpha[j]` at `P(j)`, `beta[j]` at `P(j+1)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PatchGeometry {
    pub m: usize,
    pub omega: Vec<f64>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub edge_length: Vec<f64>,
    pub area: Vec<f64>,
    /// `|E(j)|² / (2|T(j−1)|)`
    pub gamma_minus: Vec<f64>,
    /// `|E(j)|² / (2|T(j)|)`
    pub gamma_plus: Vec<f64>,
    pub gamma_minus_cot: Vec<f64>,
    pub gamma_plus_cot: Vec<f64>,
    pub kappa: Vec<f64>,
    pub mu: Vec<f64>,
    pub gamma: Vec<f64>,
    pub lambda: Vec<f64>,
    /// 1 iff `m` is even.
    pub sigma: usize,
    /// Largest relative gap between the length/area and cotangent forms.
    pub formula_mismatch: f64,
}

impl PatchGeometry {
    pub fn new(patch: &VertexPatch) -> Result<Self> {
        let m = patch.m();
        let scale2 = (0..m).map(|j| patch.edge_length(j).powi(2)).fold(0.0, f64::max);
        let (mut omega, mut alpha, mut beta, mut area) = (vec![0.0; m], vec![0.0; m], vec![0.0; m], vec![0.0; m]);
        for j in 0..m {
            let t = patch.triangle(j);
            let a = t.signed_area();
            if a <= DEGENERACY_RTOL * scale2 {
                return Err(Error::DegenerateTriangle(j));
            }
            let [w, al, be] = t.angles();
            omega[j] = w;
            alpha[j] = al;
            beta[j] = be;
            area[j] = a;
        }
        let edge_length: Vec<f64> = (0..m).map(|j| patch.edge_length(j)).collect();
        let prev = |j: usize| (j + m - 1) % m;
        let gamma_minus: Vec<f64> = (0..m).map(|j| edge_length[j].powi(2) / (2.0 * area[prev(j)])).collect();
        let gamma_plus: Vec<f64> = (0..m).map(|j| edge_length[j].powi(2) / (2.0 * area[j])).collect();
        let gamma_minus_cot: Vec<f64> = (0..m).map(|j| cot(omega[prev(j)]) + cot(beta[prev(j)])).collect();
        let gamma_plus_cot: Vec<f64> = (0..m).map(|j| cot(omega[j]) + cot(alpha[j])).collect();
        let kappa: Vec<f64> = (0..m).map(|j| cot(alpha[j]) + cot(beta[prev(j)])).collect();
        let mu: Vec<f64> = (0..m).map(|j| cot(omega[prev(j)]) + cot(omega[j])).collect();
        let gamma: Vec<f64> = (0..m).map(|j| gamma_minus[j] + gamma_plus[j]).collect();
        let lambda: Vec<f64> = (0..m).map(|j| gamma_minus[j] / gamma[j]).collect();
        let rel = |x: f64, y: f64| (x - y).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE);
        let mut formula_mismatch = 0.0f64;
        for j in 0..m {
            formula_mismatch = formula_mismatch
                .max(rel(gamma_minus[j], gamma_minus_cot[j]))
                .max(rel(gamma_plus[j], gamma_plus_cot[j]))
                .max(rel(gamma[j], kappa[j] + mu[j]));
        }
        Ok(Self {
            m,
            omega,
            alpha,
            beta,
            edge_length,
            area,
            gamma_minus,
            gamma_plus,
            gamma_minus_cot,
            gamma_plus_cot,
            kappa,
            mu,
            gamma,
            lambda,
            sigma: usize::from(m.is_multiple_of(2)),
            formula_mismatch,
        })
    }

    pub fn prev(&self, j: usize) -> usize {
        (j + self.m - 1) % self.m
    }

    /// Number of ring vertices with `κ_j > 0`.
    pub fn positive_kappa_count(&self) -> usize {
        self.kappa.iter().filter(|&&k| k > 0.0).count()
    }

    pub fn min_angle(&self) -> f64 {
        self.omega.iter().chain(&self.alpha).chain(&self.beta).copied().fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{extract_patch, patch::regular_patch, seeds};

    #[test]
    fn equilateral_hexagon() {
        let g = PatchGeometry::new(&regular_patch(6).unwrap()).unwrap();
        let c = 2.0 / 3f64.sqrt();
        for j in 0..6 {
            assert!((g.gamma_minus[j] - c).abs() < 1e-12);
            assert!((g.gamma_plus[j] - c).abs() < 1e-12);
            assert!((g.kappa[j] - c).abs() < 1e-12);
            assert!((g.mu[j] - c).abs() < 1e-12);
            assert!((g.gamma[j] - 2.0 * c).abs() < 1e-12);
            assert!((g.lambda[j] - 0.5).abs() < 1e-12);
        }
        assert_eq!(g.sigma, 1);
    }

    #[test]
    fn crisscross_square() {
        let g = PatchGeometry::new(&extract_patch(&seeds::criss_cross_square(), 4).unwrap()).unwrap();
        for j in 0..4 {
            assert!((g.omega[j] - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
            assert!((g.alpha[j] - std::f64::consts::FRAC_PI_4).abs() < 1e-14);
            assert!((g.beta[j] - std::f64::consts::FRAC_PI_4).abs() < 1e-14);
            assert!((g.gamma_minus[j] - 1.0).abs() < 1e-12 && (g.gamma_plus[j] - 1.0).abs() < 1e-12);
            assert!((g.kappa[j] - 2.0).abs() < 1e-12 && g.mu[j].abs() < 1e-12);
            assert!((g.lambda[j] - 0.5).abs() < 1e-12);
        }
        assert!(g.formula_mismatch < 1e-12);
    }
}
