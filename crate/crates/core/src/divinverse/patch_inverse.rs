use super::bubble::{bubble_least_squares, BubbleBasis};
use crate::error::{Error, Result};
use crate::linalg::{lstsq_with_rtol, DenseMatrix};
use crate::mesh::VertexPatch;
use crate::patchmat::{lambda_apply, m_from_basis, PatchBasis, PatchField};
use crate::poly::PolyOnTriangle;

/// Velocity on a patch as patch-basis plus per-triangle bubble coefficients.
#[derive(Clone, Debug)]
pub struct PatchVelocity {
    pub patch_coeffs: Vec<f64>,
    pub bubble_coeffs: Vec<Vec<f64>>,
    pub field: PatchField,
    /// Piecewise `H¹` seminorm.
    pub seminorm: f64,
}

impl PatchVelocity {
    pub fn from_coeffs(basis: &PatchBasis, bubbles: &[BubbleBasis], patch_coeffs: Vec<f64>, bubble_coeffs: Vec<Vec<f64>>) -> Result<Self> {
        let mut field = basis.combine(&patch_coeffs);
        for (i, (b, c)) in bubbles.iter().zip(&bubble_coeffs).enumerate() {
            let extra = b.combine(c);
            field.pieces[i] = Some(match field.pieces[i].take() {
                Some(v) => v.add(&extra),
                None => extra,
            });
        }
        let seminorm = field.h1_seminorm_sq()?.sqrt();
        Ok(Self { patch_coeffs, bubble_coeffs, field, seminorm })
    }

    /// Piecewise divergence, one polynomial per triangle.
    pub fn divergence(&self, patch: &VertexPatch) -> Vec<PolyOnTriangle> {
        (0..patch.m())
            .map(|i| self.field.div(i).unwrap_or_else(|| PolyOnTriangle::zero(patch.triangle(i), 0)))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct PatchInverse {
    pub velocity: PatchVelocity,
    /// `‖g − div_pw v‖ / ‖g‖` over the patch.
    pub residual: f64,
    /// `‖v‖_pw / ‖g‖`.
    pub stability_ratio: f64,
}

pub fn l2_norm_pw(g: &[PolyOnTriangle]) -> Result<f64> {
    Ok(g.iter().map(|q| q.l2_norm().map(|n| n * n)).sum::<Result<f64>>()?.sqrt())
}

/// Right inverse of the piecewise divergence on a patch for mean-free `g`
/// (one polynomial of degree ≤ p − 1 per triangle, on `patch.triangle(i)`).
pub fn patch_right_inverse(patch: &VertexPatch, p: usize, g: &[PolyOnTriangle]) -> Result<PatchInverse> {
    let m = patch.m();
    if g.len() != m {
        return Err(Error::Shape(format!("{} pieces for a patch of {m} triangles", g.len())));
    }
    let gn = l2_norm_pw(g)?;
    let mean: f64 = g.iter().map(PolyOnTriangle::integrate).sum::<Result<f64>>()?;
    if mean.abs() > 1e-10 * gn * patch.area().sqrt() {
        return Err(Error::NonzeroMean(mean));
    }
    let basis = PatchBasis::new(patch, p)?;
    let mt = m_from_basis(&basis, m)?.transpose();
    let mut rhs = Vec::with_capacity(4 * m);
    for q in g {
        rhs.extend(lambda_apply(q)?);
    }
    let (coeffs, _) = lstsq_with_rtol(&mt, &rhs, 1e-12)?;
    let field = basis.combine(&coeffs);
    let bubbles = (0..m).map(|i| BubbleBasis::new(patch.triangle(i), p)).collect::<Result<Vec<_>>>()?;
    let mut bubble_coeffs = Vec::with_capacity(m);
    for i in 0..m {
        let d = field.div(i).expect("every triangle carries patch functions");
        let sol = bubble_least_squares(&bubbles[i], &(&g[i] - &d))?;
        bubble_coeffs.push(sol.coeffs);
    }
    let velocity = PatchVelocity::from_coeffs(&basis, &bubbles, coeffs, bubble_coeffs)?;
    let div = velocity.divergence(patch);
    let diff: Vec<PolyOnTriangle> = g.iter().zip(&div).map(|(a, b)| a - b).collect();
    let residual = if gn > 0.0 { l2_norm_pw(&diff)? / gn } else { 0.0 };
    if residual > 1e-9 {
        return Err(Error::Residual { residual, tolerance: 1e-9 });
    }
    let stability_ratio = if gn > 0.0 { velocity.seminorm / gn } else { 0.0 };
    Ok(PatchInverse { velocity, residual, stability_ratio })
}

/// Matrix of `Λ` applied to the divergences of the bubble space (4 × dim),
/// which vanishes identically.
pub fn bubble_lambda_matrix(b: &BubbleBasis) -> Result<DenseMatrix> {
    let mut out = DenseMatrix::zeros(4, b.dim());
    for (j, f) in b.functions.iter().enumerate() {
        out.set_column(j, &lambda_apply(&f.div())?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::regular_patch;

    fn mean_free(patch: &VertexPatch, p: usize, seed: u64) -> Vec<PolyOnTriangle> {
        let n = crate::poly::monomial_count(p - 1);
        let mut g: Vec<PolyOnTriangle> = (0..patch.m())
            .map(|i| {
                let c = (0..n).map(|k| ((seed as f64 + 1.0) * (i * n + k) as f64 * 0.7).sin()).collect();
                PolyOnTriangle::from_coeffs(patch.triangle(i), p - 1, c)
            })
            .collect();
        let mean: f64 = g.iter().map(|q| q.integrate().unwrap()).sum::<f64>() / patch.area();
        for q in &mut g {
            *q = &*q - &PolyOnTriangle::constant(*q.triangle(), mean);
        }
        g
    }

    #[test]
    fn equilateral_hexagon_quadratic_data() {
        let patch = regular_patch(6).unwrap();
        let inv = patch_right_inverse(&patch, 3, &mean_free(&patch, 3, 1)).unwrap();
        assert!(inv.residual <= 1e-9);
        assert!(inv.stability_ratio > 0.0);
    }

    #[test]
    fn constant_data_has_nonzero_mean() {
        let patch = regular_patch(6).unwrap();
        let g: Vec<PolyOnTriangle> = (0..6).map(|i| PolyOnTriangle::constant(patch.triangle(i), 1.0)).collect();
        assert!(matches!(patch_right_inverse(&patch, 3, &g), Err(Error::NonzeroMean(_))));
    }

    #[test]
    fn bubbles_are_annihilated_by_lambda() {
        let b = BubbleBasis::new(regular_patch(5).unwrap().triangle(0), 5).unwrap();
        assert!(bubble_lambda_matrix(&b).unwrap().max_abs() < 1e-12);
    }
}
