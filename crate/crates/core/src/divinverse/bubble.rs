use crate::error::{Error, Result};
use crate::geom::Triangle;
use crate::linalg::{lstsq_with_rtol, norm2, Cholesky, DenseMatrix};
use crate::poly::{mass_matrix, monomial_count, monomial_exponents, PolyOnTriangle, VectorPoly};

/// SVD cut-off for the per-triangle bubble solves.
pub const BUBBLE_RTOL: f64 = 1e-12;

/// `φ0 φ1 φ2 · λ0^a λ1^b · e` for `a + b ≤ p − 3` and `e ∈ {e_x, e_y}`.
#[derive(Clone, Debug)]
pub struct BubbleBasis {
    pub tri: Triangle,
    pub p: usize,
    pub functions: Vec<VectorPoly>,
}

impl BubbleBasis {
    pub fn new(tri: Triangle, p: usize) -> Result<Self> {
        if p < 3 {
            return Err(Error::UnsupportedDegree { p, reason: "vector bubbles need p >= 3" });
        }
        let cubic = &(&PolyOnTriangle::barycentric(tri, 0) * &PolyOnTriangle::barycentric(tri, 1))
            * &PolyOnTriangle::barycentric(tri, 2);
        let mut functions = Vec::with_capacity((p - 2) * (p - 1));
        for (a, b) in monomial_exponents(p - 3) {
            let q = &cubic * &PolyOnTriangle::monomial(tri, a, b);
            functions.push(VectorPoly::along(&q, [1.0, 0.0]));
            functions.push(VectorPoly::along(&q, [0.0, 1.0]));
        }
        Ok(Self { tri, p, functions })
    }

    pub fn dim(&self) -> usize {
        self.functions.len()
    }

    /// Largest absolute value at `2p` equispaced points per edge.
    pub fn max_boundary_value(&self) -> f64 {
        let n = 2 * self.p;
        let mut worst = 0.0f64;
        for f in &self.functions {
            for (from, to) in [(0, 1), (1, 2), (2, 0)] {
                for i in 0..=n {
                    let s = i as f64 / n as f64;
                    worst = worst.max(f.x.trace(from, to, s).abs()).max(f.y.trace(from, to, s).abs());
                }
            }
        }
        worst
    }

    /// Divergences as columns over the monomials of degree `p − 1`.
    pub fn div_matrix(&self) -> DenseMatrix {
        let n = monomial_count(self.p - 1);
        let mut d = DenseMatrix::zeros(n, self.dim());
        for (j, f) in self.functions.iter().enumerate() {
            d.set_column(j, &f.div().coeffs_at_degree(self.p - 1));
        }
        d
    }

    pub fn combine(&self, coeffs: &[f64]) -> VectorPoly {
        let mut out = VectorPoly::zero(self.tri, self.p);
        for (c, f) in coeffs.iter().zip(&self.functions) {
            out = out.add(&f.scale(*c));
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct BubbleSolve {
    pub coeffs: Vec<f64>,
    pub field: VectorPoly,
    /// `‖g − div b‖ / ‖g‖` in `L²(T)`.
    pub residual: f64,
}

fn degree_checked(g: &PolyOnTriangle, p: usize) -> Result<Vec<f64>> {
    if g.effective_degree() + 1 > p {
        return Err(Error::Shape(format!("right-hand side of degree {} exceeds p - 1 = {}", g.effective_degree(), p - 1)));
    }
    Ok(g.coeffs_at_degree(p - 1))
}

/// `L²`-weighted least squares `min ‖g − div b‖` over the bubble space,
/// without any precondition on `g`.
pub fn bubble_least_squares(basis: &BubbleBasis, g: &PolyOnTriangle) -> Result<BubbleSolve> {
    let p = basis.p;
    let gc = degree_checked(g, p)?;
    let lt = Cholesky::new(&mass_matrix(&basis.tri, p - 1))?.factor().transpose();
    let a = lt.matmul(&basis.div_matrix());
    let rhs = lt.matvec(&gc);
    let (coeffs, res) = lstsq_with_rtol(&a, &rhs, BUBBLE_RTOL)?;
    let gn = norm2(&rhs);
    let residual = if gn > 0.0 { res / gn } else { 0.0 };
    Ok(BubbleSolve { field: basis.combine(&coeffs), coeffs, residual })
}

/// Size of `Λ_T(g)` with the integral divided by `|T|`, and the RMS value of
/// `g`, so that both are invariant under scaling of the triangle.
pub fn lambda_defect(g: &PolyOnTriangle) -> Result<(f64, f64)> {
    let area = g.triangle().area();
    let l = [g.eval_vertex(0), g.eval_vertex(1), g.eval_vertex(2), g.integrate()? / area];
    let rms = g.l2_norm()? / area.sqrt();
    Ok((norm2(&l), rms))
}

/// Preimage of `g` under `div` in the bubble space; `Λ_T(g)` must vanish.
pub fn bubble_right_inverse(tri: Triangle, p: usize, g: &PolyOnTriangle) -> Result<BubbleSolve> {
    let basis = BubbleBasis::new(tri, p)?;
    let (lambda_norm, rms) = lambda_defect(g)?;
    let bound = 1e-10 * rms;
    if lambda_norm > bound {
        return Err(Error::LambdaNotZero { lambda_norm, bound });
    }
    let sol = bubble_least_squares(&basis, g)?;
    if sol.residual > 1e-10 {
        return Err(Error::Residual { residual: sol.residual, tolerance: 1e-10 });
    }
    Ok(sol)
}

/// Orthogonal projection of `g` onto `ker Λ_T` in the coefficient metric.
pub fn project_out_lambda(g: &PolyOnTriangle) -> Result<PolyOnTriangle> {
    let d = g.degree();
    let tri = *g.triangle();
    let n = monomial_count(d);
    let mut lam = DenseMatrix::zeros(4, n);
    for (j, (a, b)) in monomial_exponents(d).into_iter().enumerate() {
        let m = PolyOnTriangle::monomial(tri, a, b);
        let l = [m.eval_vertex(0), m.eval_vertex(1), m.eval_vertex(2), m.integrate()? / tri.area()];
        for (i, v) in l.into_iter().enumerate() {
            lam[(i, j)] = v;
        }
    }
    let rhs = lam.matvec(g.coeffs());
    let (x, _) = lstsq_with_rtol(&lam, &rhs, 1e-13)?;
    let c: Vec<f64> = g.coeffs().iter().zip(&x).map(|(a, b)| a - b).collect();
    Ok(PolyOnTriangle::from_coeffs(tri, d, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri() -> Triangle {
        Triangle::new([0.0, 0.0], [1.2, 0.1], [0.3, 0.9])
    }

    #[test]
    fn dimensions_and_boundary_values() {
        for (p, dim) in [(3, 2), (4, 6), (5, 12)] {
            let b = BubbleBasis::new(tri(), p).unwrap();
            assert_eq!(b.dim(), dim);
            assert!(b.max_boundary_value() <= 1e-13);
        }
        assert!(BubbleBasis::new(tri(), 2).is_err());
    }

    #[test]
    fn cubic_bubble_divergence_is_recovered() {
        let b = BubbleBasis::new(tri(), 3).unwrap();
        let g = b.functions[0].div();
        let sol = bubble_right_inverse(tri(), 3, &g).unwrap();
        assert!(sol.residual <= 1e-12);
    }

    #[test]
    fn constant_right_hand_side_is_rejected() {
        let g = PolyOnTriangle::constant(tri(), 1.0);
        assert!(matches!(bubble_right_inverse(tri(), 3, &g), Err(Error::LambdaNotZero { .. })));
    }

    #[test]
    fn projected_quartic_is_in_range_for_p5() {
        let c: Vec<f64> = (0..15).map(|i| ((i * 7 + 3) % 11) as f64 / 11.0 - 0.4).collect();
        let g = project_out_lambda(&PolyOnTriangle::from_coeffs(tri(), 4, c)).unwrap();
        let sol = bubble_right_inverse(tri(), 5, &g).unwrap();
        assert!(sol.residual <= 1e-10);
    }
}
