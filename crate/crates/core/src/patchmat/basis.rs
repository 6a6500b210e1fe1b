use crate::error::{Error, Result};
use crate::geom::{add, scale, sub, Point};
use crate::mesh::VertexPatch;
use crate::poly::{gauss_points, legendre_derivative_at_one, PolyOnTriangle, VectorPoly};

/// Piecewise vector polynomial on a vertex patch; `pieces[i]` lives on
/// triangle `i` and `None` means zero there.
#[derive(Clone, Debug, PartialEq)]
pub struct PatchField {
    pub pieces: Vec<Option<VectorPoly>>,
}

impl PatchField {
    pub fn zero(m: usize) -> Self {
        Self { pieces: vec![None; m] }
    }

    pub fn eval(&self, i: usize, x: Point) -> Point {
        self.pieces[i].as_ref().map_or([0.0, 0.0], |v| v.eval(x))
    }

    pub fn div(&self, i: usize) -> Option<PolyOnTriangle> {
        self.pieces[i].as_ref().map(VectorPoly::div)
    }

    pub fn add_scaled(&mut self, c: f64, other: &Self) {
        for (mine, theirs) in self.pieces.iter_mut().zip(&other.pieces) {
            if let Some(t) = theirs {
                let s = t.scale(c);
                *mine = Some(match mine.take() {
                    Some(v) => v.add(&s),
                    None => s,
                });
            }
        }
    }

    pub fn h1_seminorm_sq(&self) -> Result<f64> {
        self.pieces.iter().flatten().map(VectorPoly::h1_seminorm_sq).sum()
    }

    /// Largest Gauss-point jump across interior edges and trace on the
    /// outer boundary of the patch, for `p` points per edge.
    pub fn cr_defect(&self, patch: &VertexPatch, p: usize) -> f64 {
        let m = patch.m();
        let g = gauss_points(p);
        let mut worst = 0.0f64;
        for &t in &g {
            let s = 0.5 * (t + 1.0);
            for i in 0..m {
                let on_spoke = add(patch.z, scale(sub(patch.p(i), patch.z), s));
                let a = self.eval(patch.prev(i), on_spoke);
                let b = self.eval(i, on_spoke);
                worst = worst.max((a[0] - b[0]).abs()).max((a[1] - b[1]).abs());
                let outer = add(patch.p(i), scale(sub(patch.p(i + 1), patch.p(i)), s));
                let c = self.eval(i, outer);
                worst = worst.max(c[0].abs()).max(c[1].abs());
            }
        }
        worst
    }
}

/// The five fields attached to edge `j`, in the order
/// `φ_jφ_z² n, φ_jφ_z² t, φ_j²φ_z n, φ_j²φ_z t, ψ_j n`.
#[derive(Clone, Debug)]
pub struct PatchBasis {
    pub p: usize,
    pub functions: Vec<PatchField>,
}

fn require_odd(p: usize) -> Result<()> {
    if p < 3 || p.is_multiple_of(2) {
        return Err(Error::UnsupportedDegree { p, reason: "the edge bubble is defined for odd p >= 3" });
    }
    Ok(())
}

/// Edge bubble of edge `j` restricted to one of its triangles; `phi_k` is
/// the hat function of the far vertex and `phi_j` that of `P(j)`.
pub fn edge_bubble(p: usize, phi_z: &PolyOnTriangle, phi_j: &PolyOnTriangle, phi_k: &PolyOnTriangle) -> PolyOnTriangle {
    let dle = legendre_derivative_at_one(p);
    let one = PolyOnTriangle::constant(*phi_z.triangle(), 1.0);
    let le = (&one - &phi_k.scale(2.0)).legendre_of(p);
    let corr = (&(phi_z * phi_z) * &(phi_j * phi_j)).scale(5.0 * dle - 30.0);
    (&le + &corr).scale(6.0 / dle)
}

impl PatchBasis {
    pub fn new(patch: &VertexPatch, p: usize) -> Result<Self> {
        let normals: Vec<Point> = (0..patch.m()).map(|j| patch.normal(j)).collect();
        Self::with_normals(patch, p, &normals)
    }

    /// Same construction with caller-supplied unit normals (used to test
    /// invariance under sign flips).
    pub fn with_normals(patch: &VertexPatch, p: usize, normals: &[Point]) -> Result<Self> {
        require_odd(p)?;
        let m = patch.m();
        let mut functions = Vec::with_capacity(5 * m);
        for j in 0..m {
            let (n, t) = (normals[j], patch.tangent(j));
            let mut f: Vec<PatchField> = (0..5).map(|_| PatchField::zero(m)).collect();
            // (triangle, local index of P(j), local index of the far vertex)
            for (tri, lj, lk) in [(patch.prev(j), 2, 1), (j, 1, 2)] {
                let geo = patch.triangle(tri);
                let phi_z = PolyOnTriangle::barycentric(geo, 0);
                let phi_j = PolyOnTriangle::barycentric(geo, lj);
                let phi_k = PolyOnTriangle::barycentric(geo, lk);
                let a = &phi_j * &(&phi_z * &phi_z);
                let b = &(&phi_j * &phi_j) * &phi_z;
                let psi = edge_bubble(p, &phi_z, &phi_j, &phi_k);
                f[0].pieces[tri] = Some(VectorPoly::along(&a, n));
                f[1].pieces[tri] = Some(VectorPoly::along(&a, t));
                f[2].pieces[tri] = Some(VectorPoly::along(&b, n));
                f[3].pieces[tri] = Some(VectorPoly::along(&b, t));
                f[4].pieces[tri] = Some(VectorPoly::along(&psi, n));
            }
            functions.extend(f);
        }
        Ok(Self { p, functions })
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    /// `Σ c_k b(k)`.
    pub fn combine(&self, coeffs: &[f64]) -> PatchField {
        let m = self.functions.first().map_or(0, |f| f.pieces.len());
        let mut out = PatchField::zero(m);
        for (c, f) in coeffs.iter().zip(&self.functions) {
            if *c != 0.0 {
                out.add_scaled(*c, f);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::dot;
    use crate::mesh::{random_patch, regular_patch};

    #[test]
    fn even_degree_is_rejected() {
        let patch = regular_patch(5).unwrap();
        assert!(matches!(PatchBasis::new(&patch, 4), Err(Error::UnsupportedDegree { p: 4, .. })));
        assert!(PatchBasis::new(&patch, 1).is_err());
    }

    #[test]
    fn every_basis_function_is_cr_conforming() {
        for p in [3, 5, 7] {
            let patch = random_patch(5, 0.35, 11).unwrap();
            let basis = PatchBasis::new(&patch, p).unwrap();
            for f in &basis.functions {
                assert!(f.cr_defect(&patch, p) <= 1e-12, "p = {p}");
            }
        }
    }

    #[test]
    fn general_formula_reduces_to_cubic_legendre() {
        let patch = random_patch(4, 0.4, 5).unwrap();
        let geo = patch.triangle(0);
        let [z, j, k] = [0, 1, 2].map(|i| PolyOnTriangle::barycentric(geo, i));
        let psi = edge_bubble(3, &z, &j, &k);
        let one = PolyOnTriangle::constant(geo, 1.0);
        let le3 = (&one - &k.scale(2.0)).legendre_of(3);
        assert!(psi.coeffs().iter().zip(le3.coeffs()).all(|(a, b)| (a - b).abs() < 1e-14));
    }

    #[test]
    fn divergence_at_z_is_directional_derivative_of_hat() {
        let patch = random_patch(6, 0.3, 9).unwrap();
        let basis = PatchBasis::new(&patch, 3).unwrap();
        for j in 0..6 {
            let d = basis.functions[5 * j].div(j).unwrap();
            let grad = PolyOnTriangle::barycentric(patch.triangle(j), 1).eval_grad(patch.z).1;
            assert!((d.eval_vertex(0) - dot(patch.normal(j), grad)).abs() < 1e-12);
        }
    }
}
