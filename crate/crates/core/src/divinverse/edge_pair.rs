use serde::Serialize;

use super::bubble::{bubble_least_squares, BubbleBasis};
use crate::error::{Error, Result};
use crate::geom::{dot, norm, rot_cw, scale, sub, Point, Triangle};
use crate::linalg::{lstsq_with_rtol, svd, DenseMatrix};
use crate::patchmat::{edge_bubble, lambda_apply};
use crate::poly::{edge_moments, PolyOnTriangle, VectorPoly};

/// Two triangles sharing the edge `E = [z, P2]`: `plus = (z, P1, P2)` and
/// `minus = (z, P2, P3)`, both counterclockwise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgePair {
    pub plus: Triangle,
    pub minus: Triangle,
}

impl EdgePair {
    pub fn new(t_plus: Triangle, t_minus: Triangle) -> Result<Self> {
        let scale = t_plus.diameter().max(t_minus.diameter());
        let same = |a: Point, b: Point| norm(sub(a, b)) <= 1e-12 * scale;
        let shared: Vec<(usize, usize)> = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .filter(|&(i, j)| same(t_plus.vertices[i], t_minus.vertices[j]))
            .collect();
        if shared.len() != 2 {
            return Err(Error::NotAdjacent);
        }
        let opp_plus = 3 - shared[0].0 - shared[1].0;
        let opp_minus = 3 - shared[0].1 - shared[1].1;
        let (a, b) = (t_plus.vertices[shared[0].0], t_plus.vertices[shared[1].0]);
        let p1 = t_plus.vertices[opp_plus];
        let p3 = t_minus.vertices[opp_minus];
        let (z, p2) = if Triangle::new(a, p1, b).signed_area() > 0.0 { (a, b) } else { (b, a) };
        let plus = Triangle::new(z, p1, p2);
        let minus = Triangle::new(z, p2, p3);
        if minus.signed_area() <= 0.0 {
            return Err(Error::NotAdjacent);
        }
        Ok(Self { plus, minus })
    }

    pub fn z(&self) -> Point {
        self.plus.vertices[0]
    }

    pub fn p2(&self) -> Point {
        self.plus.vertices[2]
    }

    pub fn edge_length(&self) -> f64 {
        norm(sub(self.p2(), self.z()))
    }

    /// Unit normal of `E`, exterior to `plus`.
    pub fn normal(&self) -> Point {
        rot_cw(scale(sub(self.z(), self.p2()), 1.0 / self.edge_length()))
    }
}

/// A vector field on the two triangles of an [`EdgePair`].
#[derive(Clone, Debug)]
pub struct PairField {
    pub plus: VectorPoly,
    pub minus: VectorPoly,
}

impl PairField {
    fn add_scaled(&self, c: f64, other: &Self) -> Self {
        Self { plus: self.plus.add(&other.plus.scale(c)), minus: self.minus.add(&other.minus.scale(c)) }
    }

    pub fn h1_seminorm_sq(&self) -> Result<f64> {
        Ok(self.plus.h1_seminorm_sq()? + self.minus.h1_seminorm_sq()?)
    }

    /// Largest Legendre moment of degree `< p` of the jump across `E` and of
    /// the trace on the four outer edges.
    pub fn max_jump_moment(&self, pair: &EdgePair, p: usize) -> f64 {
        let npts = p + self.plus.x.degree().max(self.minus.x.degree()) + 2;
        let along = |a: Point, b: Point, f: &dyn Fn(Point) -> Point| -> f64 {
            let d = sub(b, a);
            (0..2)
                .flat_map(|c| edge_moments(p, npts, |s| f([a[0] + s * d[0], a[1] + s * d[1]])[c]))
                .fold(0.0f64, |acc, v| acc.max(v.abs()))
        };
        let [z, p1, p2] = pair.plus.vertices;
        let p3 = pair.minus.vertices[2];
        let jump = |x: Point| {
            let (u, v) = (self.plus.eval(x), self.minus.eval(x));
            [u[0] - v[0], u[1] - v[1]]
        };
        let plus = |x: Point| self.plus.eval(x);
        let minus = |x: Point| self.minus.eval(x);
        along(z, p2, &jump)
            .max(along(z, p1, &plus))
            .max(along(p1, p2, &plus))
            .max(along(p2, p3, &minus))
            .max(along(p3, z, &minus))
    }
}

/// The four special fields `12 φ2 φz² ∇φ2|₊`, `12 φ2² φz ∇φz|₊`, `ψ n`,
/// `30 φ2² φz² n` on both triangles.
pub fn edge_pair_functions(pair: &EdgePair, p: usize) -> Vec<PairField> {
    let n = pair.normal();
    let grad_plus = pair.plus.bary_gradients();
    let (g2, gz) = (grad_plus[2], grad_plus[0]);
    // (triangle, local index of P2, local index of the far vertex)
    let pieces = [(pair.plus, 2, 1), (pair.minus, 1, 2)].map(|(t, l2, lk)| {
        let phi_z = PolyOnTriangle::barycentric(t, 0);
        let phi_2 = PolyOnTriangle::barycentric(t, l2);
        let phi_k = PolyOnTriangle::barycentric(t, lk);
        let a = &phi_2 * &(&phi_z * &phi_z);
        let b = &(&phi_2 * &phi_2) * &phi_z;
        let c = &(&phi_2 * &phi_2) * &(&phi_z * &phi_z);
        [
            VectorPoly::along(&a.scale(12.0), g2),
            VectorPoly::along(&b.scale(12.0), gz),
            VectorPoly::along(&edge_bubble(p, &phi_z, &phi_2, &phi_k), n),
            VectorPoly::along(&c.scale(30.0), n),
        ]
    });
    let [plus, minus] = pieces;
    plus.into_iter().zip(minus).map(|(plus, minus)| PairField { plus, minus }).collect()
}

/// `Λ_{T+}` of the four special divergences, one row per function.
pub fn edge_pair_matrix(pair: &EdgePair, p: usize) -> Result<DenseMatrix> {
    let rows = edge_pair_functions(pair, p)
        .iter()
        .map(|f| lambda_apply(&f.plus.div()).map(|l| l.to_vec()))
        .collect::<Result<Vec<_>>>()?;
    DenseMatrix::from_rows(&rows)
}

/// The same matrix from its closed form.
pub fn edge_pair_matrix_closed_form(pair: &EdgePair, p: usize) -> DenseMatrix {
    let g = pair.plus.bary_gradients();
    let (n, e) = (pair.normal(), pair.edge_length());
    let delta = -12.0 * dot(n, g[1]);
    let sign = if p % 2 == 1 { 1.0 } else { -1.0 };
    DenseMatrix::from_rows(&[
        vec![12.0 * dot(g[2], g[2]), 0.0, 0.0, e * dot(n, g[2])],
        vec![0.0, 0.0, 12.0 * dot(g[0], g[0]), e * dot(n, g[0])],
        vec![delta, sign * delta, delta, e],
        vec![0.0, 0.0, 0.0, e],
    ])
    .expect("finite entries")
}

#[derive(Clone, Debug)]
pub struct EdgePairInverse {
    pub field: PairField,
    pub condition_number: f64,
    /// `‖g − div v‖ / ‖g‖` on the plus triangle.
    pub residual: f64,
    pub jump_moment: f64,
    /// `‖v‖_pw / ‖g‖_{L²(T+)}`.
    pub norm_ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgePairSummary {
    pub condition_number: f64,
    pub residual: f64,
    pub jump_moment: f64,
    pub norm_ratio: f64,
}

impl EdgePairInverse {
    pub fn summary(&self) -> EdgePairSummary {
        EdgePairSummary {
            condition_number: self.condition_number,
            residual: self.residual,
            jump_moment: self.jump_moment,
            norm_ratio: self.norm_ratio,
        }
    }
}

pub fn condition_number(a: &DenseMatrix) -> Result<f64> {
    let s = svd(a)?;
    let min = s.s.last().copied().unwrap_or(0.0);
    Ok(if min > 0.0 { s.sigma_max() / min } else { f64::INFINITY })
}

/// Right inverse of the divergence on `t_plus` with values in the CR space
/// of the pair; `g` is given on `t_plus` in any vertex order.
pub fn edge_pair_right_inverse(t_plus: Triangle, t_minus: Triangle, p: usize, g: &PolyOnTriangle) -> Result<EdgePairInverse> {
    if p < 4 {
        return Err(Error::UnsupportedDegree {
            p,
            reason: "the four-function edge construction needs p >= 4 (30 φ2² φz² n has degree 4)",
        });
    }
    let pair = EdgePair::new(t_plus, t_minus)?;
    // re-express g on the relabelled plus triangle
    let g = relabel(g, &pair.plus);
    let funcs = edge_pair_functions(&pair, p);
    let v = edge_pair_matrix(&pair, p)?;
    let cond = condition_number(&v)?;
    let (c, _) = lstsq_with_rtol(&v.transpose(), &lambda_apply(&g)?, 1e-14)?;
    let mut field = PairField { plus: VectorPoly::zero(pair.plus, p), minus: VectorPoly::zero(pair.minus, p) };
    for (ci, f) in c.iter().zip(&funcs) {
        field = field.add_scaled(*ci, f);
    }
    let remainder = &g - &field.plus.div();
    let bubbles = BubbleBasis::new(pair.plus, p)?;
    let b = bubble_least_squares(&bubbles, &remainder)?;
    field.plus = field.plus.add(&b.field);
    let gn = g.l2_norm()?;
    let residual = (&g - &field.plus.div()).l2_norm()? / gn;
    let jump_moment = field.max_jump_moment(&pair, p);
    let norm_ratio = field.h1_seminorm_sq()?.sqrt() / gn;
    Ok(EdgePairInverse { field, condition_number: cond, residual, jump_moment, norm_ratio })
}

/// The polynomial `g` rewritten over the barycentric coordinates of `target`,
/// which must have the same vertex set.
pub fn relabel(g: &PolyOnTriangle, target: &Triangle) -> PolyOnTriangle {
    let src = g.triangle();
    if src == target {
        return g.clone();
    }
    // λ_src,i as an affine polynomial on target
    let bary: Vec<PolyOnTriangle> = (0..3)
        .map(|i| {
            let vals: Vec<f64> = (0..3).map(|v| src.barycentric(target.vertices[v])[i]).collect();
            let mut c = vec![0.0; 3];
            // a λ0 + b λ1 + c (1 − λ0 − λ1)
            c[0] = vals[2];
            c[1] = vals[0] - vals[2];
            c[2] = vals[1] - vals[2];
            PolyOnTriangle::from_coeffs(*target, 1, c)
        })
        .collect();
    let mut out = PolyOnTriangle::zero(*target, g.degree());
    for ((a, b), &c) in crate::poly::monomial_exponents(g.degree()).into_iter().zip(g.coeffs()) {
        if c != 0.0 {
            let term = &bary[0].pow(a as u32) * &bary[1].pow(b as u32);
            out = &out + &term.scale(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair() -> (Triangle, Triangle) {
        let (a, b) = ([0.0, 0.0], [1.0, 0.2]);
        (Triangle::new(a, b, [0.4, 0.9]), Triangle::new(b, a, [0.6, -0.8]))
    }

    #[test]
    fn matrix_matches_closed_form() {
        let (tp, tm) = pair();
        let ep = EdgePair::new(tp, tm).unwrap();
        for p in [4, 5, 6] {
            let num = edge_pair_matrix(&ep, p).unwrap();
            let closed = edge_pair_matrix_closed_form(&ep, p);
            assert!(num.sub(&closed).max_abs() <= 1e-11 * closed.max_abs(), "p = {p}");
        }
    }

    #[test]
    fn cubic_degree_is_rejected() {
        let (tp, tm) = pair();
        let g = PolyOnTriangle::constant(tp, 1.0);
        assert!(matches!(edge_pair_right_inverse(tp, tm, 3, &g), Err(Error::UnsupportedDegree { p: 3, .. })));
    }

    #[test]
    fn quartic_inverse() {
        let (tp, tm) = pair();
        let c: Vec<f64> = (0..10).map(|i| (i as f64 * 0.37).sin()).collect();
        let g = PolyOnTriangle::from_coeffs(tp, 3, c);
        let inv = edge_pair_right_inverse(tp, tm, 4, &g).unwrap();
        assert!(inv.residual <= 1e-10, "{}", inv.residual);
        assert!(inv.jump_moment <= 1e-11, "{}", inv.jump_moment);
        assert!(inv.condition_number < 1e8);
    }

    #[test]
    fn relabel_preserves_values() {
        let t = Triangle::new([0.0, 0.0], [1.0, 0.0], [0.2, 1.0]);
        let u = Triangle::new(t.vertices[2], t.vertices[0], t.vertices[1]);
        let g = &PolyOnTriangle::barycentric(t, 0).pow(2) + &PolyOnTriangle::barycentric(t, 2);
        let h = relabel(&g, &u);
        for x in [[0.3, 0.2], [0.5, 0.1]] {
            assert!((g.eval(x) - h.eval(x)).abs() < 1e-14);
        }
    }

    #[test]
    fn non_adjacent_triangles_are_rejected() {
        let t1 = Triangle::new([0.0, 0.0], [1.0, 0.0], [0.0, 1.0]);
        let t2 = Triangle::new([5.0, 0.0], [6.0, 0.0], [5.0, 1.0]);
        assert!(matches!(EdgePair::new(t1, t2), Err(Error::NotAdjacent)));
    }
}
