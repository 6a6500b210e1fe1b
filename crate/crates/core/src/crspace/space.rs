use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{nullspace, svd, DenseMatrix, RANK_RTOL};
use crate::mesh::Triangulation;
use crate::poly::{gauss_points, legendre, monomial_count, monomial_exponents, VectorPoly};

/// Raw-space dimension above which the dense nullspace route is refused.
pub const DENSE_ROUTE_LIMIT: usize = 6000;

/// Where a basis function comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DofKind {
    Conforming,
    EdgeBubble,
    ElementBubble,
    /// Dual to one Legendre moment of one component on an interior edge.
    EdgeMoment,
    GenericNullspace,
}

/// How an interior-edge continuity condition is imposed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstraintKind {
    /// Jump orthogonal to Legendre polynomials of degree < p.
    Moments,
    /// Jump zero at the p Gauss points.
    GaussPoints,
}

/// Coefficients of the basis restricted to one triangle: column `k` holds
/// the raw coefficients (x part, then y part, over barycentric monomials of
/// degree p) of global basis function `dofs[k]`.
#[derive(Clone, Debug)]
pub struct TriangleBlock {
    pub dofs: Vec<usize>,
    pub coeffs: DenseMatrix,
}

#[derive(Clone, Debug)]
pub struct VelocitySpace {
    pub p: usize,
    pub dim: usize,
    pub blocks: Vec<TriangleBlock>,
    pub provenance: Vec<DofKind>,
}

impl VelocitySpace {
    /// Raw coefficients per triangle: `2 · dim P_p`.
    pub fn local_dim(&self) -> usize {
        2 * monomial_count(self.p)
    }

    pub fn n_triangles(&self) -> usize {
        self.blocks.len()
    }

    pub fn raw_dim(&self) -> usize {
        self.n_triangles() * self.local_dim()
    }

    /// Raw coefficient vector of `Σ c_k b_k` on triangle `t`.
    pub fn local_coeffs(&self, t: usize, c: &[f64]) -> Vec<f64> {
        let b = &self.blocks[t];
        let x: Vec<f64> = b.dofs.iter().map(|&d| c[d]).collect();
        b.coeffs.matvec(&x)
    }

    pub fn field(&self, tri: &Triangulation, t: usize, c: &[f64]) -> VectorPoly {
        VectorPoly::from_raw(tri.triangle(t), self.p, &self.local_coeffs(t, c))
    }

    /// The full raw × dim basis matrix (small meshes only).
    pub fn dense_basis(&self) -> DenseMatrix {
        let ld = self.local_dim();
        let mut out = DenseMatrix::zeros(self.raw_dim(), self.dim);
        for (t, b) in self.blocks.iter().enumerate() {
            for (k, &d) in b.dofs.iter().enumerate() {
                for r in 0..ld {
                    out[(t * ld + r, d)] += b.coeffs[(r, k)];
                }
            }
        }
        out
    }

    pub fn count(&self, kind: DofKind) -> usize {
        self.provenance.iter().filter(|&&k| k == kind).count()
    }

    /// Wraps a dense raw × dim basis into per-triangle blocks.
    pub fn from_dense(p: usize, n_triangles: usize, basis: &DenseMatrix, kind: DofKind) -> Self {
        let ld = 2 * monomial_count(p);
        let dim = basis.cols();
        let blocks = (0..n_triangles)
            .map(|t| {
                let rows: Vec<usize> = (t * ld..(t + 1) * ld).collect();
                let local = basis.select_rows(&rows);
                let dofs: Vec<usize> =
                    (0..dim).filter(|&k| (0..ld).any(|r| local[(r, k)].abs() > 1e-15)).collect();
                TriangleBlock { coeffs: local.select_columns(&dofs), dofs }
            })
            .collect();
        Self { p, dim, blocks, provenance: vec![kind; dim] }
    }
}

/// Edge `(a, b)` with `a < b` seen from triangle `t`: the local indices of
/// `a` and `b`.
fn local_endpoints(tri: &Triangulation, t: usize, a: usize, b: usize) -> (usize, usize) {
    let v = tri.triangles()[t];
    let pos = |x: usize| v.iter().position(|&y| y == x).expect("edge vertex in triangle");
    (pos(a), pos(b))
}

/// Values of all degree-`p` monomials at the edge point with parameter `s`
/// (0 at local vertex `la`, 1 at `lb`).
fn monomials_on_edge(p: usize, la: usize, lb: usize, s: f64) -> Vec<f64> {
    let mut l = [0.0; 3];
    l[la] = 1.0 - s;
    l[lb] = s;
    monomial_exponents(p).iter().map(|&(a, b)| l[0].powi(a as i32) * l[1].powi(b as i32)).collect()
}

/// Rows of trace functionals for one edge seen from one triangle:
/// moments `∫_0^1 u(s) Le_k(2s − 1) ds` or values at Gauss points.
pub fn edge_functionals(p: usize, la: usize, lb: usize, kind: ConstraintKind) -> DenseMatrix {
    let n = monomial_count(p);
    let mut out = DenseMatrix::zeros(p, n);
    match kind {
        ConstraintKind::Moments => {
            let (x, w) = crate::poly::gauss_legendre(p + 1);
            for (xi, wi) in x.iter().zip(&w) {
                let s = 0.5 * (xi + 1.0);
                let vals = monomials_on_edge(p, la, lb, s);
                for k in 0..p {
                    let f = 0.5 * wi * legendre(k, *xi).0;
                    for (c, v) in vals.iter().enumerate() {
                        out[(k, c)] += f * v;
                    }
                }
            }
        }
        ConstraintKind::GaussPoints => {
            for (k, g) in gauss_points(p).into_iter().enumerate() {
                out.row_mut(k).copy_from_slice(&monomials_on_edge(p, la, lb, 0.5 * (g + 1.0)));
            }
        }
    }
    out
}

/// Jump and boundary-trace constraints on the raw piecewise space, `2p`
/// rows per edge (component-major), edges in mesh order.
pub fn constraint_matrix(tri: &Triangulation, p: usize, kind: ConstraintKind) -> DenseMatrix {
    let n = monomial_count(p);
    let ld = 2 * n;
    let mut out = DenseMatrix::zeros(2 * p * tri.edges().len(), ld * tri.n_triangles());
    for (e, edge) in tri.edges().iter().enumerate() {
        let [a, b] = edge.vertices;
        for (side, &t) in edge.triangles.iter().enumerate() {
            let sign = if side == 0 { 1.0 } else { -1.0 };
            let (la, lb) = local_endpoints(tri, t, a, b);
            let f = edge_functionals(p, la, lb, kind);
            for c in 0..2 {
                for k in 0..p {
                    let row = 2 * p * e + c * p + k;
                    for j in 0..n {
                        out[(row, t * ld + c * n + j)] = sign * f[(k, j)];
                    }
                }
            }
        }
    }
    out
}

/// CR space as the SVD nullspace of the constraint matrix; columns are
/// orthonormal in the raw coefficients.
pub fn cr_space_nullspace(tri: &Triangulation, p: usize, kind: ConstraintKind) -> Result<VelocitySpace> {
    let raw = 2 * monomial_count(p) * tri.n_triangles();
    if raw > DENSE_ROUTE_LIMIT {
        return Err(Error::TooLarge { dofs: raw, limit: DENSE_ROUTE_LIMIT });
    }
    let basis = nullspace(&constraint_matrix(tri, p, kind), RANK_RTOL)?;
    Ok(VelocitySpace::from_dense(p, tri.n_triangles(), &basis, DofKind::GenericNullspace))
}

/// Local data for the edge-moment construction on one triangle.
struct LocalMoments {
    /// Right inverse of the 3p × n moment matrix.
    right_inverse: DenseMatrix,
    /// Basis of its kernel, n × (n − 3p).
    kernel: DenseMatrix,
}

fn local_moments(tri: &Triangulation, t: usize, p: usize) -> Result<Option<LocalMoments>> {
    let n = monomial_count(p);
    let v = tri.triangles()[t];
    let mut c = DenseMatrix::zeros(3 * p, n);
    for e in 0..3 {
        // edge opposite local vertex e, oriented from lower to higher global index
        let (i, j) = ((e + 1) % 3, (e + 2) % 3);
        let (la, lb) = if v[i] < v[j] { (i, j) } else { (j, i) };
        let f = edge_functionals(p, la, lb, ConstraintKind::Moments);
        for k in 0..p {
            c.row_mut(e * p + k).copy_from_slice(f.row(k));
        }
    }
    let ct = c.transpose();
    let d = svd(&ct)?;
    if d.rank(RANK_RTOL) < 3 * p {
        return Ok(None);
    }
    // cᵗ = U Σ Vᵗ, so c⁺ = U Σ⁻¹ Vᵗ
    let mut right_inverse = DenseMatrix::zeros(n, 3 * p);
    for r in 0..n {
        for q in 0..3 * p {
            right_inverse[(r, q)] = (0..3 * p).map(|k| d.u[(r, k)] * d.v[(q, k)] / d.s[k]).sum();
        }
    }
    let kernel = nullspace(&c, RANK_RTOL)?;
    Ok(Some(LocalMoments { right_inverse, kernel }))
}

/// CR space through local edge-moment bases: one global function per
/// interior edge, moment and component, plus the local kernel of each
/// triangle. Returns `None` when the three edges' moments are dependent
/// (even p).
pub fn cr_space_local(tri: &Triangulation, p: usize) -> Result<Option<VelocitySpace>> {
    let n = monomial_count(p);
    let locals = (0..tri.n_triangles()).map(|t| local_moments(tri, t, p)).collect::<Result<Option<Vec<_>>>>()?;
    let Some(locals) = locals else { return Ok(None) };
    let mut edge_dof = vec![usize::MAX; tri.edges().len()];
    let mut provenance = Vec::new();
    for (e, _) in tri.interior_edges() {
        edge_dof[e] = provenance.len();
        provenance.extend(std::iter::repeat_n(DofKind::EdgeMoment, 2 * p));
    }
    let mut blocks = Vec::with_capacity(tri.n_triangles());
    for (t, lm) in locals.iter().enumerate() {
        let kdim = lm.kernel.cols();
        let mut dofs = Vec::new();
        let mut cols: Vec<Vec<f64>> = Vec::new();
        for (le, &e) in tri.triangle_edges(t).iter().enumerate() {
            if edge_dof[e] == usize::MAX {
                continue;
            }
            for c in 0..2 {
                for k in 0..p {
                    dofs.push(edge_dof[e] + c * p + k);
                    let mut col = vec![0.0; 2 * n];
                    for r in 0..n {
                        col[c * n + r] = lm.right_inverse[(r, le * p + k)];
                    }
                    cols.push(col);
                }
            }
        }
        for c in 0..2 {
            for k in 0..kdim {
                dofs.push(provenance.len());
                provenance.push(DofKind::ElementBubble);
                let mut col = vec![0.0; 2 * n];
                for r in 0..n {
                    col[c * n + r] = lm.kernel[(r, k)];
                }
                cols.push(col);
            }
        }
        let coeffs = if cols.is_empty() { DenseMatrix::zeros(2 * n, 0) } else { DenseMatrix::from_columns(&cols)? };
        blocks.push(TriangleBlock { dofs, coeffs });
    }
    Ok(Some(VelocitySpace { p, dim: provenance.len(), blocks, provenance }))
}

/// `CR⁰_p` on `tri`: local edge-moment construction when available,
/// otherwise the dense nullspace of the moment constraints.
pub fn cr_space(tri: &Triangulation, p: usize) -> Result<VelocitySpace> {
    if p == 0 {
        return Err(Error::UnsupportedDegree { p, reason: "CR spaces start at p = 1" });
    }
    match cr_space_local(tri, p)? {
        Some(s) => Ok(s),
        None => cr_space_nullspace(tri, p, ConstraintKind::Moments),
    }
}

/// Largest Gauss-point jump (and boundary value) of a member, relative to
/// its largest raw coefficient.
pub fn gauss_point_defect(tri: &Triangulation, space: &VelocitySpace, c: &[f64]) -> f64 {
    let p = space.p;
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    let local: Vec<Vec<f64>> = (0..tri.n_triangles()).map(|t| space.local_coeffs(t, c)).collect();
    for l in &local {
        scale = l.iter().fold(scale, |a, v| a.max(v.abs()));
    }
    let g = constraint_matrix_rows_gauss(tri, p, &local);
    for v in g {
        worst = worst.max(v.abs());
    }
    if scale > 0.0 {
        worst / scale
    } else {
        0.0
    }
}

fn constraint_matrix_rows_gauss(tri: &Triangulation, p: usize, local: &[Vec<f64>]) -> Vec<f64> {
    let n = monomial_count(p);
    let mut out = Vec::new();
    for edge in tri.edges() {
        let [a, b] = edge.vertices;
        let mut acc = vec![0.0; 2 * p];
        for (side, &t) in edge.triangles.iter().enumerate() {
            let sign = if side == 0 { 1.0 } else { -1.0 };
            let (la, lb) = local_endpoints(tri, t, a, b);
            let f = edge_functionals(p, la, lb, ConstraintKind::GaussPoints);
            for c in 0..2 {
                let u = &local[t][c * n..(c + 1) * n];
                for k in 0..p {
                    acc[c * p + k] += sign * crate::linalg::dot(f.row(k), u);
                }
            }
        }
        out.extend(acc);
    }
    out
}
