use super::space::VelocitySpace;
use crate::error::{Error, Result};
use crate::linalg::{dot, norm2, DenseMatrix};
use crate::mesh::Triangulation;
use crate::poly::{monomial_count, monomial_exponents, triangle_quadrature};

/// Gram, coupling and pressure mass matrices on a velocity space.
///
/// Pressures are per-triangle barycentric monomials of degree `p − 1`;
/// pressure dof `t · dim P_{p−1} + i` is monomial `i` on triangle `t`.
#[derive(Clone, Debug)]
pub struct OperatorSet {
    pub p: usize,
    /// Piecewise `H¹` Gram matrix, `dim × dim`.
    pub k: DenseMatrix,
    /// `∫ q div_pw v`, `n_pressure × dim`.
    pub bdiv: DenseMatrix,
    /// Block-diagonal pressure mass matrix.
    pub mp: DenseMatrix,
    /// `∫ q_i`, i.e. `Mp` applied to the constant pressure.
    pub mean: Vec<f64>,
    /// Coefficients of the constant pressure 1.
    pub constant: Vec<f64>,
}

impl OperatorSet {
    pub fn n_pressure(&self) -> usize {
        self.mp.rows()
    }

    /// `‖Bdivᵗ 1‖ / (‖Bdiv‖ ‖1‖)`: the discrete `∫ div_pw v = 0`.
    pub fn constant_pressure_defect(&self) -> f64 {
        let r = self.bdiv.tr_matvec(&self.constant);
        let scale = self.bdiv.frobenius_norm() * norm2(&self.constant);
        if scale > 0.0 {
            norm2(&r) / scale
        } else {
            0.0
        }
    }
}

/// Local matrices on one triangle at the raw level.
struct LocalOps {
    /// `∫ ∇m_a · ∇m_b`, n × n.
    stiffness: DenseMatrix,
    /// `∫ q_a m_b`-style divergence blocks: `[∫ q ∂x m, ∫ q ∂y m]`, np × 2n.
    div: DenseMatrix,
    mass: DenseMatrix,
}

struct ReferenceTables {
    weights: Vec<f64>,
    /// per quadrature point: values of pressure monomials
    q: Vec<Vec<f64>>,
    /// per quadrature point: ∂/∂λ0 and ∂/∂λ1 of velocity monomials
    d0: Vec<Vec<f64>>,
    d1: Vec<Vec<f64>>,
}

fn reference_tables(p: usize) -> Result<ReferenceTables> {
    let rule = triangle_quadrature(2 * p + 2)?;
    let ev = monomial_exponents(p);
    let ep = monomial_exponents(p - 1);
    let pw = |x: f64, k: usize| if k == 0 { 1.0 } else { x.powi(k as i32) };
    let mut t = ReferenceTables { weights: rule.weights.clone(), q: vec![], d0: vec![], d1: vec![] };
    for pt in &rule.points {
        let (l0, l1) = (pt[0], pt[1]);
        t.q.push(ep.iter().map(|&(a, b)| pw(l0, a) * pw(l1, b)).collect());
        t.d0.push(ev.iter().map(|&(a, b)| if a == 0 { 0.0 } else { a as f64 * pw(l0, a - 1) * pw(l1, b) }).collect());
        t.d1.push(ev.iter().map(|&(a, b)| if b == 0 { 0.0 } else { b as f64 * pw(l0, a) * pw(l1, b - 1) }).collect());
    }
    Ok(t)
}

fn local_ops(tri: &Triangulation, t: usize, p: usize, tab: &ReferenceTables) -> LocalOps {
    let n = monomial_count(p);
    let np = monomial_count(p - 1);
    let geo = tri.triangle(t);
    let area = geo.area();
    let g = geo.bary_gradients();
    let mut stiffness = DenseMatrix::zeros(n, n);
    let mut div = DenseMatrix::zeros(np, 2 * n);
    let mut mass = DenseMatrix::zeros(np, np);
    let mut gx = vec![0.0; n];
    let mut gy = vec![0.0; n];
    for (qi, &w) in tab.weights.iter().enumerate() {
        let wa = w * area;
        for j in 0..n {
            gx[j] = tab.d0[qi][j] * g[0][0] + tab.d1[qi][j] * g[1][0];
            gy[j] = tab.d0[qi][j] * g[0][1] + tab.d1[qi][j] * g[1][1];
        }
        for a in 0..n {
            for b in 0..n {
                stiffness[(a, b)] += wa * (gx[a] * gx[b] + gy[a] * gy[b]);
            }
        }
        let q = &tab.q[qi];
        for a in 0..np {
            let wq = wa * q[a];
            for b in 0..n {
                div[(a, b)] += wq * gx[b];
                div[(a, n + b)] += wq * gy[b];
            }
            for b in 0..np {
                mass[(a, b)] += wq * q[b];
            }
        }
    }
    stiffness.symmetrize();
    mass.symmetrize();
    LocalOps { stiffness, div, mass }
}

pub fn assemble_operators(tri: &Triangulation, space: &VelocitySpace) -> Result<OperatorSet> {
    let p = space.p;
    if space.n_triangles() != tri.n_triangles() {
        return Err(Error::Shape(format!(
            "space has {} triangles, mesh has {}",
            space.n_triangles(),
            tri.n_triangles()
        )));
    }
    let n = monomial_count(p);
    let np = monomial_count(p - 1);
    let nt = tri.n_triangles();
    let tab = reference_tables(p)?;
    let mut k = DenseMatrix::zeros(space.dim, space.dim);
    let mut bdiv = DenseMatrix::zeros(nt * np, space.dim);
    let mut mp = DenseMatrix::zeros(nt * np, nt * np);
    for (t, block) in space.blocks.iter().enumerate() {
        let ops = local_ops(tri, t, p, &tab);
        let c = &block.coeffs;
        let d = block.dofs.len();
        // K_T acts componentwise
        let cx = c.select_rows(&(0..n).collect::<Vec<_>>());
        let cy = c.select_rows(&(n..2 * n).collect::<Vec<_>>());
        let kt = cx.tr_matmul(&ops.stiffness.matmul(&cx)).add(&cy.tr_matmul(&ops.stiffness.matmul(&cy)));
        for i in 0..d {
            for j in 0..d {
                k[(block.dofs[i], block.dofs[j])] += kt[(i, j)];
            }
        }
        let bt = ops.div.matmul(c);
        for a in 0..np {
            for j in 0..d {
                bdiv[(t * np + a, block.dofs[j])] += bt[(a, j)];
            }
            for b in 0..np {
                mp[(t * np + a, t * np + b)] = ops.mass[(a, b)];
            }
        }
    }
    k.symmetrize();
    let constant: Vec<f64> = (0..nt * np).map(|i| if i % np == 0 { 1.0 } else { 0.0 }).collect();
    let mean = mp.matvec(&constant);
    Ok(OperatorSet { p, k, bdiv, mp, mean, constant })
}

/// `uᵗ K u` for a coefficient vector, i.e. the squared piecewise seminorm.
pub fn energy(ops: &OperatorSet, u: &[f64]) -> f64 {
    dot(u, &ops.k.matvec(u))
}
