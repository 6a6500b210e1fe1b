use serde::Serialize;

use super::basis::PatchBasis;
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::mesh::{PatchGeometry, VertexPatch};
use crate::poly::PolyOnTriangle;

/// `(g(v0), g(v1), g(v2), ∫_T g)` in the triangle's own vertex order.
pub fn lambda_apply(g: &PolyOnTriangle) -> Result<[f64; 4]> {
    Ok([g.eval_vertex(0), g.eval_vertex(1), g.eval_vertex(2), g.integrate()?])
}

/// `M[k][4i + c] = Λ_c(div b(k)|_{T(i)})`.
pub fn assemble_m_numeric(patch: &VertexPatch, p: usize) -> Result<DenseMatrix> {
    let basis = PatchBasis::new(patch, p)?;
    m_from_basis(&basis, patch.m())
}

pub fn m_from_basis(basis: &PatchBasis, m: usize) -> Result<DenseMatrix> {
    let mut out = DenseMatrix::zeros(basis.len(), 4 * m);
    for (k, f) in basis.functions.iter().enumerate() {
        for i in 0..m {
            if let Some(d) = f.div(i) {
                let l = lambda_apply(&d)?;
                out.row_mut(k)[4 * i..4 * i + 4].copy_from_slice(&l);
            }
        }
    }
    Ok(out)
}

/// The scaled 5×8 block `D_L(j) (M_j⁻, M_j⁺) D_R(j)` in cotangent form.
pub fn scaled_block(g: &PatchGeometry, j: usize) -> [[f64; 8]; 5] {
    let q = g.prev(j);
    let cot = |x: f64| x.cos() / x.sin();
    let (gm, gp) = (g.gamma_minus[j], g.gamma_plus[j]);
    [
        [cot(g.omega[q]), 0.0, 0.0, gm, -cot(g.omega[j]), 0.0, 0.0, -gp],
        [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, cot(g.beta[q]), gm, 0.0, -cot(g.alpha[j]), 0.0, -gp],
        [0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0],
        [gm, gm, gm, gm, -gp, -gp, -gp, -gp],
    ]
}

/// Positions of exact zeros in the scaled block.
pub const SCALED_BLOCK_ZEROS: [(usize, usize); 18] = [
    (0, 1), (0, 2), (0, 5), (0, 6),
    (1, 1), (1, 2), (1, 3), (1, 5), (1, 6), (1, 7),
    (2, 0), (2, 1), (2, 4), (2, 6),
    (3, 0), (3, 1), (3, 3), (3, 4),
];

pub fn left_scaling(g: &PatchGeometry) -> Vec<f64> {
    g.edge_length.iter().flat_map(|&e| [e, -e, e, e, e / 12.0]).collect()
}

pub fn right_scaling(g: &PatchGeometry) -> Vec<f64> {
    g.area.iter().flat_map(|&a| [1.0, 1.0, 1.0, 6.0 / a]).collect()
}

/// `M` rebuilt from the cotangent blocks by undoing both scalings.
pub fn assemble_m_closed_form(g: &PatchGeometry) -> DenseMatrix {
    let m = g.m;
    let (dl, dr) = (left_scaling(g), right_scaling(g));
    let mut out = DenseMatrix::zeros(5 * m, 4 * m);
    for j in 0..m {
        let block = scaled_block(g, j);
        let cols = [4 * g.prev(j), 4 * j];
        for (r, row) in block.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                let col = cols[c / 4] + c % 4;
                out[(5 * j + r, col)] = v / (dl[5 * j + r] * dr[col]);
            }
        }
    }
    out
}

/// `v_0, …, v_{m+1}` and `s` in `R^{4m}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KernelVectors {
    pub v: Vec<Vec<f64>>,
    pub s: Vec<f64>,
}

pub fn kernel_vectors(g: &PatchGeometry) -> KernelVectors {
    let m = g.m;
    let n = 4 * m;
    let mut v = vec![vec![0.0; n]; m + 2];
    for j in 0..m {
        v[0][4 * j + 3] = g.area[j];
    }
    // v_1 wraps around to the last triangle
    v[1][1] = -1.0;
    v[1][3] = 1.0;
    v[1][n - 2] = 1.0;
    v[1][n - 1] = -1.0;
    for k in 2..=m {
        let b = 4 * (k - 2);
        v[k][b + 2] = 1.0;
        v[k][b + 3] = -1.0;
        v[k][b + 5] = -1.0;
        v[k][b + 7] = 1.0;
    }
    for j in 0..m {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        v[m + 1][4 * j] = sign;
        v[m + 1][4 * j + 3] = -sign;
    }
    let s = (0..n).map(|i| if i % 4 == 3 { 1.0 } else { 0.0 }).collect();
    KernelVectors { v, s }
}

/// Row indices of `B` inside `A`: positions 2, 4, 5 of every 5-row block.
pub fn b_rows(m: usize) -> Vec<usize> {
    (0..m).flat_map(|j| [5 * j + 1, 5 * j + 3, 5 * j + 4]).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PatchMatrices {
    pub m_mat: DenseMatrix,
    pub a: DenseMatrix,
    pub b: DenseMatrix,
    pub d_left: Vec<f64>,
    pub d_right: Vec<f64>,
    pub kernel: KernelVectors,
}

pub fn derived_matrices(m_mat: &DenseMatrix, g: &PatchGeometry) -> Result<PatchMatrices> {
    let m = g.m;
    if m_mat.shape() != (5 * m, 4 * m) {
        return Err(Error::Shape(format!("M is {:?}, expected ({}, {})", m_mat.shape(), 5 * m, 4 * m)));
    }
    let (d_left, d_right) = (left_scaling(g), right_scaling(g));
    let a = m_mat.diag_scale(&d_left, &d_right);
    let b = a.select_rows(&b_rows(m));
    Ok(PatchMatrices { m_mat: m_mat.clone(), a, b, d_left, d_right, kernel: kernel_vectors(g) })
}
