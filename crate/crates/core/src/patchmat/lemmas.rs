use serde::{Deserialize, Serialize};

use super::matrices::{assemble_m_numeric, derived_matrices, PatchMatrices};
use crate::error::Result;
use crate::linalg::{max_principal_angle, norm2, nullspace, orthonormal_span, rank, DenseMatrix};
use crate::mesh::{PatchGeometry, VertexPatch};
use crate::report::CheckRecord;

/// Largest tolerated principal angle between a computed and a predicted kernel.
pub const KERNEL_ANGLE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelAngles {
    /// ker A against span{v_0}.
    pub ker_a_v0: f64,
    /// ker M against span{s}.
    pub ker_m_s: f64,
    /// ker B against span{v_0, …, v_{m+σ}}.
    pub ker_b_v: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub m: usize,
    pub p: usize,
    pub sigma: usize,
    #[serde(rename = "dim_ker_B")]
    pub dim_ker_b: usize,
    #[serde(rename = "dim_ker_A")]
    pub dim_ker_a: usize,
    #[serde(rename = "dim_ker_M")]
    pub dim_ker_m: usize,
    #[serde(rename = "rank_M")]
    pub rank_m: usize,
    pub angles: KernelAngles,
    /// max over k ≤ m+σ of `‖B v_k‖ / (‖B‖ ‖v_k‖)`.
    pub ker_b_residual: f64,
    /// `‖B v_{m+1} − (1 − (−1)^m) e_1‖_∞`.
    pub b_v_last_error: f64,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
}

fn column(v: &[f64]) -> DenseMatrix {
    DenseMatrix::from_columns(&[v.to_vec()]).expect("finite vector")
}

pub fn verify_patch_lemmas(patch: &VertexPatch, p: usize, rtol: f64) -> Result<LemmaReport> {
    let g = PatchGeometry::new(patch)?;
    let mats = derived_matrices(&assemble_m_numeric(patch, p)?, &g)?;
    lemma_report(&mats, &g, p, rtol)
}

pub fn lemma_report(mats: &PatchMatrices, g: &PatchGeometry, p: usize, rtol: f64) -> Result<LemmaReport> {
    let m = g.m;
    let sigma = g.sigma;
    let kv = &mats.kernel;
    let ker_m = nullspace(&mats.m_mat, rtol)?;
    let ker_a = nullspace(&mats.a, rtol)?;
    let ker_b = nullspace(&mats.b, rtol)?;
    let rank_m = rank(&mats.m_mat, rtol)?;

    let v0 = orthonormal_span(&column(&kv.v[0]), rtol)?;
    let s = orthonormal_span(&column(&kv.s), rtol)?;
    let predicted_b = orthonormal_span(&DenseMatrix::from_columns(&kv.v[..=m + sigma])?, rtol)?;
    let angles = KernelAngles {
        ker_a_v0: max_principal_angle(&ker_a, &v0)?,
        ker_m_s: max_principal_angle(&ker_m, &s)?,
        ker_b_v: max_principal_angle(&ker_b, &predicted_b)?,
    };

    let b_norm = mats.b.frobenius_norm();
    let ker_b_residual = kv.v[..=m + sigma]
        .iter()
        .map(|v| norm2(&mats.b.matvec(v)) / (b_norm * norm2(v)))
        .fold(0.0, f64::max);
    let bv = mats.b.matvec(&kv.v[m + 1]);
    let first = if m.is_multiple_of(2) { 0.0 } else { 2.0 };
    let b_v_last_error =
        bv.iter().enumerate().map(|(i, x)| (x - if i == 0 { first } else { 0.0 }).abs()).fold(0.0, f64::max);

    let checks = vec![
        CheckRecord::exact("dim_ker_B", m + 1 + sigma, ker_b.cols()),
        CheckRecord::exact("dim_ker_A", 1, ker_a.cols()),
        CheckRecord::exact("dim_ker_M", 1, ker_m.cols()),
        CheckRecord::exact("rank_M", 4 * m - 1, rank_m),
        CheckRecord::at_most("angle(ker A, v0)", angles.ker_a_v0, KERNEL_ANGLE_TOL),
        CheckRecord::at_most("angle(ker M, s)", angles.ker_m_s, KERNEL_ANGLE_TOL),
        CheckRecord::at_most("angle(ker B, v_0..v_m+sigma)", angles.ker_b_v, KERNEL_ANGLE_TOL),
        CheckRecord::at_most("|B v_k| / |B| |v_k|", ker_b_residual, 1e-10),
        CheckRecord::at_most("B v_m+1 - (1-(-1)^m) e1", b_v_last_error, 1e-12),
    ];
    let pass = checks.iter().all(|c| c.pass);
    Ok(LemmaReport {
        m,
        p,
        sigma,
        dim_ker_b: ker_b.cols(),
        dim_ker_a: ker_a.cols(),
        dim_ker_m: ker_m.cols(),
        rank_m,
        angles,
        ker_b_residual,
        b_v_last_error,
        checks,
        pass,
    })
}
