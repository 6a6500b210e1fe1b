//! Discrete inf-sup constants and refinement sweeps.
//!
//! `β² = min { qᵗ S q / qᵗ Mp q : ∫ q = 0 }` with the Schur complement
//! `S = Bdiv K⁻¹ Bdivᵗ`, which is the squared inf-sup quotient.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::crspace::{assemble_operators, cr_space, OperatorSet, VelocitySpace};
use crate::divinverse::minimal_cr_space;
use crate::error::{Error, Result};
use crate::linalg::{min_nonzero_generalized_eig_pair, norm2, Cholesky, DenseMatrix};
use crate::mesh::{check_admissible, refine_uniform, Triangulation};

/// Velocity dofs above which a sweep level is refused.
pub const MAX_VELOCITY_DOFS: usize = 50_000;

/// Minimum angle (radians, 20°) and connectivity bound used to flag
/// results on meshes outside the admissible class.
pub const ADMISSIBLE_EPSILON: f64 = std::f64::consts::PI / 9.0;
pub const ADMISSIBLE_M: usize = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceKind {
    Full,
    Minimal,
}

impl SpaceKind {
    pub fn build(self, tri: &Triangulation, p: usize) -> Result<VelocitySpace> {
        match self {
            SpaceKind::Full => cr_space(tri, p),
            SpaceKind::Minimal => minimal_cr_space(tri, p),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfSupResult {
    /// Refinement level, 1 for the seed mesh.
    pub level: usize,
    pub p: usize,
    pub space: SpaceKind,
    pub n_triangles: usize,
    pub h_max: f64,
    pub min_angle: f64,
    pub dof_v: usize,
    pub dof_p: usize,
    pub beta: f64,
    /// Relative residual of the generalized eigenpair.
    pub residual: f64,
    pub connectivity_m: Option<usize>,
    pub admissible: bool,
}

/// `S = Bdiv K⁻¹ Bdivᵗ` through the Cholesky factor of `K`.
pub fn schur_complement(ops: &OperatorSet) -> Result<DenseMatrix> {
    let chol = Cholesky::new(&ops.k)?;
    let mut y = ops.bdiv.clone();
    chol.solve_lower_rows(&mut y);
    let mut s = y.matmul(&y.transpose());
    s.symmetrize();
    Ok(s)
}

/// `‖S 1‖ / ‖S‖`: the constant pressure must be in the kernel.
pub fn constant_mode_residual(ops: &OperatorSet, s: &DenseMatrix) -> f64 {
    let r = norm2(&s.matvec(&ops.constant));
    let scale = s.frobenius_norm() * norm2(&ops.constant);
    if scale > 0.0 {
        r / scale
    } else {
        0.0
    }
}

pub fn beta_from_operators(ops: &OperatorSet) -> Result<(f64, f64)> {
    let s = schur_complement(ops)?;
    let eig = min_nonzero_generalized_eig_pair(&s, &ops.mp, std::slice::from_ref(&ops.constant))?;
    if !eig.value.is_finite() {
        return Err(Error::EigenNoConvergence);
    }
    // round-off can push a zero eigenvalue slightly negative
    Ok((eig.value.max(0.0).sqrt(), eig.residual))
}

pub fn inf_sup_constant(tri: &Triangulation, p: usize, space: SpaceKind) -> Result<InfSupResult> {
    let v = space.build(tri, p)?;
    if v.dim > MAX_VELOCITY_DOFS {
        return Err(Error::TooLarge { dofs: v.dim, limit: MAX_VELOCITY_DOFS });
    }
    let ops = assemble_operators(tri, &v)?;
    let (beta, residual) = beta_from_operators(&ops)?;
    let adm = check_admissible(tri, ADMISSIBLE_EPSILON, ADMISSIBLE_M);
    Ok(InfSupResult {
        level: 1,
        p,
        space,
        n_triangles: tri.n_triangles(),
        h_max: tri.h_max(),
        min_angle: tri.min_angle(),
        dof_v: v.dim,
        dof_p: ops.n_pressure(),
        beta,
        residual,
        connectivity_m: adm.connectivity_m,
        admissible: adm.admissible,
    })
}

/// Dofs a level would carry, without building the space.
fn predicted_dofs(tri: &Triangulation, p: usize, space: SpaceKind) -> usize {
    let ie = tri.n_interior_edges();
    match space {
        // two components, p moments per interior edge, plus element interiors
        SpaceKind::Full => 2 * p * ie + tri.n_triangles() * ((p + 1) * (p + 2) - 6 * p),
        SpaceKind::Minimal => {
            let scalar = tri.interior_vertices().len() + (p - 1) * ie + tri.n_triangles() * (p - 1) * (p - 2) / 2;
            2 * scalar + ie
        }
    }
}

/// `β` on the seed mesh and `levels − 1` uniform refinements of it.
pub fn refinement_sweep(tri0: &Triangulation, p: usize, levels: usize, space: SpaceKind) -> Result<Vec<InfSupResult>> {
    let mut meshes = vec![tri0.clone()];
    for _ in 1..levels {
        let next = refine_uniform(meshes.last().expect("nonempty"));
        let dofs = predicted_dofs(&next, p, space);
        if dofs > MAX_VELOCITY_DOFS {
            return Err(Error::TooLarge { dofs, limit: MAX_VELOCITY_DOFS });
        }
        meshes.push(next);
    }
    meshes
        .iter()
        .enumerate()
        .map(|(i, m)| inf_sup_constant(m, p, space).map(|r| InfSupResult { level: i + 1, ..r }))
        .collect()
}

pub fn sweep_csv(rows: &[InfSupResult]) -> String {
    let mut out = String::from("level,nT,hmax,min_angle,dof_v,dof_p,beta,residual,space\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{:.6e},{:.6e},{},{},{:.12e},{:.3e},{}",
            r.level,
            r.n_triangles,
            r.h_max,
            r.min_angle,
            r.dof_v,
            r.dof_p,
            r.beta,
            r.residual,
            match r.space {
                SpaceKind::Full => "full",
                SpaceKind::Minimal => "minimal",
            }
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::seeds;

    #[test]
    fn predicted_dofs_match_built_spaces() {
        let t = refine_uniform(&seeds::criss_cross_square());
        for p in [1, 3] {
            assert_eq!(predicted_dofs(&t, p, SpaceKind::Full), cr_space(&t, p).unwrap().dim);
        }
        assert_eq!(predicted_dofs(&t, 3, SpaceKind::Minimal), minimal_cr_space(&t, 3).unwrap().dim);
    }

    #[test]
    fn constant_pressure_is_in_the_schur_kernel() {
        let t = seeds::criss_cross_square();
        let ops = assemble_operators(&t, &cr_space(&t, 3).unwrap()).unwrap();
        let s = schur_complement(&ops).unwrap();
        assert!(constant_mode_residual(&ops, &s) <= 1e-10);
    }

    #[test]
    fn lowest_order_crisscross_is_stable_and_flagged() {
        let r = inf_sup_constant(&seeds::criss_cross_square(), 1, SpaceKind::Full).unwrap();
        assert!(r.beta > 0.1 && r.beta <= 1.0 + 1e-12, "beta {}", r.beta);
        assert!(r.residual <= 1e-8);
        assert_eq!((r.dof_v, r.dof_p), (8, 4));
    }

    #[test]
    fn sweep_guard_refuses_large_levels() {
        let e = refinement_sweep(&seeds::criss_cross_square(), 3, 7, SpaceKind::Full).unwrap_err();
        assert!(matches!(e, Error::TooLarge { .. }));
    }

    #[test]
    fn csv_has_one_line_per_level() {
        let rows = refinement_sweep(&seeds::criss_cross_square(), 1, 2, SpaceKind::Full).unwrap();
        let csv = sweep_csv(&rows);
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.starts_with("level,nT,hmax"));
    }
}
