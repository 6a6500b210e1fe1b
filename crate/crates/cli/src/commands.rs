use std::fmt;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crstokes::divinverse::{
    bubble_least_squares, bubble_right_inverse, edge_pair_right_inverse, patch_right_inverse, project_out_lambda,
    BubbleBasis,
};
use crstokes::geom::{rotate, scale, Triangle};
use crstokes::infsup::{refinement_sweep, sweep_csv, InfSupResult, SpaceKind};
use crstokes::linalg::{nullspace, DenseMatrix};
use crstokes::mesh::{
    check_admissible, extract_patch, random_patch, refine_uniform, regular_patch, seeds, PatchGeometry, Triangulation,
    VertexPatch,
};
use crstokes::patchmat::{assemble_m_numeric, derived_matrices, lemma_report, verify_patch_lemmas};
use crstokes::poly::{monomial_count, PolyOnTriangle};
use crstokes::report::CheckRecord;

use crate::report::Report;
use crate::{Geometry, Mode};

/// Usage problems exit with 2, failed computations with 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(s) | CliError::Compute(s) => f.write_str(s),
        }
    }
}

impl From<crstokes::Error> for CliError {
    fn from(e: crstokes::Error) -> Self {
        match e {
            crstokes::Error::UnsupportedDegree { .. }
            | crstokes::Error::InfeasiblePatch { .. }
            | crstokes::Error::TooLarge { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Compute(e.to_string()),
        }
    }
}

type Out = Result<Report, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn require_odd(p: usize) -> Result<(), CliError> {
    if p < 3 || p.is_multiple_of(2) {
        return Err(usage(format!("--p {p}: the patch basis needs an odd degree >= 3")));
    }
    Ok(())
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

/// Patch shape for seed `s`: m in 3..=12.
fn patch_for_seed(s: u64, min_angle_deg: f64) -> Result<VertexPatch, CliError> {
    let m = 3 + (s as usize * 7) % 10;
    Ok(random_patch(m, min_angle_deg.to_radians(), s)?)
}

fn random_poly(tri: Triangle, degree: usize, rng: &mut ChaCha8Rng) -> PolyOnTriangle {
    let c = (0..monomial_count(degree)).map(|_| rng.gen_range(-1.0..1.0)).collect();
    PolyOnTriangle::from_coeffs(tri, degree, c)
}

pub fn lemmas(patches: usize, seed: u64, p: usize, min_angle: f64, rtol: f64) -> Out {
    require_odd(p)?;
    let mut checks = Vec::new();
    let mut records = Vec::with_capacity(patches);
    for i in 0..patches {
        let s = seed + i as u64;
        let patch = patch_for_seed(s, min_angle)?;
        let r = verify_patch_lemmas(&patch, p, rtol)?;
        for c in &r.checks {
            checks.push(CheckRecord { name: format!("patch {i} (seed {s}, m = {}): {}", r.m, c.name), ..c.clone() });
        }
        let mut v = to_value(&r);
        v["seed"] = json!(s);
        v.as_object_mut().expect("object").remove("checks");
        records.push(v);
    }
    Ok(Report::new(vec![], Some(seed), checks, records))
}

fn columns(a: &DenseMatrix) -> Vec<Vec<f64>> {
    (0..a.cols()).map(|j| a.column(j)).collect()
}

pub fn patch(m: Option<usize>, geometry: Geometry, p: usize, seed: u64) -> Out {
    require_odd(p)?;
    let patch = match geometry {
        Geometry::Equilateral => regular_patch(m.unwrap_or(6))?,
        Geometry::Random => random_patch(m.unwrap_or(6), 20f64.to_radians(), seed)?,
        Geometry::Crisscross => {
            if m.is_some_and(|m| m != 4) {
                return Err(usage("--geometry crisscross fixes m = 4"));
            }
            extract_patch(&seeds::criss_cross_square(), 4)?
        }
    };
    let g = PatchGeometry::new(&patch)?;
    let mats = derived_matrices(&assemble_m_numeric(&patch, p)?, &g)?;
    let r = lemma_report(&mats, &g, p, 1e-10)?;
    let record = json!({
        "geometry": format!("{geometry:?}").to_lowercase(),
        "m": r.m,
        "p": p,
        "sigma": r.sigma,
        "rank_M": r.rank_m,
        "dim_ker_M": r.dim_ker_m,
        "dim_ker_A": r.dim_ker_a,
        "dim_ker_B": r.dim_ker_b,
        "angles": to_value(&r.angles),
        "M": mats.m_mat.to_rows(),
        "A": mats.a.to_rows(),
        "B": mats.b.to_rows(),
        "ker_M": columns(&nullspace(&mats.m_mat, 1e-10)?),
        "ker_A": columns(&nullspace(&mats.a, 1e-10)?),
        "ker_B": columns(&nullspace(&mats.b, 1e-10)?),
        "kernel_vectors": to_value(&mats.kernel),
    });
    let seed = (geometry == Geometry::Random).then_some(seed);
    Ok(Report::new(vec![], seed, r.checks, vec![record]))
}

pub fn rightinv(p: usize, mode: Mode, trials: usize, seed: u64) -> Out {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    let mut records = Vec::with_capacity(trials);
    match mode {
        Mode::Bubble => {
            if p < 3 {
                return Err(usage(format!("--p {p}: bubbles need p >= 3")));
            }
            for t in 0..trials {
                let tri = patch_for_seed(seed + t as u64, 20.0)?.triangle(0);
                let g = project_out_lambda(&random_poly(tri, p - 1, &mut rng))?;
                let inside = bubble_right_inverse(tri, p, &g)?.residual;
                let h = random_poly(tri, p - 1, &mut rng);
                let outside = bubble_least_squares(&BubbleBasis::new(tri, p)?, &h)?.residual;
                checks.push(CheckRecord::at_most(format!("trial {t}: residual in ker Lambda"), inside, 1e-10));
                checks.push(CheckRecord::at_least(format!("trial {t}: residual off ker Lambda"), outside, 1e-3));
                records.push(json!({ "trial": t, "in_range_residual": inside, "out_of_range_residual": outside }));
            }
        }
        Mode::Edge => {
            if p < 4 {
                return Err(usage(format!("--p {p}: the edge construction needs p >= 4")));
            }
            for t in 0..trials {
                let patch = patch_for_seed(seed + t as u64, 20.0)?;
                let (tp, tm) = (patch.triangle(1), patch.triangle(0));
                let inv = edge_pair_right_inverse(tp, tm, p, &random_poly(tp, p - 1, &mut rng))?;
                checks.push(CheckRecord::at_most(format!("trial {t}: condition number"), inv.condition_number, 1e8));
                checks.push(CheckRecord::at_most(format!("trial {t}: residual"), inv.residual, 1e-10));
                checks.push(CheckRecord::at_most(format!("trial {t}: jump moment"), inv.jump_moment, 1e-11));
                let mut v = to_value(&inv.summary());
                v["trial"] = json!(t);
                records.push(v);
            }
        }
        Mode::Patch => {
            require_odd(p)?;
            for t in 0..trials {
                let patch = patch_for_seed(seed + t as u64, 20.0)?;
                let mut g: Vec<PolyOnTriangle> =
                    (0..patch.m()).map(|i| random_poly(patch.triangle(i), p - 1, &mut rng)).collect();
                let mean = g.iter().map(|q| q.integrate()).sum::<crstokes::Result<f64>>()? / patch.area();
                for q in &mut g {
                    *q = &*q - &PolyOnTriangle::constant(*q.triangle(), mean);
                }
                let inv = patch_right_inverse(&patch, p, &g)?;
                let angle = rng.gen_range(0.0..std::f64::consts::TAU);
                let c = rng.gen_range(0.1..10.0);
                let moved = patch.mapped(|x| scale(rotate(x, angle), c))?;
                let moved_g: Vec<PolyOnTriangle> = g
                    .iter()
                    .enumerate()
                    .map(|(i, q)| PolyOnTriangle::from_coeffs(moved.triangle(i), q.degree(), q.coeffs().to_vec()))
                    .collect();
                let other = patch_right_inverse(&moved, p, &moved_g)?;
                let drift = (other.stability_ratio - inv.stability_ratio).abs() / inv.stability_ratio;
                checks.push(CheckRecord::at_most(format!("trial {t}: residual"), inv.residual, 1e-9));
                checks.push(CheckRecord::at_most(format!("trial {t}: ratio drift under similarity"), drift, 1e-9));
                records.push(json!({
                    "trial": t,
                    "m": patch.m(),
                    "residual": inv.residual,
                    "stability_ratio": inv.stability_ratio,
                    "ratio_drift": drift,
                }));
            }
        }
    }
    Ok(Report::new(vec![], Some(seed), checks, records))
}

pub fn load_mesh(path: Option<&Path>, name: Option<&str>) -> Result<Triangulation, CliError> {
    match (path, name) {
        (Some(path), _) => Triangulation::read_json(path)
            .map_err(|e| usage(format!("cannot read mesh file '{}': {e}", path.display()))),
        (None, Some(name)) => seeds::by_name(name).ok_or_else(|| usage(format!("unknown seed mesh '{name}'"))),
        (None, None) => Err(usage("one of --mesh or --seed-mesh is required")),
    }
}

/// Mesh-independence bands relative to the last and first levels.
fn band_checks(rows: &[InfSupResult], tag: &str, checks: &mut Vec<CheckRecord>) {
    let (first, last) = (rows[0].beta, rows[rows.len() - 1].beta);
    for r in rows {
        checks.push(CheckRecord::at_most(
            format!("{tag} level {}: |beta - beta_final| / beta_final", r.level),
            (r.beta - last).abs() / last,
            0.25,
        ));
        checks.push(CheckRecord::at_least(format!("{tag} level {}: beta / beta_level1", r.level), r.beta / first, 0.5));
    }
}

pub fn infsup(tri: &Triangulation, p: usize, levels: usize, minimal: bool, csv: Option<&Path>) -> Out {
    if p == 0 || !(1..=5).contains(&levels) {
        return Err(usage("need --p >= 1 and 1 <= --levels <= 5"));
    }
    if minimal {
        require_odd(p)?;
    }
    let full = refinement_sweep(tri, p, levels, SpaceKind::Full)?;
    let mut checks = Vec::new();
    for r in &full {
        checks.push(CheckRecord::at_least(format!("full level {}: beta > 0", r.level), r.beta, f64::MIN_POSITIVE));
        checks.push(CheckRecord::at_most(format!("full level {}: eigen residual", r.level), r.residual, 1e-8));
    }
    if levels > 1 {
        band_checks(&full, "full", &mut checks);
    }
    let mut rows = full.clone();
    if minimal {
        let min = refinement_sweep(tri, p, levels, SpaceKind::Minimal)?;
        for (f, m) in full.iter().zip(&min) {
            checks.push(CheckRecord::at_least(
                format!("level {}: beta_full - beta_minimal", f.level),
                f.beta - m.beta,
                -1e-12 * f.beta,
            ));
            checks.push(CheckRecord::at_most(format!("minimal level {}: eigen residual", m.level), m.residual, 1e-8));
        }
        if levels > 1 {
            band_checks(&min, "minimal", &mut checks);
        }
        rows.extend(min);
    }
    if let Some(path) = csv {
        std::fs::write(path, sweep_csv(&rows))
            .map_err(|e| usage(format!("cannot write CSV to '{}': {e}", path.display())))?;
    }
    Ok(Report::new(vec![], None, checks, rows.iter().map(to_value).collect()))
}

pub fn mesh(mut tri: Triangulation, refine: usize, min_angle: f64, max_m: usize, write: Option<&Path>) -> Out {
    for _ in 0..refine {
        tri = refine_uniform(&tri);
    }
    let adm = check_admissible(&tri, min_angle.to_radians(), max_m);
    if let Some(path) = write {
        tri.write_json(path).map_err(|e| usage(format!("cannot write mesh to '{}': {e}", path.display())))?;
    }
    let checks = vec![
        CheckRecord::exact("has interior vertex", 1, usize::from(adm.has_interior_vertex)),
        CheckRecord::at_least("min angle (deg)", adm.min_angle.to_degrees(), min_angle),
        CheckRecord::exact("admissible", 1, usize::from(adm.admissible)),
    ];
    let record = json!({
        "n_vertices": tri.n_vertices(),
        "n_triangles": tri.n_triangles(),
        "n_edges": tri.edges().len(),
        "n_interior_vertices": tri.interior_vertices().len(),
        "n_interior_edges": tri.n_interior_edges(),
        "h_max": tri.h_max(),
        "area": tri.area(),
        "admissibility": to_value(&adm),
    });
    Ok(Report::new(vec![], None, checks, vec![record]))
}
