use std::collections::HashMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::triangulation::{Triangulation, DEGENERACY_RTOL};
use crate::error::{Error, Result};
use crate::geom::{norm, rot_cw, scale, sub, Point, Triangle};

/// Fan of `m ≥ 3` triangles around an interior vertex `z`.
///
/// Indices are 0-based and cyclic: triangle `j` is `(z, P(j), P(j+1))` in
/// counterclockwise order and edge `j` joins `z` to `P(j)`, so edge `j` is
/// shared by triangles `j − 1` and `j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexPatch {
    pub z: Point,
    pub ring: Vec<Point>,
    /// Global vertex index of `z` when extracted from a mesh.
    pub center: Option<usize>,
    pub ring_vertices: Option<Vec<usize>>,
    pub triangles: Option<Vec<usize>>,
}

impl VertexPatch {
    /// Validates orientation, nondegeneracy and a single winding around `z`.
    pub fn new(z: Point, ring: Vec<Point>) -> Result<Self> {
        let m = ring.len();
        if m < 3 {
            return Err(Error::OpenFan(m));
        }
        let scale2 = ring.iter().map(|&p| norm(sub(p, z)).powi(2)).fold(0.0, f64::max);
        let mut winding = 0.0;
        for j in 0..m {
            let t = Triangle::new(z, ring[j], ring[(j + 1) % m]);
            if t.signed_area() <= DEGENERACY_RTOL * scale2 {
                return Err(Error::DegenerateTriangle(j));
            }
            winding += t.angles()[0];
        }
        if (winding - 2.0 * PI).abs() > 1e-9 {
            return Err(Error::OpenFan(m));
        }
        Ok(Self { z, ring, center: None, ring_vertices: None, triangles: None })
    }

    pub fn m(&self) -> usize {
        self.ring.len()
    }

    pub fn prev(&self, j: usize) -> usize {
        (j + self.m() - 1) % self.m()
    }

    pub fn next(&self, j: usize) -> usize {
        (j + 1) % self.m()
    }

    /// `P(j)` with cyclic wrap.
    pub fn p(&self, j: usize) -> Point {
        self.ring[j % self.m()]
    }

    pub fn triangle(&self, j: usize) -> Triangle {
        Triangle::new(self.z, self.p(j), self.p(j + 1))
    }

    pub fn edge_length(&self, j: usize) -> f64 {
        norm(sub(self.z, self.p(j)))
    }

    /// Unit tangent of edge `j`, pointing from `P(j)` to `z`.
    pub fn tangent(&self, j: usize) -> Point {
        let d = sub(self.z, self.p(j));
        scale(d, 1.0 / norm(d))
    }

    /// Unit normal of edge `j`: the tangent turned clockwise, pointing into
    /// triangle `j`.
    pub fn normal(&self, j: usize) -> Point {
        rot_cw(self.tangent(j))
    }

    pub fn area(&self) -> f64 {
        (0..self.m()).map(|j| self.triangle(j).area()).sum()
    }

    pub fn min_angle(&self) -> f64 {
        (0..self.m()).map(|j| self.triangle(j).min_angle()).fold(f64::INFINITY, f64::min)
    }

    /// The same fan with every point moved by an orientation-preserving `f`.
    pub fn mapped(&self, f: impl Fn(Point) -> Point) -> Result<Self> {
        let mut out = Self::new(f(self.z), self.ring.iter().map(|&p| f(p)).collect())?;
        out.center = self.center;
        out.ring_vertices = self.ring_vertices.clone();
        out.triangles = self.triangles.clone();
        Ok(out)
    }

    /// The fan as a standalone triangulation; `z` is vertex 0.
    pub fn to_triangulation(&self) -> Result<Triangulation> {
        let m = self.m();
        let mut vertices = vec![self.z];
        vertices.extend(&self.ring);
        let triangles = (0..m).map(|j| [0, 1 + j, 1 + (j + 1) % m]).collect();
        Triangulation::build(vertices, triangles)
    }
}

/// Ordered fan around the interior vertex `z`, starting at the ring vertex
/// with the smallest global index.
pub fn extract_patch(tri: &Triangulation, z: usize) -> Result<VertexPatch> {
    if z >= tri.n_vertices() {
        return Err(Error::IndexOutOfRange { index: z, len: tri.n_vertices() });
    }
    if !tri.is_interior_vertex(z) {
        return Err(Error::NotInterior(z));
    }
    let mut next: HashMap<usize, (usize, usize)> = HashMap::new();
    for (t, v) in tri.triangles().iter().enumerate() {
        if let Some(k) = v.iter().position(|&x| x == z) {
            next.insert(v[(k + 1) % 3], (v[(k + 2) % 3], t));
        }
    }
    let start = *next.keys().min().ok_or(Error::OpenFan(z))?;
    let (mut ring, mut tris) = (vec![start], Vec::new());
    let mut cur = start;
    loop {
        let &(nxt, t) = next.get(&cur).ok_or(Error::OpenFan(z))?;
        tris.push(t);
        if nxt == start {
            break;
        }
        if tris.len() >= next.len() {
            return Err(Error::OpenFan(z));
        }
        ring.push(nxt);
        cur = nxt;
    }
    if tris.len() != next.len() {
        return Err(Error::OpenFan(z));
    }
    let vs = tri.vertices();
    let mut patch = VertexPatch::new(vs[z], ring.iter().map(|&v| vs[v]).collect())?;
    patch.center = Some(z);
    patch.ring_vertices = Some(ring);
    patch.triangles = Some(tris);
    Ok(patch)
}

const PATCH_RETRIES: usize = 100;
const LENGTH_TRIES: usize = 200;

/// Random fan with all triangle angles at least `min_angle`, deterministic
/// in `seed`. Angles at `z` are a shifted renormalisation of uniform
/// weights; edge lengths are drawn from `[0.5, 2]`.
pub fn random_patch(m: usize, min_angle: f64, seed: u64) -> Result<VertexPatch> {
    let infeasible = Error::InfeasiblePatch { m, min_angle };
    // Each angle at z must fit in [a, π − 2a] and the angles must sum to 2π.
    if m < 3 || !(min_angle > 0.0) || m as f64 * min_angle > 2.0 * PI || m as f64 * (PI - 2.0 * min_angle) < 2.0 * PI {
        return Err(infeasible);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spare = 2.0 * PI - m as f64 * min_angle;
    'attempt: for _ in 0..PATCH_RETRIES {
        let w: Vec<f64> = (0..m).map(|_| rng.gen_range(0.5..1.5)).collect();
        let total: f64 = w.iter().sum();
        let omega: Vec<f64> = w.iter().map(|wi| min_angle + spare * wi / total).collect();
        if omega.iter().any(|&o| o > PI - 2.0 * min_angle) {
            continue;
        }
        let theta0 = rng.gen_range(0.0..2.0 * PI);
        let mut len = vec![rng.gen_range(0.5..2.0)];
        for j in 0..m - 1 {
            let ok = (0..LENGTH_TRIES).find_map(|_| {
                let l = rng.gen_range(0.5..2.0);
                (side_angles_ok(len[j], l, omega[j], min_angle)).then_some(l)
            });
            match ok {
                Some(l) => len.push(l),
                None => continue 'attempt,
            }
        }
        if !side_angles_ok(len[m - 1], len[0], omega[m - 1], min_angle) {
            continue;
        }
        let mut theta = theta0;
        let mut ring = Vec::with_capacity(m);
        for j in 0..m {
            ring.push([len[j] * theta.cos(), len[j] * theta.sin()]);
            theta += omega[j];
        }
        let patch = VertexPatch::new([0.0, 0.0], ring)?;
        if patch.min_angle() >= min_angle * (1.0 - 1e-12) {
            return Ok(patch);
        }
    }
    Err(infeasible)
}

/// Angles opposite to the two sides `a`, `b` enclosing angle `omega` are both ≥ `min`.
fn side_angles_ok(a: f64, b: f64, omega: f64, min: f64) -> bool {
    let t = Triangle::new([0.0, 0.0], [a, 0.0], [b * omega.cos(), b * omega.sin()]);
    let ang = t.angles();
    ang[1] >= min && ang[2] >= min
}

/// Regular fan of `m` triangles with unit spokes; `m = 6` is equilateral.
pub fn regular_patch(m: usize) -> Result<VertexPatch> {
    let ring = (0..m)
        .map(|j| {
            let th = 2.0 * PI * j as f64 / m as f64;
            [th.cos(), th.sin()]
        })
        .collect();
    VertexPatch::new([0.0, 0.0], ring)
}
