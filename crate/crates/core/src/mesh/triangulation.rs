use std::collections::{HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{cross, dot, norm, sub, Point, Triangle};

/// Relative area threshold below which a triangle counts as degenerate.
pub const DEGENERACY_RTOL: f64 = 1e-14;

/// Undirected edge with its one or two neighbouring triangles.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Edge {
    /// Endpoints with `vertices[0] < vertices[1]`.
    pub vertices: [usize; 2],
    pub triangles: Vec<usize>,
    pub boundary: bool,
}

/// On-disk mesh format with 0-based indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshFile {
    pub vertices: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
}

/// A regular, edge-to-edge triangulation with counterclockwise triangles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeshFile", into = "MeshFile")]
pub struct Triangulation {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    edges: Vec<Edge>,
    /// `triangle_edges[t][i]` is the edge opposite local vertex `i`.
    triangle_edges: Vec<[usize; 3]>,
    edge_lookup: HashMap<(usize, usize), usize>,
    interior_vertices: Vec<usize>,
}

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

impl Triangulation {
    pub fn build(vertices: Vec<Point>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let nv = vertices.len();
        for (i, v) in vertices.iter().enumerate() {
            if !(v[0].is_finite() && v[1].is_finite()) {
                return Err(Error::NonFinite(i, 0));
            }
        }
        let diag2 = bbox_diagonal_sq(&vertices);
        let mut tris = Vec::with_capacity(triangles.len());
        let mut seen = HashSet::new();
        for (t, &[a, b, c]) in triangles.iter().enumerate() {
            for index in [a, b, c] {
                if index >= nv {
                    return Err(Error::IndexOutOfRange { index, len: nv });
                }
            }
            let mut sorted = [a, b, c];
            sorted.sort_unstable();
            if !seen.insert(sorted) {
                return Err(Error::DuplicateTriangle(t));
            }
            let area = Triangle::new(vertices[a], vertices[b], vertices[c]).signed_area();
            if area.abs() <= DEGENERACY_RTOL * diag2 || a == b || b == c || a == c {
                return Err(Error::DegenerateTriangle(t));
            }
            tris.push(if area > 0.0 { [a, b, c] } else { [a, c, b] });
        }

        let mut edges: Vec<Edge> = Vec::new();
        let mut edge_lookup = HashMap::new();
        let mut triangle_edges = Vec::with_capacity(tris.len());
        for (t, tri) in tris.iter().enumerate() {
            let mut local = [0; 3];
            for (i, slot) in local.iter_mut().enumerate() {
                let k = key(tri[(i + 1) % 3], tri[(i + 2) % 3]);
                let e = *edge_lookup.entry(k).or_insert_with(|| {
                    edges.push(Edge { vertices: [k.0, k.1], triangles: Vec::new(), boundary: false });
                    edges.len() - 1
                });
                if edges[e].triangles.len() == 2 {
                    return Err(Error::NonManifoldEdge(k.0, k.1));
                }
                edges[e].triangles.push(t);
                *slot = e;
            }
            triangle_edges.push(local);
        }
        for e in &mut edges {
            e.boundary = e.triangles.len() == 1;
        }

        let boundary_edges: Vec<[usize; 2]> = edges.iter().filter(|e| e.boundary).map(|e| e.vertices).collect();
        let mut on_boundary = vec![false; nv];
        for &[a, b] in &boundary_edges {
            on_boundary[a] = true;
            on_boundary[b] = true;
        }
        check_hanging(&vertices, &boundary_edges, &on_boundary, diag2)?;

        let mut used = vec![false; nv];
        for tri in &tris {
            for &v in tri {
                used[v] = true;
            }
        }
        let interior_vertices = (0..nv).filter(|&v| used[v] && !on_boundary[v]).collect();
        Ok(Self { vertices, triangles: tris, edges, triangle_edges, edge_lookup, interior_vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn triangle(&self, t: usize) -> Triangle {
        let [a, b, c] = self.triangles[t];
        Triangle::new(self.vertices[a], self.vertices[b], self.vertices[c])
    }

    pub fn triangle_edges(&self, t: usize) -> [usize; 3] {
        self.triangle_edges[t]
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_lookup.get(&key(a, b)).copied()
    }

    pub fn interior_vertices(&self) -> &[usize] {
        &self.interior_vertices
    }

    pub fn is_interior_vertex(&self, v: usize) -> bool {
        self.interior_vertices.binary_search(&v).is_ok()
    }

    pub fn interior_edges(&self) -> impl Iterator<Item = (usize, &Edge)> {
        self.edges.iter().enumerate().filter(|(_, e)| !e.boundary)
    }

    pub fn n_interior_edges(&self) -> usize {
        self.edges.iter().filter(|e| !e.boundary).count()
    }

    pub fn n_boundary_edges(&self) -> usize {
        self.edges.iter().filter(|e| e.boundary).count()
    }

    pub fn min_angle(&self) -> f64 {
        (0..self.n_triangles()).map(|t| self.triangle(t).min_angle()).fold(f64::INFINITY, f64::min)
    }

    pub fn h_max(&self) -> f64 {
        (0..self.n_triangles()).map(|t| self.triangle(t).diameter()).fold(0.0, f64::max)
    }

    pub fn area(&self) -> f64 {
        (0..self.n_triangles()).map(|t| self.triangle(t).area()).sum()
    }

    /// The same connectivity with every vertex moved by `f`.
    pub fn mapped(&self, f: impl Fn(Point) -> Point) -> Result<Self> {
        Self::build(self.vertices.iter().map(|&v| f(v)).collect(), self.triangles.clone())
    }

    pub fn to_mesh_file(&self) -> MeshFile {
        MeshFile { vertices: self.vertices.clone(), triangles: self.triangles.clone() }
    }

    pub fn from_json_str(s: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("mesh serialization is infallible")
    }

    pub fn read_json(path: &Path) -> std::io::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
    }

    pub fn write_json(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json_string())
    }
}

impl TryFrom<MeshFile> for Triangulation {
    type Error = Error;

    fn try_from(m: MeshFile) -> Result<Self> {
        Self::build(m.vertices, m.triangles)
    }
}

impl From<Triangulation> for MeshFile {
    fn from(t: Triangulation) -> Self {
        t.to_mesh_file()
    }
}

fn bbox_diagonal_sq(vertices: &[Point]) -> f64 {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for v in vertices {
        for k in 0..2 {
            lo[k] = lo[k].min(v[k]);
            hi[k] = hi[k].max(v[k]);
        }
    }
    if vertices.is_empty() {
        return 0.0;
    }
    (hi[0] - lo[0]).powi(2) + (hi[1] - lo[1]).powi(2)
}

/// A hanging vertex leaves both sides of the edge it sits on unmatched, so
/// it always lies inside some boundary edge.
fn check_hanging(vertices: &[Point], boundary_edges: &[[usize; 2]], on_boundary: &[bool], diag2: f64) -> Result<()> {
    let candidates: Vec<usize> = (0..vertices.len()).filter(|&v| on_boundary[v]).collect();
    for &[a, b] in boundary_edges {
        let (pa, pb) = (vertices[a], vertices[b]);
        let d = sub(pb, pa);
        let len2 = dot(d, d);
        for &v in &candidates {
            if v == a || v == b {
                continue;
            }
            let w = sub(vertices[v], pa);
            let s = dot(w, d) / len2;
            if s > 0.0 && s < 1.0 && cross(d, w).abs() / norm(d) <= 1e-12 * diag2.sqrt() {
                return Err(Error::HangingVertex { vertex: v, a, b });
            }
        }
    }
    Ok(())
}
