use std::collections::VecDeque;

use serde::Serialize;

use super::triangulation::Triangulation;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    pub has_interior_vertex: bool,
    /// Radians.
    pub min_angle: f64,
    /// Largest number of edge crossings from any triangle to one owning an
    /// interior vertex; `None` if some triangle cannot reach one.
    pub connectivity_m: Option<usize>,
    pub epsilon: f64,
    pub m_threshold: usize,
    pub admissible: bool,
}

pub fn check_admissible(tri: &Triangulation, epsilon: f64, m_threshold: usize) -> AdmissibilityReport {
    let nt = tri.n_triangles();
    let mut dist = vec![usize::MAX; nt];
    let mut queue = VecDeque::new();
    for (t, v) in tri.triangles().iter().enumerate() {
        if v.iter().any(|&x| tri.is_interior_vertex(x)) {
            dist[t] = 0;
            queue.push_back(t);
        }
    }
    while let Some(t) = queue.pop_front() {
        for e in tri.triangle_edges(t) {
            for &n in &tri.edges()[e].triangles {
                if dist[n] == usize::MAX {
                    dist[n] = dist[t] + 1;
                    queue.push_back(n);
                }
            }
        }
    }
    let has_interior_vertex = !tri.interior_vertices().is_empty();
    let connectivity_m = if has_interior_vertex && dist.iter().all(|&d| d != usize::MAX) {
        dist.iter().copied().max()
    } else {
        None
    };
    let min_angle = tri.min_angle();
    let admissible = has_interior_vertex && min_angle >= epsilon && connectivity_m.is_some_and(|c| c <= m_threshold);
    AdmissibilityReport { has_interior_vertex, min_angle, connectivity_m, epsilon, m_threshold, admissible }
}
