use super::triangulation::Triangulation;
use crate::geom::midpoint;

/// Red refinement: every triangle splits into four similar children through
/// its edge midpoints. The midpoint of edge `e` becomes vertex `V + e`.
pub fn refine_uniform(tri: &Triangulation) -> Triangulation {
    let nv = tri.n_vertices();
    let mut vertices = tri.vertices().to_vec();
    for e in tri.edges() {
        vertices.push(midpoint(tri.vertices()[e.vertices[0]], tri.vertices()[e.vertices[1]]));
    }
    let mut triangles = Vec::with_capacity(4 * tri.n_triangles());
    for (t, &[a, b, c]) in tri.triangles().iter().enumerate() {
        // edges opposite a, b, c
        let [ea, eb, ec] = tri.triangle_edges(t).map(|e| nv + e);
        triangles.push([a, ec, eb]);
        triangles.push([ec, b, ea]);
        triangles.push([eb, ea, c]);
        triangles.push([ea, eb, ec]);
    }
    Triangulation::build(vertices, triangles).expect("red refinement of a valid mesh is valid")
}
