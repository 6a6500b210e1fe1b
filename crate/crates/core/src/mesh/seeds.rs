//! Seed meshes for refinement sweeps.

use std::f64::consts::PI;

use super::triangulation::Triangulation;

/// Unit square split by both diagonals; the centre is vertex 4.
pub fn criss_cross_square() -> Triangulation {
    Triangulation::build(
        vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5]],
        vec![[0, 1, 4], [1, 2, 4], [2, 3, 4], [3, 0, 4]],
    )
    .expect("static mesh")
}

/// Three criss-cross unit squares forming `[0,2]² \ [1,2]×[1,2]`.
pub fn l_shape() -> Triangulation {
    let corners = [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [0.0, 1.0], [1.0, 1.0], [2.0, 1.0], [0.0, 2.0], [1.0, 2.0]];
    let cells = [[0, 1, 4, 3], [1, 2, 5, 4], [3, 4, 7, 6]];
    let mut vertices = corners.to_vec();
    let mut triangles = Vec::new();
    for c in cells {
        let x = 0.25 * c.iter().map(|&i| corners[i][0]).sum::<f64>();
        let y = 0.25 * c.iter().map(|&i| corners[i][1]).sum::<f64>();
        let mid = vertices.len();
        vertices.push([x, y]);
        for k in 0..4 {
            triangles.push([c[k], c[(k + 1) % 4], mid]);
        }
    }
    Triangulation::build(vertices, triangles).expect("static mesh")
}

/// Regular `n`-gon inscribed in the unit circle plus its centre (vertex 0),
/// triangulated as a fan; for `n ≥ 4` this is the Delaunay triangulation.
pub fn disk(n: usize) -> Triangulation {
    let mut vertices = vec![[0.0, 0.0]];
    vertices.extend((0..n).map(|k| {
        let th = 2.0 * PI * k as f64 / n as f64;
        [th.cos(), th.sin()]
    }));
    let triangles = (0..n).map(|k| [0, 1 + k, 1 + (k + 1) % n]).collect();
    Triangulation::build(vertices, triangles).expect("static mesh")
}

/// Seed mesh by name: `crisscross`, `lshape` or `disk`.
pub fn by_name(name: &str) -> Option<Triangulation> {
    match name {
        "crisscross" | "square" => Some(criss_cross_square()),
        "lshape" | "l-shape" => Some(l_shape()),
        "disk" => Some(disk(12)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crisscross_counts() {
        let t = criss_cross_square();
        assert_eq!(t.interior_vertices(), &[4]);
        assert_eq!(t.n_interior_edges(), 4);
        assert_eq!(t.n_boundary_edges(), 4);
    }

    #[test]
    fn l_shape_and_disk() {
        let l = l_shape();
        assert_eq!(l.n_triangles(), 12);
        assert!((l.area() - 3.0).abs() < 1e-14);
        assert_eq!(l.interior_vertices().len(), 3);
        let d = disk(12);
        assert_eq!(d.interior_vertices(), &[0]);
        assert!((d.min_angle() - 30f64.to_radians()).abs() < 1e-12);
    }
}
