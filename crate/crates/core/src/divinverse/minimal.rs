use std::collections::HashMap;

use crate::crspace::{DofKind, TriangleBlock, VelocitySpace};
use crate::error::{Error, Result};
use crate::geom::{norm, rot_cw, scale, sub};
use crate::linalg::{DenseMatrix, Lu};
use crate::mesh::Triangulation;
use crate::patchmat::edge_bubble;
use crate::poly::{monomial_count, monomial_exponents, PolyOnTriangle, VectorPoly};

/// Lattice node `(i, j, k)` with `i + j + k = p`, i.e. barycentric
/// coordinates `(i, j, k) / p`, in monomial order of `(i, j)`.
fn lattice(p: usize) -> Vec<[usize; 3]> {
    monomial_exponents(p).into_iter().map(|(i, j)| [i, j, p - i - j]).collect()
}

/// Column `n` holds the monomial coefficients of the Lagrange function of
/// lattice node `n`; geometry independent.
fn nodal_basis(p: usize) -> Result<DenseMatrix> {
    let nodes = lattice(p);
    let ex = monomial_exponents(p);
    let h = 1.0 / p as f64;
    let mut v = DenseMatrix::zeros(nodes.len(), ex.len());
    for (r, node) in nodes.iter().enumerate() {
        let (l0, l1) = (node[0] as f64 * h, node[1] as f64 * h);
        for (c, &(a, b)) in ex.iter().enumerate() {
            v[(r, c)] = l0.powi(a as i32) * l1.powi(b as i32);
        }
    }
    Lu::new(&v)?.inverse()
}

/// Global identity of a lattice node; `None` for nodes on the boundary.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum NodeKey {
    Vertex(usize),
    Edge(usize, usize),
    Interior(usize, usize),
}

fn node_key(tri: &Triangulation, t: usize, node: [usize; 3], p: usize) -> Option<NodeKey> {
    let v = tri.triangles()[t];
    let zeros: Vec<usize> = (0..3).filter(|&i| node[i] == 0).collect();
    match zeros.len() {
        2 => {
            let l = (0..3).find(|&i| node[i] == p).expect("vertex node");
            tri.is_interior_vertex(v[l]).then_some(NodeKey::Vertex(v[l]))
        }
        1 => {
            let e = tri.triangle_edges(t)[zeros[0]];
            let edge = &tri.edges()[e];
            if edge.boundary {
                return None;
            }
            let lo = v.iter().position(|&x| x == edge.vertices[0]).expect("edge endpoint");
            Some(NodeKey::Edge(e, p - node[lo]))
        }
        _ => Some(NodeKey::Interior(t, monomial_exponents(p).iter().position(|&(i, j)| i == node[0] && j == node[1])?)),
    }
}

/// Conforming degree-`p` Lagrange functions with zero boundary values in
/// both components, plus the normal edge bubble `ψ_E n_E` of every interior
/// edge. Always a subspace of the full space.
pub fn minimal_cr_space(tri: &Triangulation, p: usize) -> Result<VelocitySpace> {
    if p < 3 || p.is_multiple_of(2) {
        return Err(Error::UnsupportedDegree { p, reason: "the minimal space needs the odd-degree edge bubble" });
    }
    let n = monomial_count(p);
    let nodal = nodal_basis(p)?;
    let nodes = lattice(p);

    // Scalar Lagrange numbering: vertices, edge nodes, interior nodes.
    let mut ids: HashMap<NodeKey, usize> = HashMap::new();
    let mut keys: Vec<Vec<Option<NodeKey>>> = Vec::with_capacity(tri.n_triangles());
    for t in 0..tri.n_triangles() {
        keys.push(nodes.iter().map(|&node| node_key(tri, t, node, p)).collect());
    }
    let mut order: Vec<NodeKey> = keys.iter().flatten().flatten().copied().collect();
    order.sort_by_key(|k| match *k {
        NodeKey::Vertex(v) => (0, v, 0),
        NodeKey::Edge(e, i) => (1, e, i),
        NodeKey::Interior(t, i) => (2, t, i),
    });
    order.dedup();
    for (i, k) in order.iter().enumerate() {
        ids.insert(*k, i);
    }
    let n_scalar = order.len();

    let interior_edges: Vec<usize> = tri.interior_edges().map(|(e, _)| e).collect();
    let bubble_id: HashMap<usize, usize> =
        interior_edges.iter().enumerate().map(|(i, &e)| (e, 2 * n_scalar + i)).collect();
    let dim = 2 * n_scalar + interior_edges.len();

    let mut blocks = Vec::with_capacity(tri.n_triangles());
    for (t, tkeys) in keys.iter().enumerate() {
        let mut dofs = Vec::new();
        let mut cols: Vec<Vec<f64>> = Vec::new();
        for (node, key) in tkeys.iter().enumerate() {
            let Some(key) = key else { continue };
            let id = ids[key];
            for comp in 0..2 {
                let mut col = vec![0.0; 2 * n];
                for r in 0..n {
                    col[comp * n + r] = nodal[(r, node)];
                }
                dofs.push(comp * n_scalar + id);
                cols.push(col);
            }
        }
        let geo = tri.triangle(t);
        let v = tri.triangles()[t];
        for (lk, &e) in tri.triangle_edges(t).iter().enumerate() {
            let Some(&id) = bubble_id.get(&e) else { continue };
            let [a, b] = tri.edges()[e].vertices;
            let la = v.iter().position(|&x| x == a).expect("edge endpoint");
            let lb = v.iter().position(|&x| x == b).expect("edge endpoint");
            let phi = |i| PolyOnTriangle::barycentric(geo, i);
            let psi = edge_bubble(p, &phi(la), &phi(lb), &phi(lk));
            let d = sub(tri.vertices()[b], tri.vertices()[a]);
            let normal = scale(rot_cw(d), 1.0 / norm(d));
            dofs.push(id);
            cols.push(VectorPoly::along(&psi, normal).raw_coeffs(p));
        }
        blocks.push(TriangleBlock { coeffs: DenseMatrix::from_columns(&cols)?, dofs });
    }
    let mut provenance = vec![DofKind::Conforming; 2 * n_scalar];
    provenance.extend(std::iter::repeat_n(DofKind::EdgeBubble, interior_edges.len()));
    Ok(VelocitySpace { p, dim, blocks, provenance })
}
