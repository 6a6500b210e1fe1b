//! Points and triangles in the plane.

use serde::{Deserialize, Serialize};

pub type Point = [f64; 2];

#[inline]
pub fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn add(a: Point, b: Point) -> Point {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
pub fn scale(a: Point, c: f64) -> Point {
    [a[0] * c, a[1] * c]
}

#[inline]
pub fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
pub fn norm(a: Point) -> f64 {
    a[0].hypot(a[1])
}

#[inline]
pub fn midpoint(a: Point, b: Point) -> Point {
    [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
}

/// Rotation by `angle` about the origin.
#[inline]
pub fn rotate(a: Point, angle: f64) -> Point {
    let (s, c) = angle.sin_cos();
    [c * a[0] - s * a[1], s * a[0] + c * a[1]]
}

/// Clockwise rotation by a right angle.
#[inline]
pub fn rot_cw(a: Point) -> Point {
    [a[1], -a[0]]
}

/// Interior angle at `at` between the rays towards `a` and `b`.
pub fn angle(at: Point, a: Point, b: Point) -> f64 {
    let u = sub(a, at);
    let v = sub(b, at);
    cross(u, v).abs().atan2(dot(u, v))
}

/// A triangle given by its three vertices. Barycentric coordinate `i`
/// equals one at `vertices[i]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Triangle {
    pub vertices: [Point; 3],
}

impl Triangle {
    pub fn new(a: Point, b: Point, c: Point) -> Self {
        Self { vertices: [a, b, c] }
    }

    pub fn signed_area(&self) -> f64 {
        let [a, b, c] = self.vertices;
        0.5 * cross(sub(b, a), sub(c, a))
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    /// Gradients of the three barycentric coordinates (constant on the triangle).
    pub fn bary_gradients(&self) -> [Point; 3] {
        let [a, b, c] = self.vertices;
        let two_area = 2.0 * self.signed_area();
        // grad(lambda_i) is the inward normal of the opposite edge over its height.
        let g = |p: Point, q: Point| -> Point { [-(q[1] - p[1]) / two_area, (q[0] - p[0]) / two_area] };
        [g(b, c), g(c, a), g(a, b)]
    }

    /// Cartesian point for barycentric coordinates `(l0, l1, 1 - l0 - l1)`.
    pub fn point(&self, l0: f64, l1: f64) -> Point {
        let l2 = 1.0 - l0 - l1;
        let [a, b, c] = self.vertices;
        [
            l0 * a[0] + l1 * b[0] + l2 * c[0],
            l0 * a[1] + l1 * b[1] + l2 * c[1],
        ]
    }

    /// Barycentric coordinates of a Cartesian point.
    pub fn barycentric(&self, x: Point) -> [f64; 3] {
        let [a, b, c] = self.vertices;
        let two_area = 2.0 * self.signed_area();
        let l0 = cross(sub(b, x), sub(c, x)) / two_area;
        let l1 = cross(sub(c, x), sub(a, x)) / two_area;
        [l0, l1, 1.0 - l0 - l1]
    }

    /// Interior angles at the three vertices.
    pub fn angles(&self) -> [f64; 3] {
        let [a, b, c] = self.vertices;
        [angle(a, b, c), angle(b, c, a), angle(c, a, b)]
    }

    pub fn min_angle(&self) -> f64 {
        let [x, y, z] = self.angles();
        x.min(y).min(z)
    }

    pub fn diameter(&self) -> f64 {
        let [a, b, c] = self.vertices;
        norm(sub(a, b)).max(norm(sub(b, c))).max(norm(sub(c, a)))
    }

    /// Apply `f` to every vertex.
    pub fn map(&self, f: impl Fn(Point) -> Point) -> Self {
        let [a, b, c] = self.vertices;
        Self::new(f(a), f(b), f(c))
    }
}
