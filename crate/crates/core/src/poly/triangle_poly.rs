//! Polynomials on a fixed triangle, stored over the barycentric monomials
//! `λ0^a λ1^b` (a + b ≤ d) with `λ2 = 1 − λ0 − λ1` eliminated.

use std::ops::{Add, Mul, Neg, Sub};

use super::quadrature::triangle_quadrature;
use crate::error::Result;
use crate::geom::{Point, Triangle};

/// Number of monomials of total degree ≤ d in two variables.
pub const fn monomial_count(d: usize) -> usize {
    (d + 1) * (d + 2) / 2
}

/// Position of `λ0^a λ1^b`; lower-degree coefficient vectors are prefixes.
#[inline]
pub const fn monomial_index(a: usize, b: usize) -> usize {
    let t = a + b;
    t * (t + 1) / 2 + b
}

/// Exponent pairs in storage order for degree ≤ d.
pub fn monomial_exponents(d: usize) -> Vec<(usize, usize)> {
    (0..=d).flat_map(|t| (0..=t).map(move |b| (t - b, b))).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolyOnTriangle {
    tri: Triangle,
    degree: usize,
    coeffs: Vec<f64>,
}

impl PolyOnTriangle {
    pub fn zero(tri: Triangle, degree: usize) -> Self {
        Self { tri, degree, coeffs: vec![0.0; monomial_count(degree)] }
    }

    pub fn constant(tri: Triangle, c: f64) -> Self {
        Self { tri, degree: 0, coeffs: vec![c] }
    }

    pub fn from_coeffs(tri: Triangle, degree: usize, coeffs: Vec<f64>) -> Self {
        assert_eq!(coeffs.len(), monomial_count(degree), "coefficient count");
        Self { tri, degree, coeffs }
    }

    /// Barycentric coordinate `i ∈ {0, 1, 2}`, equal to one at vertex `i`.
    pub fn barycentric(tri: Triangle, i: usize) -> Self {
        let mut p = Self::zero(tri, 1);
        match i {
            0 => p.coeffs[monomial_index(1, 0)] = 1.0,
            1 => p.coeffs[monomial_index(0, 1)] = 1.0,
            2 => {
                p.coeffs[0] = 1.0;
                p.coeffs[monomial_index(1, 0)] = -1.0;
                p.coeffs[monomial_index(0, 1)] = -1.0;
            }
            _ => panic!("barycentric index {i} out of range"),
        }
        p
    }

    /// Single monomial `λ0^a λ1^b`.
    pub fn monomial(tri: Triangle, a: usize, b: usize) -> Self {
        let mut p = Self::zero(tri, a + b);
        p.coeffs[monomial_index(a, b)] = 1.0;
        p
    }

    pub fn triangle(&self) -> &Triangle {
        &self.tri
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficients padded (or checked) to degree `d`.
    pub fn coeffs_at_degree(&self, d: usize) -> Vec<f64> {
        let n = monomial_count(d);
        let mut c = vec![0.0; n];
        for (i, &v) in self.coeffs.iter().enumerate() {
            if i < n {
                c[i] = v;
            } else {
                assert!(v == 0.0, "polynomial degree exceeds {d}");
            }
        }
        c
    }

    /// Largest degree with a nonzero coefficient.
    pub fn effective_degree(&self) -> usize {
        let last = self.coeffs.iter().rposition(|&v| v != 0.0).unwrap_or(0);
        monomial_exponents(self.degree)[last].0 + monomial_exponents(self.degree)[last].1
    }

    fn with_degree(&self, d: usize) -> Self {
        if d == self.degree {
            return self.clone();
        }
        Self { tri: self.tri, degree: d, coeffs: self.coeffs_at_degree(d) }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { tri: self.tri, degree: self.degree, coeffs: self.coeffs.iter().map(|v| v * c).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.tri, 1.0);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn eval_bary(&self, l0: f64, l1: f64) -> f64 {
        let d = self.degree;
        let mut p0 = vec![1.0; d + 1];
        let mut p1 = vec![1.0; d + 1];
        for k in 1..=d {
            p0[k] = p0[k - 1] * l0;
            p1[k] = p1[k - 1] * l1;
        }
        monomial_exponents(d).iter().zip(&self.coeffs).map(|(&(a, b), c)| c * p0[a] * p1[b]).sum()
    }

    pub fn eval(&self, x: Point) -> f64 {
        let l = self.tri.barycentric(x);
        self.eval_bary(l[0], l[1])
    }

    /// Value at vertex `i` of the triangle.
    pub fn eval_vertex(&self, i: usize) -> f64 {
        match i {
            0 => self.eval_bary(1.0, 0.0),
            1 => self.eval_bary(0.0, 1.0),
            _ => self.eval_bary(0.0, 0.0),
        }
    }

    /// Partial derivative with respect to `λ0` (k = 0) or `λ1` (k = 1).
    pub fn d_bary(&self, k: usize) -> Self {
        let d = self.degree.saturating_sub(1);
        let mut out = Self::zero(self.tri, d);
        if self.degree == 0 {
            return out;
        }
        for (&(a, b), &c) in monomial_exponents(self.degree).iter().zip(&self.coeffs) {
            if c == 0.0 {
                continue;
            }
            match k {
                0 if a > 0 => out.coeffs[monomial_index(a - 1, b)] += c * a as f64,
                1 if b > 0 => out.coeffs[monomial_index(a, b - 1)] += c * b as f64,
                _ => {}
            }
        }
        out
    }

    /// Cartesian gradient as two polynomials of one degree less.
    pub fn grad_polys(&self) -> [Self; 2] {
        let g = self.tri.bary_gradients();
        let d0 = self.d_bary(0);
        let d1 = self.d_bary(1);
        [
            &d0.scale(g[0][0]) + &d1.scale(g[1][0]),
            &d0.scale(g[0][1]) + &d1.scale(g[1][1]),
        ]
    }

    pub fn eval_grad(&self, x: Point) -> (f64, Point) {
        let [gx, gy] = self.grad_polys();
        (self.eval(x), [gx.eval(x), gy.eval(x)])
    }

    /// Integral over the triangle with a quadrature exact for the degree.
    pub fn integrate(&self) -> Result<f64> {
        let rule = triangle_quadrature(self.degree.max(1))?;
        let area = self.tri.area();
        Ok(rule.points.iter().zip(&rule.weights).map(|(p, w)| w * self.eval_bary(p[0], p[1])).sum::<f64>() * area)
    }

    /// `Le_n(x)` composed with this polynomial, via the three-term recurrence.
    pub fn legendre_of(&self, n: usize) -> Self {
        let one = Self::constant(self.tri, 1.0);
        if n == 0 {
            return one;
        }
        let (mut prev, mut cur) = (one, self.clone());
        for k in 1..n {
            let kf = k as f64;
            let next = (&(self * &cur).scale(2.0 * kf + 1.0) - &prev.scale(kf)).scale(1.0 / (kf + 1.0));
            prev = cur;
            cur = next;
        }
        cur
    }

    /// Values at points `(1 − s) a + s b` along the edge from vertex `from`
    /// to vertex `to`.
    pub fn trace(&self, from: usize, to: usize, s: f64) -> f64 {
        let mut l = [0.0; 3];
        l[from] = 1.0 - s;
        l[to] += s;
        self.eval_bary(l[0], l[1])
    }

    pub fn l2_norm(&self) -> Result<f64> {
        Ok((self * self).integrate()?.max(0.0).sqrt())
    }
}

impl Add for &PolyOnTriangle {
    type Output = PolyOnTriangle;

    fn add(self, rhs: Self) -> PolyOnTriangle {
        debug_assert_eq!(self.tri, rhs.tri, "polynomials on different triangles");
        let d = self.degree.max(rhs.degree);
        let mut out = self.with_degree(d);
        for (o, v) in out.coeffs.iter_mut().zip(&rhs.coeffs) {
            *o += v;
        }
        out
    }
}

impl Sub for &PolyOnTriangle {
    type Output = PolyOnTriangle;

    fn sub(self, rhs: Self) -> PolyOnTriangle {
        self + &rhs.scale(-1.0)
    }
}

impl Neg for &PolyOnTriangle {
    type Output = PolyOnTriangle;

    fn neg(self) -> PolyOnTriangle {
        self.scale(-1.0)
    }
}

impl Mul for &PolyOnTriangle {
    type Output = PolyOnTriangle;

    fn mul(self, rhs: Self) -> PolyOnTriangle {
        debug_assert_eq!(self.tri, rhs.tri, "polynomials on different triangles");
        let mut out = PolyOnTriangle::zero(self.tri, self.degree + rhs.degree);
        let ea = monomial_exponents(self.degree);
        let eb = monomial_exponents(rhs.degree);
        for (&(a1, b1), &c1) in ea.iter().zip(&self.coeffs) {
            if c1 == 0.0 {
                continue;
            }
            for (&(a2, b2), &c2) in eb.iter().zip(&rhs.coeffs) {
                if c2 != 0.0 {
                    out.coeffs[monomial_index(a1 + a2, b1 + b2)] += c1 * c2;
                }
            }
        }
        out
    }
}

/// A vector field with polynomial components on one triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorPoly {
    pub x: PolyOnTriangle,
    pub y: PolyOnTriangle,
}

impl VectorPoly {
    pub fn new(x: PolyOnTriangle, y: PolyOnTriangle) -> Self {
        Self { x, y }
    }

    /// `q · v` for a scalar polynomial and a constant direction.
    pub fn along(q: &PolyOnTriangle, v: Point) -> Self {
        Self { x: q.scale(v[0]), y: q.scale(v[1]) }
    }

    pub fn zero(tri: Triangle, degree: usize) -> Self {
        Self { x: PolyOnTriangle::zero(tri, degree), y: PolyOnTriangle::zero(tri, degree) }
    }

    pub fn triangle(&self) -> &Triangle {
        self.x.triangle()
    }

    pub fn div(&self) -> PolyOnTriangle {
        let gx = self.x.grad_polys();
        let gy = self.y.grad_polys();
        &gx[0] + &gy[1]
    }

    pub fn eval(&self, p: Point) -> Point {
        [self.x.eval(p), self.y.eval(p)]
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { x: &self.x + &other.x, y: &self.y + &other.y }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { x: self.x.scale(c), y: self.y.scale(c) }
    }

    /// Squared H¹ seminorm over the triangle.
    pub fn h1_seminorm_sq(&self) -> Result<f64> {
        let mut s = 0.0;
        for c in [&self.x, &self.y] {
            for g in c.grad_polys() {
                s += (&g * &g).integrate()?;
            }
        }
        Ok(s.max(0.0))
    }

    /// Raw coefficients `[x-part; y-part]` at degree `d`.
    pub fn raw_coeffs(&self, d: usize) -> Vec<f64> {
        let mut c = self.x.coeffs_at_degree(d);
        c.extend(self.y.coeffs_at_degree(d));
        c
    }

    pub fn from_raw(tri: Triangle, d: usize, raw: &[f64]) -> Self {
        let n = monomial_count(d);
        Self {
            x: PolyOnTriangle::from_coeffs(tri, d, raw[..n].to_vec()),
            y: PolyOnTriangle::from_coeffs(tri, d, raw[n..2 * n].to_vec()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{dot, norm, rot_cw, scale, sub};

    fn tri() -> Triangle {
        Triangle::new([0.2, -0.1], [1.3, 0.4], [0.1, 0.9])
    }

    #[test]
    fn barycentric_vertex_values() {
        let t = tri();
        for i in 0..3 {
            let l = PolyOnTriangle::barycentric(t, i);
            for j in 0..3 {
                let v = l.eval(t.vertices[j]);
                assert!((v - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn constant_has_zero_gradient_and_integrates_to_area() {
        let t = tri();
        let c = PolyOnTriangle::constant(t, 1.0);
        let (_, g) = c.eval_grad([0.5, 0.3]);
        assert_eq!(g, [0.0, 0.0]);
        assert!((c.integrate().unwrap() - t.area()).abs() < 1e-15);
        let unit = Triangle::new([0.0, 0.0], [1.0, 0.0], [0.0, 1.0]);
        assert!((PolyOnTriangle::constant(unit, 1.0).integrate().unwrap() - 0.5).abs() < 1e-15);
        let phi = PolyOnTriangle::barycentric(t, 0);
        assert!((phi.integrate().unwrap() - t.area() / 3.0).abs() < 1e-15);
    }

    #[test]
    fn edge_integral_of_quadratic_times_linear() {
        // ∫_0^1 s^2 (1 - s) ds along an edge where φ_j = s, φ_z = 1 - s
        let t = tri();
        let f = &PolyOnTriangle::barycentric(t, 1).pow(2) * &PolyOnTriangle::barycentric(t, 0);
        let (x, w) = crate::poly::legendre::gauss_legendre(4);
        let v: f64 = x.iter().zip(&w).map(|(xi, wi)| 0.5 * wi * f.trace(0, 1, 0.5 * (xi + 1.0))).sum();
        assert!((v - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn product_gradient_matches_finite_differences() {
        let t = tri();
        let f = &PolyOnTriangle::barycentric(t, 0) * &PolyOnTriangle::barycentric(t, 2).pow(2);
        let h = 1e-6;
        for &(l0, l1) in &[(0.2, 0.3), (0.6, 0.1), (0.33, 0.33)] {
            let x = t.point(l0, l1);
            let (_, g) = f.eval_grad(x);
            let fx = (f.eval([x[0] + h, x[1]]) - f.eval([x[0] - h, x[1]])) / (2.0 * h);
            let fy = (f.eval([x[0], x[1] + h]) - f.eval([x[0], x[1] - h])) / (2.0 * h);
            assert!((g[0] - fx).abs() < 1e-6 && (g[1] - fy).abs() < 1e-6);
        }
    }

    #[test]
    fn legendre_composition_matches_pointwise() {
        let t = tri();
        let arg = &PolyOnTriangle::constant(t, 1.0) - &PolyOnTriangle::barycentric(t, 2).scale(2.0);
        let le5 = arg.legendre_of(5);
        for &(l0, l1) in &[(0.1, 0.2), (0.5, 0.4)] {
            let direct = crate::poly::legendre::legendre(5, 1.0 - 2.0 * (1.0 - l0 - l1)).0;
            assert!((le5.eval_bary(l0, l1) - direct).abs() < 1e-13);
        }
    }

    #[test]
    fn tangential_and_normal_derivatives_of_hat_functions() {
        // Edge from vertex 1 (P) to vertex 0 (z); the opposite vertex 2 lies to its left.
        let t = Triangle::new([0.0, 0.0], [1.0, 0.0], [0.3, 0.8]);
        let (z, pj) = (t.vertices[0], t.vertices[1]);
        let e = norm(sub(z, pj));
        let tt = scale(sub(z, pj), 1.0 / e);
        let n = rot_cw(tt);
        let phi_z = PolyOnTriangle::barycentric(t, 0);
        let (_, gz) = phi_z.eval_grad([0.3, 0.3]);
        assert!((e * dot(tt, gz) - 1.0).abs() < 1e-14);
        let alpha = t.angles()[1];
        assert!((e * dot(n, gz) + 1.0 / alpha.tan()).abs() < 1e-14);
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `∫_T λ0^a λ1^b = a! b! 2|T| / (a + b + 2)!`.
pub fn monomial_integral(a: usize, b: usize, area: f64) -> f64 {
    factorial(a) * factorial(b) * 2.0 * area / factorial(a + b + 2)
}

/// Gram matrix of the monomials of degree ≤ d in `L²(T)`.
pub fn mass_matrix(tri: &Triangle, d: usize) -> crate::linalg::DenseMatrix {
    let ex = monomial_exponents(d);
    let area = tri.area();
    let mut m = crate::linalg::DenseMatrix::zeros(ex.len(), ex.len());
    for (i, &(a1, b1)) in ex.iter().enumerate() {
        for (j, &(a2, b2)) in ex.iter().enumerate() {
            m[(i, j)] = monomial_integral(a1 + a2, b1 + b2, area);
        }
    }
    m
}

#[cfg(test)]
mod mass_tests {
    use super::*;

    #[test]
    fn mass_matrix_matches_quadrature() {
        let t = Triangle::new([0.1, 0.0], [1.0, 0.3], [0.4, 1.1]);
        let m = mass_matrix(&t, 3);
        for (i, &(a1, b1)) in monomial_exponents(3).iter().enumerate() {
            for (j, &(a2, b2)) in monomial_exponents(3).iter().enumerate() {
                let q = PolyOnTriangle::monomial(t, a1 + a2, b1 + b2).integrate().unwrap();
                assert!((m[(i, j)] - q).abs() < 1e-14);
            }
        }
    }
}
