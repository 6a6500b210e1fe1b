//! Legendre polynomials normalised by `Le_p(1) = 1` and their zeros.

/// Value and derivative of the Legendre polynomial of degree `p` at `t`,
/// by the three-term recurrence.
pub fn legendre(p: usize, t: f64) -> (f64, f64) {
    if p == 0 {
        return (1.0, 0.0);
    }
    let (mut prev, mut cur) = (1.0, t);
    let (mut dprev, mut dcur) = (0.0, 1.0);
    for n in 1..p {
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0) * t * cur - nf * prev) / (nf + 1.0);
        // P'_{n+1} = P'_{n-1} + (2n + 1) P_n
        let dnext = dprev + (2.0 * nf + 1.0) * cur;
        prev = cur;
        cur = next;
        dprev = dcur;
        dcur = dnext;
    }
    (cur, dcur)
}

/// `Le_p'(1) = p (p + 1) / 2`.
pub fn legendre_derivative_at_one(p: usize) -> f64 {
    (p * (p + 1)) as f64 / 2.0
}

/// The `p` zeros of `Le_p` in (−1, 1), ascending, by Newton iteration from
/// Chebyshev-type initial guesses.
pub fn gauss_points(p: usize) -> Vec<f64> {
    assert!(p >= 1, "gauss_points needs p >= 1");
    let mut x: Vec<f64> = (1..=p)
        .map(|i| {
            let guess = (std::f64::consts::PI * (i as f64 - 0.25) / (p as f64 + 0.5)).cos();
            newton_root(p, guess)
        })
        .collect();
    x.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // The zeros are symmetric; pair them up so the symmetry is exact.
    for i in 0..p / 2 {
        let s = 0.5 * (x[p - 1 - i] - x[i]);
        x[i] = -s;
        x[p - 1 - i] = s;
    }
    if p % 2 == 1 {
        x[p / 2] = 0.0;
    }
    x
}

fn newton_root(p: usize, mut x: f64) -> f64 {
    for _ in 0..50 {
        let (v, d) = legendre(p, x);
        let dx = v / d;
        x -= dx;
        if dx.abs() <= 1e-15 {
            break;
        }
    }
    x
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let x = gauss_points(n);
    let w = x
        .iter()
        .map(|&xi| {
            let (_, d) = legendre(n, xi);
            2.0 / ((1.0 - xi * xi) * d * d)
        })
        .collect();
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Bisection on a sign change, independent of the Newton route.
    fn bisect(p: usize, mut a: f64, mut b: f64) -> f64 {
        let mut fa = legendre(p, a).0;
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            let fm = legendre(p, m).0;
            if fm == 0.0 {
                return m;
            }
            if (fm < 0.0) == (fa < 0.0) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }

    fn bisection_roots(p: usize) -> Vec<f64> {
        let n = 4000;
        let grid: Vec<f64> = (0..=n).map(|i| -1.0 + 2.0 * i as f64 / n as f64 + 1e-9).collect();
        grid.windows(2)
            .filter(|w| legendre(p, w[0]).0.signum() != legendre(p, w[1]).0.signum())
            .map(|w| bisect(p, w[0], w[1]))
            .collect()
    }

    #[test]
    fn cubic_values() {
        assert_eq!(legendre(3, 1.0).0, 1.0);
        assert!((legendre(3, 0.5).0 + 0.4375).abs() < 1e-15);
        assert!((legendre(3, 1.0).1 - 6.0).abs() < 1e-15);
        assert!((legendre(3, -1.0).1 - 6.0).abs() < 1e-15);
        assert_eq!(legendre_derivative_at_one(3), 6.0);
    }

    #[test]
    fn derivative_at_one_matches_recurrence() {
        for p in 0..12 {
            assert!((legendre(p, 1.0).1 - legendre_derivative_at_one(p)).abs() < 1e-12);
        }
    }

    #[test]
    fn low_order_gauss_points() {
        assert_eq!(gauss_points(1), vec![0.0]);
        let g2 = gauss_points(2);
        assert!((g2[1] - 0.57735026919).abs() < 1e-11 && (g2[0] + g2[1]).abs() < 1e-16);
        let g3 = gauss_points(3);
        assert!((g3[2] - 0.77459666924).abs() < 1e-11 && g3[1] == 0.0);
    }

    #[test]
    fn newton_agrees_with_bisection_and_is_symmetric() {
        for p in 1..=10 {
            let g = gauss_points(p);
            let b = bisection_roots(p);
            assert_eq!(b.len(), p);
            for (x, y) in g.iter().zip(&b) {
                assert!((x - y).abs() < 1e-12, "p={p}: {x} vs {y}");
                assert!(legendre(p, *x).0.abs() <= 1e-14);
            }
            assert!(g.windows(2).all(|w| w[0] < w[1]));
            for i in 0..p {
                assert_eq!(g[i], -g[p - 1 - i]);
            }
        }
    }

    #[test]
    fn weights_integrate_polynomials() {
        let (x, w) = gauss_legendre(5);
        // exact through degree 9
        let integral: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(8)).sum();
        assert!((integral - 2.0 / 9.0).abs() < 1e-15);
    }
}
