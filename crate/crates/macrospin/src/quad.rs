//! Composite Gauss-Legendre quadrature on finite intervals.

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
///
/// Nodes are the roots of the Legendre polynomial P_n, found by Newton
/// iteration from the Chebyshev initial guess.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        // Chebyshev guess for the i-th root
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integrate `f` over [a, b] with `panels` equal panels of an
/// `points`-node Gauss-Legendre rule each.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, panels: usize, points: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(points);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        let half = 0.5 * h;
        for (x, w) in nodes.iter().zip(&weights) {
            total += w * half * f(mid + half * x);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn nodes_are_symmetric_and_weights_sum_to_two() {
        for n in [2, 5, 16, 31] {
            let (nodes, weights) = gauss_legendre(n);
            let sum: f64 = weights.iter().sum();
            assert_abs_diff_eq!(sum, 2.0, epsilon = 1e-13);
            for i in 0..n {
                assert_abs_diff_eq!(nodes[i], -nodes[n - 1 - i], epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn integrates_gaussian() {
        // erf(3) * sqrt(pi) / 2
        let exact = 0.886226925452758 * 0.999977909503001;
        let got = integrate(|x: f64| (-x * x).exp(), 0.0, 3.0, 6, 16);
        assert_abs_diff_eq!(got, exact, epsilon = 1e-12);
    }

    #[test]
    fn integrates_polynomial_exactly() {
        // degree 2n-1 is exact for the n-point rule
        let got = integrate(|x: f64| x.powi(7) - 2.0 * x.powi(3) + 1.0, -1.0, 2.0, 1, 4);
        let exact = |x: f64| x.powi(8) / 8.0 - x.powi(4) / 2.0 + x;
        assert_abs_diff_eq!(got, exact(2.0) - exact(-1.0), epsilon = 1e-12);
    }
}
