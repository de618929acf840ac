//! Gauss-Legendre quadrature with nodes computed by Newton iteration on the
//! Legendre recurrence, plus a panel-doubling driver with an absolute
//! error target.

/// Nodes and weights of the n-point rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        // Tricomi initial guess for the i-th positive root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n and P_n' by recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Fixed-order composite rule over [a, b] with `panels` subintervals.
pub fn integrate_panels(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, order: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        let mut acc = 0.0;
        for (x, w) in nodes.iter().zip(&weights) {
            acc += w * f(mid + 0.5 * h * x);
        }
        total += 0.5 * h * acc;
    }
    total
}

/// Panel doubling until successive estimates agree to `abs_tol`.
/// Returns (value, achieved difference).
pub fn integrate_adaptive(f: impl Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64) -> (f64, f64) {
    let order = 16;
    let mut panels = 1;
    let mut prev = integrate_panels(&f, a, b, panels, order);
    for _ in 0..14 {
        panels *= 2;
        let cur = integrate_panels(&f, a, b, panels, order);
        let diff = (cur - prev).abs();
        if diff <= abs_tol {
            return (cur, diff);
        }
        prev = cur;
    }
    (prev, f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn nodes_are_symmetric_and_weights_sum_to_two() {
        for n in [2, 5, 16, 31] {
            let (x, w) = gauss_legendre(n);
            assert_relative_eq!(w.iter().sum::<f64>(), 2.0, epsilon = 1e-13);
            for i in 0..n {
                assert_relative_eq!(x[i], -x[n - 1 - i], epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        // 5-point rule integrates x^8 over [0,1] exactly: 1/9.
        let v = integrate_panels(|x| x.powi(8), 0.0, 1.0, 1, 5);
        assert_relative_eq!(v, 1.0 / 9.0, epsilon = 1e-14);
    }

    #[test]
    fn adaptive_driver_meets_target() {
        let (v, d) = integrate_adaptive(|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12);
        assert!(d <= 1e-12);
        assert_relative_eq!(v, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn handles_steep_but_smooth_integrands() {
        let (v, _) = integrate_adaptive(|x: f64| (-x * x).exp(), -8.0, 8.0, 1e-12);
        assert_relative_eq!(v, std::f64::consts::PI.sqrt(), epsilon = 1e-11);
    }
}
