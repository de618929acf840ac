//! Pure pointwise kernels of the phase-plane formulation: the sublinear
//! reaction term, the conserved-energy candidate V, the right-hand side of
//! the similarity ODE system, and level-set utilities in the (x, y) plane.

use serde::Serialize;

use crate::error::{Result, SimError};

/// Signed power `sign(x) * |x|^p`, with the removable singularity at the
/// origin evaluated as 0 for every exponent.
#[inline]
pub fn signed_pow(x: f64, p: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.signum() * x.abs().powf(p)
    }
}

/// Problem parameters. Only the exponent is free; everything else is
/// derived from it. `p = 1` is admitted by a few linear control paths
/// (see the periodic module) but rejected here.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProblemParams {
    pub p: f64,
}

impl ProblemParams {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) || !p.is_finite() {
            return Err(SimError::InvalidParameter(format!(
                "exponent p must lie in (0, 1), got {p}"
            )));
        }
        Ok(ProblemParams { p })
    }

    /// Reaction balance H(x) = x/(1-p) - sign(x)|x|^p.
    /// Antisymmetric; zeros at 0 and +-x_eq.
    #[inline]
    pub fn reaction(&self, x: f64) -> f64 {
        x / (1.0 - self.p) - signed_pow(x, self.p)
    }

    /// dH/dx, defined away from x = 0 (sublinear term blows up there).
    #[inline]
    pub fn reaction_deriv(&self, x: f64) -> f64 {
        1.0 / (1.0 - self.p) - self.p * x.abs().powf(self.p - 1.0)
    }

    /// V(x, y) = y^2/2 - x^2/(2(1-p)) + |x|^{1+p}/(1+p).
    /// Strictly decreasing along trajectories for eta > 0.
    #[inline]
    pub fn lyapunov(&self, x: f64, y: f64) -> f64 {
        0.5 * y * y - x * x / (2.0 * (1.0 - self.p)) + x.abs().powf(1.0 + self.p) / (1.0 + self.p)
    }

    /// Nonzero equilibrium abscissa x_eq = (1-p)^{1/(1-p)}.
    #[inline]
    pub fn x_eq(&self) -> f64 {
        (1.0 - self.p).powf(1.0 / (1.0 - self.p))
    }

    /// Critical level c* = V(+-x_eq, 0) = (1-p)^{2/(1-p)} / (2(1+p)).
    #[inline]
    pub fn c_star(&self) -> f64 {
        (1.0 - self.p).powf(2.0 / (1.0 - self.p)) / (2.0 * (1.0 + self.p))
    }

    /// Interior minimizer of H on (0, x_eq): lambda_min = (p(1-p))^{1/(1-p)}.
    #[inline]
    pub fn lambda_min(&self) -> f64 {
        (self.p * (1.0 - self.p)).powf(1.0 / (1.0 - self.p))
    }

    /// m_H = H(lambda_min) = min of H over [0, x_eq]; strictly negative.
    #[inline]
    pub fn m_h(&self) -> f64 {
        self.reaction(self.lambda_min())
    }

    /// Right-hand side of the similarity system:
    ///   x' = y,  y' = H(x) - eta*y/2.
    /// Non-autonomous through eta only; smooth except at x = 0.
    #[inline]
    pub fn rhs(&self, eta: f64, x: f64, y: f64) -> (f64, f64) {
        (y, self.reaction(x) - 0.5 * eta * y)
    }

    /// All derived constants in one struct, mainly for reports.
    pub fn derived_constants(&self) -> DerivedConstants {
        DerivedConstants {
            p: self.p,
            x_eq: self.x_eq(),
            c_star: self.c_star(),
            lambda_min: self.lambda_min(),
            m_h: self.m_h(),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DerivedConstants {
    pub p: f64,
    pub x_eq: f64,
    pub c_star: f64,
    pub lambda_min: f64,
    pub m_h: f64,
}

/// Position of a point relative to the bounded component of {V <= c}
/// (the component containing the origin, confined to |x| <= x_eq).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LevelMembership {
    Inside,
    On,
    Outside,
}

/// Classify (x, y) against the level c of V, restricted to the bounded
/// component. Points with |x| beyond x_eq belong to the unbounded branches
/// and are reported Outside regardless of their V value.
pub fn level_membership(
    params: &ProblemParams,
    x: f64,
    y: f64,
    c: f64,
    tol: f64,
) -> Result<LevelMembership> {
    if !(c >= 0.0 && c <= params.c_star()) {
        return Err(SimError::InvalidParameter(format!(
            "level c must lie in [0, c*], got {c} (c* = {})",
            params.c_star()
        )));
    }
    if !(tol > 0.0) {
        return Err(SimError::InvalidParameter(format!("tol must be positive, got {tol}")));
    }
    let x_eq = params.x_eq();
    if x.abs() > x_eq + tol {
        return Ok(LevelMembership::Outside);
    }
    let v = params.lyapunov(x, y);
    if (v - c).abs() <= tol {
        Ok(LevelMembership::On)
    } else if v < c {
        Ok(LevelMembership::Inside)
    } else {
        Ok(LevelMembership::Outside)
    }
}

/// V restricted to the x-axis; strictly increasing on [0, x_eq].
fn v_axis(params: &ProblemParams, x: f64) -> f64 {
    params.lyapunov(x, 0.0)
}

/// Root of a monotone scalar function by bisection. `f(lo)` and `f(hi)`
/// must straddle zero (weakly).
fn bisect_monotone(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Sample the closed level curve V = c inside the bounded component,
/// counterclockwise from (x_max, 0), closing back onto the first point.
/// Columns x = const are solved for y >= 0 by bisection (V is strictly
/// monotone in |y| at fixed x); the lower branch is the mirror image.
///
/// The degenerate level c = 0 collapses to the single point (0, 0).
pub fn level_curve_sample(
    params: &ProblemParams,
    c: f64,
    n: usize,
) -> Result<Vec<(f64, f64)>> {
    if !(c >= 0.0 && c <= params.c_star()) {
        return Err(SimError::InvalidParameter(format!(
            "level c must lie in [0, c*], got {c} (c* = {})",
            params.c_star()
        )));
    }
    if c == 0.0 {
        return Ok(vec![(0.0, 0.0)]);
    }
    if n < 8 {
        return Err(SimError::InvalidParameter(format!(
            "need at least 8 sample points, got {n}"
        )));
    }

    // Rightmost point of the curve: the unique root of V(x, 0) = c in [0, x_eq].
    let x_eq = params.x_eq();
    let x_max = if c >= params.c_star() {
        x_eq
    } else {
        bisect_monotone(0.0, x_eq, |x| v_axis(params, x) - c)
    };

    let y_of = |x: f64| -> f64 {
        let gap = c - v_axis(params, x);
        if gap <= 0.0 {
            return 0.0;
        }
        // y^2/2 = gap; bracket [0, sqrt(2 gap) * (1 + eps)] is monotone in y.
        let hi = (2.0 * gap).sqrt() * 1.0000001 + 1e-300;
        bisect_monotone(0.0, hi, |y| params.lyapunov(x, y) - c)
    };

    let m = n - 1;
    let mut pts = Vec::with_capacity(n);
    for i in 0..m {
        let theta = 2.0 * std::f64::consts::PI * (i as f64) / (m as f64);
        let x = x_max * theta.cos();
        let y = y_of(x);
        pts.push((x, if theta.sin() >= 0.0 { y } else { -y }));
    }
    pts.push(pts[0]);
    Ok(pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p05() -> ProblemParams {
        ProblemParams::new(0.5).unwrap()
    }

    #[test]
    fn rejects_exponent_outside_open_interval() {
        assert!(ProblemParams::new(0.0).is_err());
        assert!(ProblemParams::new(1.0).is_err());
        assert!(ProblemParams::new(-0.5).is_err());
        assert!(ProblemParams::new(f64::NAN).is_err());
        assert!(ProblemParams::new(0.5).is_ok());
    }

    #[test]
    fn reaction_zeros_and_minimum() {
        let k = p05();
        assert_eq!(k.reaction(0.0), 0.0);
        assert_relative_eq!(k.reaction(0.25), 0.0, epsilon = 1e-15);
        assert_relative_eq!(k.reaction(0.0625), -0.125, epsilon = 1e-15);
    }

    #[test]
    fn reaction_is_antisymmetric() {
        let k = p05();
        for &x in &[0.01, 0.1, 0.25, 0.5, 1.7] {
            assert_relative_eq!(k.reaction(-x), -k.reaction(x), epsilon = 1e-15);
        }
    }

    #[test]
    fn lyapunov_pinned_values() {
        let k = p05();
        assert_eq!(k.lyapunov(0.0, 0.0), 0.0);
        assert_relative_eq!(k.lyapunov(0.25, 0.0), k.c_star(), epsilon = 1e-16);
        assert_relative_eq!(k.lyapunov(0.25, 0.0), 1.0 / 48.0, epsilon = 1e-16);
        assert_relative_eq!(k.lyapunov(0.0, 0.2), 0.02, epsilon = 1e-16);
        assert_relative_eq!(k.lyapunov(0.1, 0.0), 0.011081851067789195, epsilon = 1e-15);
        assert_relative_eq!(k.lyapunov(0.0, 0.15), 0.01125, epsilon = 1e-16);
    }

    #[test]
    fn derived_constants_p05() {
        let d = p05().derived_constants();
        assert_relative_eq!(d.x_eq, 0.25, epsilon = 1e-16);
        assert_relative_eq!(d.c_star, 0.020833333333333332, epsilon = 1e-16);
        assert_relative_eq!(d.lambda_min, 0.0625, epsilon = 1e-16);
        assert_relative_eq!(d.m_h, -0.125, epsilon = 1e-15);
    }

    #[test]
    fn x_eq_extreme_exponent() {
        let k = ProblemParams::new(0.9).unwrap();
        assert_relative_eq!(k.x_eq(), 1e-10, max_relative = 1e-12);
    }

    // Independent check of the closed forms: H vanishes at x_eq, and the
    // claimed minimizer beats a fine grid scan of H over [0, x_eq].
    #[test]
    fn reaction_grid_scan_confirms_minimizer() {
        for &p in &[0.1, 0.25, 0.5, 0.75, 0.9] {
            let k = ProblemParams::new(p).unwrap();
            let x_eq = k.x_eq();
            assert!(k.reaction(x_eq).abs() < 1e-14, "H(x_eq) != 0 at p = {p}");

            let n = 200_000;
            let mut best_x = 0.0;
            let mut best_h = f64::INFINITY;
            for i in 0..=n {
                let x = x_eq * (i as f64) / (n as f64);
                let h = k.reaction(x);
                if h < best_h {
                    best_h = h;
                    best_x = x;
                }
            }
            let lm = k.lambda_min();
            assert!(
                (best_x - lm).abs() <= 2.0 * x_eq / (n as f64),
                "grid minimizer {best_x} vs closed form {lm} at p = {p}"
            );
            assert!((best_h - k.m_h()).abs() < 1e-10, "grid min {best_h} vs m_H {} at p = {p}", k.m_h());
            assert!(k.m_h() < 0.0);
            // Stationarity of the closed form.
            assert!(k.reaction_deriv(lm).abs() < 1e-12);
        }
    }

    #[test]
    fn rhs_pinned_values() {
        let k = p05();
        assert_eq!(k.rhs(3.0, 0.0, 0.0), (0.0, 0.0));
        let (dx, dy) = k.rhs(7.0, 0.25, 0.0);
        assert_eq!(dx, 0.0);
        assert!(dy.abs() < 1e-15);
        let (dx, dy) = k.rhs(2.0, 0.0, 1.0);
        assert_eq!(dx, 1.0);
        assert_relative_eq!(dy, -1.0, epsilon = 1e-15);
    }

    // Exact dissipation identity: grad V . Q = -eta y^2 / 2.
    #[test]
    fn dissipation_identity_on_grid() {
        for &p in &[0.2, 0.5, 0.8] {
            let k = ProblemParams::new(p).unwrap();
            for i in -6..=6 {
                for j in -6..=6 {
                    for &eta in &[-3.0, -0.5, 0.0, 1.0, 4.0] {
                        let x = 0.05 * (i as f64);
                        let y = 0.05 * (j as f64);
                        let (fx, fy) = k.rhs(eta, x, y);
                        // grad V = (-H(x), y)
                        let dot = -k.reaction(x) * fx + y * fy;
                        let expect = -0.5 * eta * y * y;
                        let scale = 1f64.max(expect.abs());
                        assert!(
                            (dot - expect).abs() <= 1e-12 * scale,
                            "identity off at p={p} x={x} y={y} eta={eta}: {dot} vs {expect}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn membership_pinned_cases() {
        let k = p05();
        let c = k.c_star();
        assert_eq!(level_membership(&k, 0.0, 0.0, c, 1e-9).unwrap(), LevelMembership::Inside);
        assert_eq!(level_membership(&k, 0.25, 0.0, c, 1e-9).unwrap(), LevelMembership::On);
        assert_eq!(level_membership(&k, 0.0, 0.25, c, 1e-9).unwrap(), LevelMembership::Outside);
        // Unbounded branch: small V but |x| beyond x_eq.
        assert_eq!(level_membership(&k, 0.3, 0.0, 0.02, 1e-9).unwrap(), LevelMembership::Outside);
        assert!(level_membership(&k, 0.0, 0.0, -0.01, 1e-9).is_err());
        assert!(level_membership(&k, 0.0, 0.0, c * 1.5, 1e-9).is_err());
    }

    #[test]
    fn level_curve_critical_passes_through_equilibria() {
        let k = p05();
        let pts = level_curve_sample(&k, k.c_star(), 257).unwrap();
        assert_eq!(pts.len(), 257);
        // Position accuracy is the sampler's bisection width (~1e-9), not
        // machine precision: grad V vanishes at the equilibria.
        let (x0, y0) = pts[0];
        assert_relative_eq!(x0, 0.25, epsilon = 1e-8);
        assert_relative_eq!(y0, 0.0, epsilon = 1e-8);
        // Leftmost sampled point reaches -x_eq at the half-way angle.
        let xmin = pts.iter().map(|&(x, _)| x).fold(f64::INFINITY, f64::min);
        assert_relative_eq!(xmin, -0.25, epsilon = 1e-8);
        // Closure.
        assert_eq!(pts[0], *pts.last().unwrap());
        // Every sample lies on the curve.
        for &(x, y) in &pts {
            assert!((k.lyapunov(x, y) - k.c_star()).abs() < 1e-10);
        }
    }

    #[test]
    fn level_curve_half_critical_y_axis_crossings() {
        let k = p05();
        let c = k.c_star() / 2.0;
        let pts = level_curve_sample(&k, c, 1001).unwrap();
        // Crossing of the y-axis satisfies V(0, y) = y^2/2 = c.
        let target = (2.0 * c).sqrt();
        assert_relative_eq!(target, 0.14433756729740643, epsilon = 1e-15);
        let best = pts
            .iter()
            .filter(|&&(_, y)| y > 0.0)
            .map(|&(x, y)| (x.abs(), y))
            .fold((f64::INFINITY, 0.0), |acc, cur| if cur.0 < acc.0 { cur } else { acc });
        assert!((best.1 - target).abs() < 1e-4, "y-axis crossing {} vs {target}", best.1);
    }

    #[test]
    fn level_curve_degenerate_and_invalid() {
        let k = p05();
        assert_eq!(level_curve_sample(&k, 0.0, 64).unwrap(), vec![(0.0, 0.0)]);
        assert!(level_curve_sample(&k, -1e-3, 64).is_err());
        assert!(level_curve_sample(&k, k.c_star() + 1e-3, 64).is_err());
        assert!(level_curve_sample(&k, k.c_star() / 3.0, 4).is_err());
    }

    // The positive root of V(x, 0) = 0 away from the origin has the closed
    // form (2(1-p)/(1+p))^{1/(1-p)}; it sits outside the bounded component.
    #[test]
    fn axis_zero_crossing_closed_form() {
        for &p in &[0.3, 0.5, 0.7] {
            let k = ProblemParams::new(p).unwrap();
            let x0 = (2.0 * (1.0 - p) / (1.0 + p)).powf(1.0 / (1.0 - p));
            assert!(k.lyapunov(x0, 0.0).abs() < 1e-15, "V(x0,0) != 0 at p = {p}");
            assert!(x0 > k.x_eq());
        }
        assert_relative_eq!(
            (2.0 * 0.5 / 1.5f64).powf(2.0),
            4.0 / 9.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn c_star_consistent_with_lyapunov_at_equilibrium() {
        for i in 1..20 {
            let p = i as f64 / 20.0;
            let k = ProblemParams::new(p).unwrap();
            let scale = k.c_star().abs().max(1e-300);
            assert!(
                (k.lyapunov(k.x_eq(), 0.0) - k.c_star()).abs() <= 1e-12 * scale,
                "c* mismatch at p = {p}"
            );
        }
    }
}
