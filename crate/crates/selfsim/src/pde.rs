//! From phase-plane trajectories to space-time solutions
//! u(x, t) = t^{1/(1-p)} w(x / sqrt(t)) and back: profile evaluation with
//! Gaussian tail models, finite-difference residuals of the reaction-
//! diffusion equation, and a method-of-lines evolution check.

use serde::Serialize;

use crate::error::{Result, SimError};
use crate::heteroclinic::{self, HeteroclinicResult};
use crate::homoclinic::{DecayFit, HomoclinicResult};
use crate::integrator::Sample;
use crate::kernels::{signed_pow, ProblemParams};

/// Behaviour of the profile beyond the computed eta range.
#[derive(Debug, Clone, Copy)]
enum TailModel {
    /// w ~ sign * A |eta|^-k exp(-eta^2/4), the oscillatory collapse.
    Oscillatory { a_inf: f64, exponent: f64, sign_pos: f64, sign_neg: f64 },
    /// w ~ sign(eta) (x_eq - A |eta|^-3 exp(-eta^2/4)), the front approach.
    Front { a_inf: f64 },
    /// w identically equal to x_eq (spatially homogeneous solution).
    Uniform,
}

#[derive(Debug, Clone)]
pub struct SelfSimilarProfile {
    params: ProblemParams,
    /// Anchor samples in strictly ascending eta; empty for the uniform profile.
    samples: Vec<Sample>,
    tail: TailModel,
}

/// Space-time shift (x0, tau): u(x, t) = (t - tau)^{1/(1-p)} w((x - x0)/sqrt(t - tau))
/// for t > tau and 0 at or before tau.
#[derive(Debug, Clone, Copy, Default)]
pub struct Shift {
    pub x0: f64,
    pub tau: f64,
}

impl Shift {
    pub const NONE: Shift = Shift { x0: 0.0, tau: 0.0 };
}

impl SelfSimilarProfile {
    pub fn oscillatory(params: &ProblemParams, run: &HomoclinicResult, fit: &DecayFit) -> Self {
        let samples = run.merged_samples();
        let sign_of = |x: f64| if x < 0.0 { -1.0 } else { 1.0 };
        let tail = TailModel::Oscillatory {
            a_inf: fit.a_inf,
            exponent: 1.0 + 2.0 / (1.0 - params.p),
            sign_pos: sign_of(samples.last().unwrap().x),
            sign_neg: sign_of(samples.first().unwrap().x),
        };
        SelfSimilarProfile { params: *params, samples, tail }
    }

    pub fn front(params: &ProblemParams, run: &HeteroclinicResult) -> Result<Self> {
        if run.p != params.p {
            return Err(SimError::InvalidParameter(format!(
                "profile exponent mismatch: {} vs {}",
                run.p, params.p
            )));
        }
        let tail = run.tail.ok_or_else(|| {
            SimError::FitFailure("front profile needs a saddle-approach fit".into())
        })?;
        Ok(SelfSimilarProfile {
            params: *params,
            samples: heteroclinic::extend_by_reflection(&run.trajectory),
            tail: TailModel::Front { a_inf: tail.a_inf },
        })
    }

    /// The spatially homogeneous solution u = ((1-p) t)^{1/(1-p)}, i.e.
    /// w identically x_eq.
    pub fn uniform(params: &ProblemParams) -> Self {
        SelfSimilarProfile { params: *params, samples: Vec::new(), tail: TailModel::Uniform }
    }

    pub fn params(&self) -> &ProblemParams {
        &self.params
    }

    pub fn eta_span(&self) -> Option<(f64, f64)> {
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) => Some((a.eta, b.eta)),
            _ => None,
        }
    }

    /// (w, w') at arbitrary eta. Inside the anchor range the value is
    /// re-integrated from the nearest anchor so that finite differences of
    /// the result see a genuine solution of the profile equation rather
    /// than interpolation wiggle; outside, the tail model applies.
    pub fn value_and_slope(&self, eta: f64) -> (f64, f64) {
        if let TailModel::Uniform = self.tail {
            return (self.params.x_eq(), 0.0);
        }
        let (first, last) = self.eta_span().expect("non-uniform profile has anchors");
        if eta >= first && eta <= last {
            let idx = match self
                .samples
                .binary_search_by(|s| s.eta.partial_cmp(&eta).unwrap())
            {
                Ok(i) => i,
                Err(i) => {
                    // nearest of the two bracketing anchors
                    if i == 0 {
                        0
                    } else if i >= self.samples.len() {
                        self.samples.len() - 1
                    } else if (self.samples[i].eta - eta).abs()
                        < (eta - self.samples[i - 1].eta).abs()
                    {
                        i
                    } else {
                        i - 1
                    }
                }
            };
            return self.refine_from(idx, eta);
        }
        self.tail_value(eta)
    }

    /// Classical fourth-order steps from an anchor to the query point.
    fn refine_from(&self, idx: usize, eta: f64) -> (f64, f64) {
        let s = &self.samples[idx];
        let span = eta - s.eta;
        let n = ((span.abs() / 0.004).ceil() as usize).max(1);
        let h = span / n as f64;
        let (mut x, mut y) = (s.x, s.y);
        let mut e = s.eta;
        for _ in 0..n {
            let (k1x, k1y) = self.params.rhs(e, x, y);
            let (k2x, k2y) = self.params.rhs(e + h / 2.0, x + h / 2.0 * k1x, y + h / 2.0 * k1y);
            let (k3x, k3y) = self.params.rhs(e + h / 2.0, x + h / 2.0 * k2x, y + h / 2.0 * k2y);
            let (k4x, k4y) = self.params.rhs(e + h, x + h * k3x, y + h * k3y);
            x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
            y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
            e += h;
        }
        (x, y)
    }

    fn tail_value(&self, eta: f64) -> (f64, f64) {
        let z = eta.abs();
        match self.tail {
            TailModel::Uniform => (self.params.x_eq(), 0.0),
            TailModel::Oscillatory { a_inf, exponent, sign_pos, sign_neg } => {
                let m = a_inf * z.powf(-exponent) * (-z * z / 4.0).exp();
                let dm = m * (-exponent / z - z / 2.0);
                if eta >= 0.0 {
                    (sign_pos * m, sign_pos * dm)
                } else {
                    (sign_neg * m, -sign_neg * dm)
                }
            }
            TailModel::Front { a_inf } => {
                let r = a_inf * z.powf(-3.0) * (-z * z / 4.0).exp();
                let dr = r * (3.0 / z + z / 2.0);
                let s = if eta >= 0.0 { 1.0 } else { -1.0 };
                (s * (self.params.x_eq() - r), dr)
            }
        }
    }

    /// Zero crossings of w estimated from the anchor samples.
    pub fn zero_crossings(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for w in self.samples.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            if a.x == 0.0 {
                out.push(a.eta);
            } else if a.x * b.x < 0.0 {
                out.push(a.eta - a.x * (b.eta - a.eta) / (b.x - a.x));
            }
        }
        if let Some(s) = self.samples.last() {
            if s.x == 0.0 {
                out.push(s.eta);
            }
        }
        out
    }

    pub fn u(&self, x: f64, t: f64, shift: Shift) -> f64 {
        let s = t - shift.tau;
        if s <= 0.0 {
            return 0.0;
        }
        let a = 1.0 / (1.0 - self.params.p);
        let (w, _) = self.value_and_slope((x - shift.x0) / s.sqrt());
        s.powf(a) * w
    }

    pub fn u_x(&self, x: f64, t: f64, shift: Shift) -> f64 {
        let s = t - shift.tau;
        if s <= 0.0 {
            return 0.0;
        }
        let a = 1.0 / (1.0 - self.params.p);
        let (_, wp) = self.value_and_slope((x - shift.x0) / s.sqrt());
        s.powf(a - 0.5) * wp
    }

    pub fn u_t(&self, x: f64, t: f64, shift: Shift) -> f64 {
        let s = t - shift.tau;
        if s <= 0.0 {
            return 0.0;
        }
        let a = 1.0 / (1.0 - self.params.p);
        let eta = (x - shift.x0) / s.sqrt();
        let (w, wp) = self.value_and_slope(eta);
        s.powf(a - 1.0) * (a * w - eta / 2.0 * wp)
    }
}

/// Uniform spatial grid on [-l, l] with an evolution window [t0, t1].
#[derive(Debug, Clone, Copy)]
pub struct Grid {
    pub l: f64,
    pub nx: usize,
    pub t0: f64,
    pub t1: f64,
    /// dt = cfl * dx^2; the fourth-order stepper is stable up to 0.5.
    pub cfl: f64,
}

impl Grid {
    pub fn validate(&self) -> Result<()> {
        validate_space(self.l, self.nx)?;
        if !(self.t0 > 0.0 && self.t1 > self.t0) {
            return Err(SimError::InvalidParameter(format!(
                "need 0 < t0 < t1, got [{}, {}]",
                self.t0, self.t1
            )));
        }
        if !(self.cfl > 0.0 && self.cfl <= 0.5) {
            return Err(SimError::InvalidParameter(format!("cfl {} outside (0, 0.5]", self.cfl)));
        }
        if self.l + 1e-9 < 12.0 * self.t1.sqrt() {
            return Err(SimError::InvalidParameter(format!(
                "half-width {} too small to localize up to t = {}; need at least {}",
                self.l,
                self.t1,
                12.0 * self.t1.sqrt()
            )));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.l / (self.nx - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        -self.l + self.dx() * i as f64
    }
}

fn validate_space(l: f64, nx: usize) -> Result<()> {
    if !(l > 0.0 && l.is_finite()) {
        return Err(SimError::InvalidParameter(format!("half-width must be positive, got {l}")));
    }
    if nx < 65 || nx % 2 == 0 {
        return Err(SimError::InvalidParameter(format!("nx must be odd and at least 65, got {nx}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub nx: usize,
    pub dx: f64,
    /// Max |u_t - u_xx - u|u|^{p-1}| over all interior points.
    pub max_abs: f64,
    /// Same, excluding windows of half-width 0.25 in eta around profile
    /// zero crossings, where u has limited smoothness and second
    /// differences cannot converge at full order.
    pub max_smooth: f64,
    pub l2: f64,
    pub crossings: Vec<f64>,
    pub n_excluded: usize,
}

/// Finite-difference residual of the reaction-diffusion equation on the
/// exact self-similar field at time t: centered second difference in space,
/// centered difference in time with dt_fd = dx.
pub fn pde_residual(
    profile: &SelfSimilarProfile,
    l: f64,
    nx: usize,
    t: f64,
) -> Result<ResidualReport> {
    validate_space(l, nx)?;
    let dx = 2.0 * l / (nx - 1) as f64;
    if !(t > dx) {
        return Err(SimError::InvalidParameter(format!(
            "time {t} too small for centered differencing with dt_fd = {dx}"
        )));
    }
    let p = profile.params().p;
    let eval_row = |tt: f64| -> Vec<f64> {
        (0..nx).map(|i| profile.u(-l + dx * i as f64, tt, Shift::NONE)).collect()
    };
    let (um, u0, up) = (eval_row(t - dx), eval_row(t), eval_row(t + dx));

    let crossings = profile.zero_crossings();
    let excluded = |x: f64| {
        let eta = x / t.sqrt();
        crossings.iter().any(|&c| (eta - c).abs() <= 0.25)
    };

    let mut max_abs = 0.0f64;
    let mut max_smooth = 0.0f64;
    let mut l2 = 0.0f64;
    let mut n_excluded = 0usize;
    for i in 1..nx - 1 {
        let u_t = (up[i] - um[i]) / (2.0 * dx);
        let u_xx = (u0[i - 1] - 2.0 * u0[i] + u0[i + 1]) / (dx * dx);
        let r = (u_t - u_xx - signed_pow(u0[i], p)).abs();
        max_abs = max_abs.max(r);
        l2 += r * r * dx;
        if excluded(-l + dx * i as f64) {
            n_excluded += 1;
        } else {
            max_smooth = max_smooth.max(r);
        }
    }
    Ok(ResidualReport { nx, dx, max_abs, max_smooth, l2: l2.sqrt(), crossings, n_excluded })
}

/// Max gap between the centered first difference and the analytic u_x.
pub fn spatial_derivative_gap(
    profile: &SelfSimilarProfile,
    l: f64,
    nx: usize,
    t: f64,
) -> Result<f64> {
    validate_space(l, nx)?;
    let dx = 2.0 * l / (nx - 1) as f64;
    let row: Vec<f64> = (0..nx).map(|i| profile.u(-l + dx * i as f64, t, Shift::NONE)).collect();
    let mut worst = 0.0f64;
    for i in 1..nx - 1 {
        let x = -l + dx * i as f64;
        let d = (row[i + 1] - row[i - 1]) / (2.0 * dx);
        worst = worst.max((d - profile.u_x(x, t, Shift::NONE)).abs());
    }
    Ok(worst)
}

/// Boundary handling for the evolution: hard zero (localized profiles) or
/// the self-similar values themselves (front and homogeneous profiles).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcKind {
    Zero,
    SelfSimilar,
}

#[derive(Debug, Clone)]
pub struct EvolveResult {
    pub t: f64,
    /// Field values at t on the full grid, boundaries included.
    pub values: Vec<f64>,
    pub steps: usize,
    /// Every intermediate state stayed within the comparison envelope
    /// -((1-p)t)^{1/(1-p)} - 1e-8 <= u <= ((1-p)t)^{1/(1-p)} + 1e-8.
    pub ordering_ok: bool,
    pub max_ordering_excess: f64,
    pub min_u: f64,
    pub max_u: f64,
}

/// March u_t = u_xx + u|u|^{p-1} from the profile's field at t0 to t1 with
/// the classical fourth-order stepper on the method-of-lines system,
/// dt = cfl dx^2.
pub fn evolve(profile: &SelfSimilarProfile, grid: &Grid, bc: BcKind) -> Result<EvolveResult> {
    grid.validate()?;
    let p = profile.params().p;
    let a = 1.0 / (1.0 - p);
    let nx = grid.nx;
    let dx = grid.dx();
    let dt0 = grid.cfl * dx * dx;
    let mut u: Vec<f64> = (0..nx).map(|i| profile.u(grid.x(i), grid.t0, Shift::NONE)).collect();

    let boundary = |t: f64| -> (f64, f64) {
        match bc {
            BcKind::Zero => (0.0, 0.0),
            BcKind::SelfSimilar => {
                (profile.u(-grid.l, t, Shift::NONE), profile.u(grid.l, t, Shift::NONE))
            }
        }
    };

    // The boundary values ride along as state advanced by their exact time
    // derivative. Evaluating the Dirichlet data directly at stage times
    // instead would cost the stepper two orders: stage values of an RK
    // scheme are low-order predictions, and mixing them with exact data
    // injects O(dt^2) defects into the Laplacian next to the wall.
    let rhs = |t: f64, v: &[f64], out: &mut [f64]| {
        let (rl, rr) = match bc {
            BcKind::Zero => (0.0, 0.0),
            BcKind::SelfSimilar => {
                (profile.u_t(-grid.l, t, Shift::NONE), profile.u_t(grid.l, t, Shift::NONE))
            }
        };
        out[0] = rl;
        out[nx - 1] = rr;
        for i in 1..nx - 1 {
            out[i] = (v[i - 1] - 2.0 * v[i] + v[i + 1]) / (dx * dx) + signed_pow(v[i], p);
        }
    };

    let mut k1 = vec![0.0; nx];
    let mut k2 = vec![0.0; nx];
    let mut k3 = vec![0.0; nx];
    let mut k4 = vec![0.0; nx];
    let mut tmp = vec![0.0; nx];

    let mut t = grid.t0;
    let mut steps = 0usize;
    let mut max_excess = 0.0f64;
    while t < grid.t1 - 1e-14 * grid.t1 {
        let dt = dt0.min(grid.t1 - t);
        rhs(t, &u, &mut k1);
        for i in 0..nx {
            tmp[i] = u[i] + 0.5 * dt * k1[i];
        }
        rhs(t + 0.5 * dt, &tmp, &mut k2);
        for i in 0..nx {
            tmp[i] = u[i] + 0.5 * dt * k2[i];
        }
        rhs(t + 0.5 * dt, &tmp, &mut k3);
        for i in 0..nx {
            tmp[i] = u[i] + dt * k3[i];
        }
        rhs(t + dt, &tmp, &mut k4);
        for i in 0..nx {
            u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t += dt;
        steps += 1;
        // Re-pin the walls to the exact data so their own stepping error
        // cannot accumulate.
        let (bl, br) = boundary(t);
        u[0] = bl;
        u[nx - 1] = br;

        let cap = ((1.0 - p) * t).powf(a);
        for &v in &u {
            if !v.is_finite() {
                return Err(SimError::NonFiniteState { eta: t });
            }
            max_excess = max_excess.max(v - cap).max(-cap - v);
        }
    }

    let (mut min_u, mut max_u) = (f64::INFINITY, f64::NEG_INFINITY);
    for &v in &u {
        min_u = min_u.min(v);
        max_u = max_u.max(v);
    }
    Ok(EvolveResult {
        t,
        values: u,
        steps,
        ordering_ok: max_excess <= 1e-8,
        max_ordering_excess: max_excess,
        min_u,
        max_u,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Norms {
    pub sup_abs: f64,
    /// sup |difference| / sup |reference|.
    pub sup_rel: f64,
    pub l2: f64,
}

/// Compare a field on the grid against the profile's exact values at time t.
pub fn compare_self_similar(
    profile: &SelfSimilarProfile,
    grid: &Grid,
    values: &[f64],
    t: f64,
) -> Norms {
    let mut sup_abs = 0.0f64;
    let mut sup_ref = 0.0f64;
    let mut l2 = 0.0f64;
    for (i, &v) in values.iter().enumerate() {
        let exact = profile.u(grid.x(i), t, Shift::NONE);
        sup_abs = sup_abs.max((v - exact).abs());
        sup_ref = sup_ref.max(exact.abs());
        l2 += (v - exact) * (v - exact) * grid.dx();
    }
    Norms { sup_abs, sup_rel: sup_abs / sup_ref, l2: l2.sqrt() }
}
