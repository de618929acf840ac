//! Adaptive embedded Runge-Kutta engine (Dormand-Prince 5(4)) for
//! two-dimensional first-order systems, with cubic Hermite dense output
//! and event localisation by bisection on accepted steps.
//!
//! The engine is deliberately model-agnostic; the phase-plane wrapper and
//! the oscillator solver instantiate it with their own right-hand sides.

use crate::error::{Result, SimError};

pub type State = [f64; 2];

/// Crossing direction an event is armed for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Rising,
    Falling,
    Any,
}

/// Scalar event g(t, state). A sign change of the requested direction over
/// an accepted step is refined to |interval| below `event_tol` by bisection
/// on the dense output.
pub struct EventSpec<'a> {
    pub name: &'a str,
    pub g: Box<dyn Fn(f64, State) -> f64 + 'a>,
    pub direction: Direction,
    pub terminal: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EventHit {
    pub name: String,
    pub t: f64,
    pub state: State,
}

#[derive(Debug, Clone)]
pub struct RkConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub h_init: f64,
    pub h_min: f64,
    pub h_max: f64,
    /// Refinement target for the event time bracket.
    pub event_tol: f64,
    /// Minimum spacing between recorded samples; 0 records every accepted
    /// step. Event hits and endpoints are always recorded.
    pub min_record_spacing: f64,
}

impl Default for RkConfig {
    fn default() -> Self {
        RkConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            h_init: 1e-3,
            h_min: 1e-12,
            h_max: 0.1,
            event_tol: 1e-10,
            min_record_spacing: 0.0,
        }
    }
}

impl RkConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(SimError::InvalidParameter(msg));
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return bad(format!("tolerances must be positive: rel {} abs {}", self.rel_tol, self.abs_tol));
        }
        if !(self.h_min > 0.0 && self.h_max > self.h_min) {
            return bad(format!("need 0 < h_min < h_max, got {} and {}", self.h_min, self.h_max));
        }
        if !(self.h_init > 0.0) {
            return bad(format!("h_init must be positive, got {}", self.h_init));
        }
        if !(self.event_tol > 0.0) {
            return bad(format!("event_tol must be positive, got {}", self.event_tol));
        }
        if self.min_record_spacing < 0.0 {
            return bad(format!("min_record_spacing must be >= 0, got {}", self.min_record_spacing));
        }
        Ok(())
    }
}

/// One recorded point with its derivative, enough for Hermite interpolation.
#[derive(Debug, Clone, Copy)]
pub struct RawSample {
    pub t: f64,
    pub state: State,
    pub deriv: State,
}

#[derive(Debug, Clone)]
pub struct RawTrajectory {
    pub samples: Vec<RawSample>,
    pub events: Vec<EventHit>,
    /// True when integration ended on a terminal event rather than at t_end.
    pub terminated_by_event: bool,
    pub steps_accepted: usize,
    pub steps_rejected: usize,
}

impl RawTrajectory {
    pub fn last(&self) -> &RawSample {
        self.samples.last().expect("trajectory has at least the initial sample")
    }

    /// Cubic Hermite interpolation between the recorded samples bracketing t.
    pub fn interpolate(&self, t: f64) -> State {
        let s = &self.samples;
        debug_assert!(s.len() >= 1);
        if s.len() == 1 {
            return s[0].state;
        }
        let ascending = s[s.len() - 1].t >= s[0].t;
        // Index of the left edge of the bracketing interval.
        let idx = match s.binary_search_by(|smp| {
            if ascending {
                smp.t.partial_cmp(&t).unwrap()
            } else {
                t.partial_cmp(&smp.t).unwrap()
            }
        }) {
            Ok(i) => return s[i].state,
            Err(i) => i.clamp(1, s.len() - 1) - 1,
        };
        hermite(&s[idx], &s[idx + 1], t)
    }
}

/// Cubic Hermite value at t between two samples.
pub fn hermite(a: &RawSample, b: &RawSample, t: f64) -> State {
    let h = b.t - a.t;
    if h == 0.0 {
        return a.state;
    }
    let s = (t - a.t) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    let mut out = [0.0; 2];
    for k in 0..2 {
        out[k] = h00 * a.state[k] + h10 * h * a.deriv[k] + h01 * b.state[k] + h11 * h * b.deriv[k];
    }
    out
}

// Dormand-Prince 5(4) tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Difference b - b_hat for the embedded 4th-order error estimate.
const E1: f64 = B1 - 5179.0 / 57600.0;
const E3: f64 = B3 - 7571.0 / 16695.0;
const E4: f64 = B4 - 393.0 / 640.0;
const E5: f64 = B5 - -92097.0 / 339200.0;
const E6: f64 = B6 - 187.0 / 2100.0;
const E7: f64 = -1.0 / 40.0;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

#[inline]
fn axpy(state: &State, h: f64, coeffs: &[(f64, &State)]) -> State {
    let mut out = *state;
    for k in 0..2 {
        let mut acc = 0.0;
        for (c, v) in coeffs {
            acc += c * v[k];
        }
        out[k] += h * acc;
    }
    out
}

/// Integrate `rhs` from (t0, y0) to t_end (either direction of t is allowed;
/// internally t advances toward t_end). Returns the recorded trajectory.
pub fn integrate<F>(
    rhs: F,
    t0: f64,
    y0: State,
    t_end: f64,
    config: &RkConfig,
    events: &mut [EventSpec],
) -> Result<RawTrajectory>
where
    F: Fn(f64, State) -> State,
{
    config.validate()?;
    if !(t_end != t0) {
        return Err(SimError::InvalidParameter(format!(
            "empty integration interval at t = {t0}"
        )));
    }
    let dir = (t_end - t0).signum();

    let mut t = t0;
    let mut y = y0;
    let mut f = rhs(t, y);
    check_finite(t, &y)?;

    let mut traj = RawTrajectory {
        samples: vec![RawSample { t, state: y, deriv: f }],
        events: Vec::new(),
        terminated_by_event: false,
        steps_accepted: 0,
        steps_rejected: 0,
    };
    let mut g_prev: Vec<f64> = events.iter().map(|e| (e.g)(t, y)).collect();
    let mut last_recorded_t = t;

    let mut h = config.h_init.min(config.h_max).min((t_end - t0).abs());

    'outer: while (t_end - t) * dir > 0.0 {
        h = h.min((t_end - t).abs());
        let hs = h * dir;

        let k1 = f;
        let k2 = rhs(t + C2 * hs, axpy(&y, hs, &[(A21, &k1)]));
        let k3 = rhs(t + C3 * hs, axpy(&y, hs, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(t + C4 * hs, axpy(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = rhs(
            t + C5 * hs,
            axpy(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = rhs(
            t + hs,
            axpy(&y, hs, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y_new = axpy(&y, hs, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = rhs(t + hs, y_new);

        // Scaled RMS error of the embedded pair.
        let mut err = 0.0f64;
        let mut finite = y_new[0].is_finite() && y_new[1].is_finite();
        for k in 0..2 {
            let e = hs * (E1 * k1[k] + E3 * k3[k] + E4 * k4[k] + E5 * k5[k] + E6 * k6[k] + E7 * k7[k]);
            let sc = config.abs_tol + config.rel_tol * y[k].abs().max(y_new[k].abs());
            let r = e / sc;
            err += r * r;
            finite &= e.is_finite();
        }
        err = (err / 2.0).sqrt();

        if !finite || err > 1.0 {
            // Rejected step.
            traj.steps_rejected += 1;
            let fac = if finite { (0.9 * err.powf(-0.2)).max(0.2) } else { 0.2 };
            h *= fac;
            if h < config.h_min {
                return Err(SimError::StepUnderflow { eta: t, x: y[0], y: y[1] });
            }
            continue;
        }

        let t_new = t + hs;
        check_finite(t_new, &y_new)?;
        traj.steps_accepted += 1;

        // Events over [t, t_new] using Hermite dense output.
        let a = RawSample { t, state: y, deriv: k1 };
        let b = RawSample { t: t_new, state: y_new, deriv: k7 };
        let mut terminal_hit: Option<EventHit> = None;
        for (ei, ev) in events.iter().enumerate() {
            let g0 = g_prev[ei];
            let g1 = (ev.g)(t_new, y_new);
            let crossed = match ev.direction {
                Direction::Rising => g0 < 0.0 && g1 >= 0.0,
                Direction::Falling => g0 > 0.0 && g1 <= 0.0,
                Direction::Any => (g0 < 0.0 && g1 >= 0.0) || (g0 > 0.0 && g1 <= 0.0),
            };
            g_prev[ei] = g1;
            if !crossed {
                continue;
            }
            let hit = refine_event(&a, &b, &ev.g, g0, config.event_tol);
            let hit = EventHit { name: ev.name.to_string(), t: hit.0, state: hit.1 };
            if ev.terminal {
                // Keep the earliest terminal hit in integration direction.
                let earlier = terminal_hit
                    .as_ref()
                    .map(|cur| (hit.t - cur.t) * dir < 0.0)
                    .unwrap_or(true);
                if earlier {
                    terminal_hit = Some(hit);
                } else {
                    traj.events.push(hit);
                }
            } else {
                traj.events.push(hit);
            }
        }

        if let Some(hit) = terminal_hit {
            traj.events.push(hit.clone());
            let deriv = rhs(hit.t, hit.state);
            traj.samples.push(RawSample { t: hit.t, state: hit.state, deriv });
            traj.terminated_by_event = true;
            break 'outer;
        }

        t = t_new;
        y = y_new;
        f = k7;

        let record = (t - last_recorded_t).abs() >= config.min_record_spacing
            || (t_end - t) * dir <= 0.0;
        if record {
            traj.samples.push(RawSample { t, state: y, deriv: f });
            last_recorded_t = t;
        }

        let fac = (0.9 * err.max(1e-10).powf(-0.2)).clamp(0.2, 5.0);
        h = (h * fac).min(config.h_max);
        if h < config.h_min {
            return Err(SimError::StepUnderflow { eta: t, x: y[0], y: y[1] });
        }
    }

    // Make sure the endpoint is recorded even with sparse recording.
    if !traj.terminated_by_event {
        let lt = traj.last().t;
        if (lt - t).abs() > 0.0 {
            traj.samples.push(RawSample { t, state: y, deriv: f });
        }
    }
    Ok(traj)
}

fn check_finite(t: f64, y: &State) -> Result<()> {
    if y[0].is_finite() && y[1].is_finite() && t.is_finite() {
        Ok(())
    } else {
        Err(SimError::NonFiniteState { eta: t })
    }
}

/// Bisect the event time inside an accepted step. `g0` is the event value at
/// the left edge; the sign convention makes the bracket [a.t, b.t] valid for
/// either crossing direction.
fn refine_event(
    a: &RawSample,
    b: &RawSample,
    g: &(dyn Fn(f64, State) -> f64 + '_),
    g0: f64,
    event_tol: f64,
) -> (f64, State) {
    let mut lo = a.t;
    let mut hi = b.t;
    let mut glo = g0;
    let span = (b.t - a.t).abs().max(f64::MIN_POSITIVE);
    for _ in 0..200 {
        if (hi - lo).abs() <= event_tol || (hi - lo).abs() <= 1e-16 * span {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let smid = hermite(a, b, mid);
        let gmid = g(mid, smid);
        if gmid == 0.0 {
            return (mid, smid);
        }
        if (gmid > 0.0) == (glo > 0.0) {
            lo = mid;
            glo = gmid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    (t, hermite(a, b, t))
}
