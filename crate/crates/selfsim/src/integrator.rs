//! Integration of the similarity system x' = y, y' = H(x) - eta*y/2 in
//! either direction of eta, with per-sample values of V, event support, and
//! a monotonicity audit of F(eta) = V(x(eta), y(eta)).
//!
//! Backward runs integrate in s = -eta so the stepper always marches
//! forward in its own time variable; recorded samples carry true eta.

use std::io::Write;

use crate::error::{Result, SimError};
use crate::kernels::ProblemParams;
use crate::rk::{self, EventHit, EventSpec, RawSample, RkConfig, State};

pub use crate::rk::Direction as CrossingDirection;

/// Direction of eta along the run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub h_init: f64,
    pub h_min: f64,
    pub h_max: f64,
    /// Horizon in |eta|; the run stops there unless a terminal event fires.
    pub eta_max: f64,
    pub event_tol: f64,
    /// Minimum eta spacing between recorded samples (0 = record all steps).
    pub min_record_spacing: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            h_init: 1e-3,
            h_min: 1e-12,
            h_max: 0.1,
            eta_max: 12.0,
            event_tol: 1e-10,
            min_record_spacing: 0.0,
        }
    }
}

impl IntegratorConfig {
    fn rk(&self) -> RkConfig {
        RkConfig {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            h_init: self.h_init,
            h_min: self.h_min,
            h_max: self.h_max,
            event_tol: self.event_tol,
            min_record_spacing: self.min_record_spacing,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.rk().validate()?;
        if !(self.eta_max > 0.0) {
            return Err(SimError::InvalidParameter(format!(
                "eta_max must be positive, got {}",
                self.eta_max
            )));
        }
        Ok(())
    }
}

/// Scalar event on the true phase variables. The crossing direction refers
/// to the sign change of g in integration order.
pub struct PhaseEvent<'a> {
    pub name: &'a str,
    pub g: Box<dyn Fn(f64, f64, f64) -> f64 + 'a>,
    pub direction: CrossingDirection,
    pub terminal: bool,
}

impl<'a> PhaseEvent<'a> {
    pub fn new(
        name: &'a str,
        direction: CrossingDirection,
        terminal: bool,
        g: impl Fn(f64, f64, f64) -> f64 + 'a,
    ) -> Self {
        PhaseEvent { name, g: Box::new(g), direction, terminal }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub eta: f64,
    pub x: f64,
    pub y: f64,
    pub v: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub direction: Direction,
    /// Samples in integration order: eta strictly monotone, increasing for
    /// forward runs and decreasing for backward runs.
    pub samples: Vec<Sample>,
    pub events: Vec<EventHit>,
    pub terminated_by_event: bool,
    pub steps_accepted: usize,
    pub steps_rejected: usize,
}

impl Trajectory {
    pub fn first(&self) -> &Sample {
        &self.samples[0]
    }

    pub fn terminal(&self) -> &Sample {
        self.samples.last().expect("non-empty trajectory")
    }

    /// Interpolated (x, y) at the given eta, cubic Hermite between the
    /// bracketing samples with derivatives recomputed from the system.
    pub fn sample_at(&self, params: &ProblemParams, eta: f64) -> (f64, f64) {
        let s = &self.samples;
        if s.len() == 1 {
            return (s[0].x, s[0].y);
        }
        let ascending = matches!(self.direction, Direction::Forward);
        let idx = match s.binary_search_by(|smp| {
            if ascending {
                smp.eta.partial_cmp(&eta).unwrap()
            } else {
                eta.partial_cmp(&smp.eta).unwrap()
            }
        }) {
            Ok(i) => return (s[i].x, s[i].y),
            Err(i) => i.clamp(1, s.len() - 1) - 1,
        };
        let raw = |smp: &Sample| -> RawSample {
            let (dx, dy) = params.rhs(smp.eta, smp.x, smp.y);
            RawSample { t: smp.eta, state: [smp.x, smp.y], deriv: [dx, dy] }
        };
        let out = rk::hermite(&raw(&s[idx]), &raw(&s[idx + 1]), eta);
        (out[0], out[1])
    }

    /// RFC-4180-style CSV: header row, 17 significant digits per field.
    pub fn to_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "eta,x,y,V")?;
        for s in &self.samples {
            writeln!(w, "{:.16e},{:.16e},{:.16e},{:.16e}", s.eta, s.x, s.y, s.v)?;
        }
        Ok(())
    }
}

/// Integrate from (eta0, state0) out to |eta| = config.eta_max in the given
/// direction. Terminal events stop the run early; all recorded samples carry
/// V for downstream monotonicity and containment audits.
pub fn integrate(
    params: &ProblemParams,
    eta0: f64,
    state0: (f64, f64),
    direction: Direction,
    config: &IntegratorConfig,
    events: Vec<PhaseEvent>,
) -> Result<Trajectory> {
    config.validate()?;
    let (x0, y0) = state0;
    if !(x0.is_finite() && y0.is_finite() && eta0.is_finite()) {
        return Err(SimError::NonFiniteState { eta: eta0 });
    }

    let raw = match direction {
        Direction::Forward => {
            if eta0 >= config.eta_max {
                return Err(SimError::InvalidParameter(format!(
                    "forward run needs eta0 < eta_max, got {eta0} vs {}",
                    config.eta_max
                )));
            }
            let rhs = |eta: f64, s: State| -> State {
                let (dx, dy) = params.rhs(eta, s[0], s[1]);
                [dx, dy]
            };
            let mut evs: Vec<EventSpec> = events
                .iter()
                .map(|e| EventSpec {
                    name: e.name,
                    g: Box::new(|t: f64, s: State| (e.g)(t, s[0], s[1])),
                    direction: e.direction,
                    terminal: e.terminal,
                })
                .collect();
            rk::integrate(rhs, eta0, [x0, y0], config.eta_max, &config.rk(), &mut evs)?
        }
        Direction::Backward => {
            if eta0 <= -config.eta_max {
                return Err(SimError::InvalidParameter(format!(
                    "backward run needs eta0 > -eta_max, got {eta0} vs {}",
                    -config.eta_max
                )));
            }
            // s = -eta: X' = -Y, Y' = -H(X) - s Y / 2.
            let rhs = |s_var: f64, s: State| -> State {
                let (dx, dy) = params.rhs(-s_var, s[0], s[1]);
                [-dx, -dy]
            };
            let mut evs: Vec<EventSpec> = events
                .iter()
                .map(|e| EventSpec {
                    name: e.name,
                    g: Box::new(|t: f64, s: State| (e.g)(-t, s[0], s[1])),
                    direction: e.direction,
                    terminal: e.terminal,
                })
                .collect();
            rk::integrate(rhs, -eta0, [x0, y0], config.eta_max, &config.rk(), &mut evs)?
        }
    };

    let to_eta = |t: f64| match direction {
        Direction::Forward => t,
        Direction::Backward => -t,
    };
    let samples = raw
        .samples
        .iter()
        .map(|r| {
            let eta = to_eta(r.t);
            Sample { eta, x: r.state[0], y: r.state[1], v: params.lyapunov(r.state[0], r.state[1]) }
        })
        .collect();
    let events = raw
        .events
        .into_iter()
        .map(|h| EventHit { name: h.name, t: to_eta(h.t), state: h.state })
        .collect();

    Ok(Trajectory {
        direction,
        samples,
        events,
        terminated_by_event: raw.terminated_by_event,
        steps_accepted: raw.steps_accepted,
        steps_rejected: raw.steps_rejected,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct MonotoneReport {
    pub ok: bool,
    /// Largest increase of F against the admissible direction, in V units.
    pub max_violation: f64,
}

/// F(eta) = V along the trajectory is non-increasing for eta > 0 and
/// non-decreasing for eta < 0 (dF/deta = -eta y^2 / 2). Checks every
/// consecutive sample pair against the direction dictated by the sign of
/// eta at the pair midpoint.
pub fn check_monotone_f(traj: &Trajectory, tol: f64) -> MonotoneReport {
    let mut max_violation = 0.0f64;
    for w in traj.samples.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let (lo, hi) = if a.eta <= b.eta { (a, b) } else { (b, a) };
        let mid = 0.5 * (lo.eta + hi.eta);
        let violation = if mid >= 0.0 { hi.v - lo.v } else { lo.v - hi.v };
        max_violation = max_violation.max(violation);
    }
    MonotoneReport { ok: max_violation <= tol, max_violation }
}
