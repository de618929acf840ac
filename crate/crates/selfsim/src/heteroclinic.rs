//! Shooting from (0, beta) on the y-axis toward the saddle (x_eq, 0).
//! Large beta overshoots (x reaches x_eq with speed to spare), small beta
//! turns back (y reaches zero inside the strip); the connecting value is
//! pinned by bisection between rigorous starting bounds.

use serde::Serialize;

use crate::error::{Result, SimError};
use crate::fit;
use crate::integrator::{
    self, CrossingDirection, Direction, IntegratorConfig, PhaseEvent, Sample, Trajectory,
};
use crate::kernels::ProblemParams;

/// Horizon up to which the slope sandwich beta/2 <= y <= beta and
/// beta eta/2 <= x <= beta eta holds for a shot from (0, beta):
/// min over the momentum bound and the reach bound x_eq / beta.
pub fn eta_star(params: &ProblemParams, beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(SimError::InvalidParameter(format!("beta must be positive, got {beta}")));
    }
    let m = params.m_h(); // most negative value of H, m < 0
    let momentum = (2.0 / beta) * (m + (m * m + beta * beta / 2.0).sqrt());
    Ok(momentum.min(params.x_eq() / beta))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ShotOutcome {
    /// x reached x_eq with y still positive: overshoot.
    CaseI { eta_exit: f64, y_exit: f64 },
    /// y reached zero with x still inside the strip: fallback.
    CaseII { eta_exit: f64, x_exit: f64 },
    /// No exit by the horizon; near-connection proxy when the terminal
    /// state sits inside the strip close to the saddle.
    Undecided { eta_horizon: f64, terminal_distance: f64, inside: bool },
}

impl ShotOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            ShotOutcome::CaseI { .. } => "overshoot",
            ShotOutcome::CaseII { .. } => "fallback",
            ShotOutcome::Undecided { .. } => "undecided",
        }
    }
}

/// Integrate a shot and classify its exit from the strip 0 < x < x_eq, y > 0.
pub fn classify_shot(
    params: &ProblemParams,
    beta: f64,
    config: &IntegratorConfig,
) -> Result<(ShotOutcome, Trajectory)> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(SimError::InvalidParameter(format!("beta must be positive, got {beta}")));
    }
    let x_eq = params.x_eq();
    let events = vec![
        PhaseEvent::new("x_reaches_x_eq", CrossingDirection::Rising, true, move |_, x, _| {
            x - x_eq
        }),
        PhaseEvent::new("y_zero", CrossingDirection::Falling, true, |_, _, y| y),
    ];
    let traj = integrator::integrate(params, 0.0, (0.0, beta), Direction::Forward, config, events)?;

    // Early-time sandwich audit: strictly inside [0, eta*) both bounds hold.
    let horizon = eta_star(params, beta)? * (1.0 - 1e-9);
    let band = 1e-9 * beta.max(1.0);
    for s in traj.samples.iter().skip(1).take_while(|s| s.eta < horizon) {
        let y_ok = s.y >= beta / 2.0 - band && s.y <= beta + band;
        let x_ok = s.x >= beta * s.eta / 2.0 - band && s.x <= beta * s.eta + band;
        if !(y_ok && x_ok) {
            return Err(SimError::Invariant(format!(
                "slope sandwich violated at eta = {}: x = {}, y = {}, beta = {beta}",
                s.eta, s.x, s.y
            )));
        }
    }

    let outcome = if traj.terminated_by_event {
        let term = *traj.terminal();
        let hits: Vec<&str> = traj
            .events
            .iter()
            .filter(|h| (h.t - term.eta).abs() <= 1e-9)
            .map(|h| h.name.as_str())
            .collect();
        if hits.len() != 1 {
            return Err(SimError::DegenerateEvent(format!(
                "simultaneous exit conditions at eta = {} for beta = {beta}: {hits:?}",
                term.eta
            )));
        }
        match hits[0] {
            "x_reaches_x_eq" => ShotOutcome::CaseI { eta_exit: term.eta, y_exit: term.y },
            _ => ShotOutcome::CaseII { eta_exit: term.eta, x_exit: term.x },
        }
    } else {
        let term = traj.terminal();
        ShotOutcome::Undecided {
            eta_horizon: term.eta,
            terminal_distance: (term.x - x_eq).hypot(term.y),
            inside: term.x > 0.0 && term.x < x_eq && term.y > 0.0,
        }
    };
    Ok((outcome, traj))
}

/// Rigorous starting bounds: shots at or below the low bound fall back
/// (the seed energy stays below the critical level), shots above the high
/// bound overshoot.
pub fn bracket_bounds(params: &ProblemParams) -> (f64, f64) {
    let lo = (2.0 * params.c_star()).sqrt();
    let d = params.x_eq() - params.m_h();
    let hi = (2.0 * (d * d - params.m_h() * params.m_h())).sqrt();
    (lo, hi)
}

#[derive(Debug, Clone, Copy)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    /// Outward expansions needed beyond the first nudge.
    pub attempts: usize,
}

/// Nudge the theoretical bounds by `delta` and verify the classifications;
/// on a wrong classification move that endpoint outward geometrically.
pub fn initial_bracket(
    params: &ProblemParams,
    config: &IntegratorConfig,
    delta: f64,
) -> Result<Bracket> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(SimError::InvalidParameter(format!("bracket nudge {delta} out of range")));
    }
    let (lo_bound, hi_bound) = bracket_bounds(params);
    let mut attempts = 0usize;
    let (mut lo, mut hi) = (lo_bound * (1.0 - delta), hi_bound * (1.0 + delta));
    loop {
        let lo_out = classify_shot(params, lo, config)?.0;
        let hi_out = classify_shot(params, hi, config)?.0;
        let lo_ok = matches!(lo_out, ShotOutcome::CaseII { .. });
        let hi_ok = matches!(hi_out, ShotOutcome::CaseI { .. });
        if lo_ok && hi_ok {
            return Ok(Bracket { lo, hi, attempts });
        }
        attempts += 1;
        if attempts > 10 {
            return Err(SimError::BracketFailure {
                lo,
                hi,
                lo_class: lo_out.label().into(),
                hi_class: hi_out.label().into(),
                attempts,
            });
        }
        let offset = delta * (1 << attempts) as f64;
        if !lo_ok {
            if offset >= 1.0 {
                return Err(SimError::BracketFailure {
                    lo,
                    hi,
                    lo_class: lo_out.label().into(),
                    hi_class: hi_out.label().into(),
                    attempts,
                });
            }
            lo = lo_bound * (1.0 - offset);
        }
        if !hi_ok {
            hi = hi_bound * (1.0 + offset);
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TailFit {
    /// Prefactor of the saddle approach x_eq - x ~ A eta^-3 exp(-eta^2/4).
    pub a_inf: f64,
    /// Coefficient of -eta^2/4; the model value is 1.
    pub gaussian_slope: f64,
    /// Coefficient of -3 ln eta; the model value is 1.
    pub log_correction: f64,
    pub window: (f64, f64),
    pub n_points: usize,
}

/// Fit ln(x_eq - x) = ln A - s eta^2/4 - t 3 ln eta over the given window.
/// If the residual x_eq - x loses positivity inside the window (noise floor),
/// the right edge shrinks to the last strictly positive run.
pub fn tail_fit(
    traj: &Trajectory,
    params: &ProblemParams,
    eta_lo: f64,
    eta_hi: f64,
) -> Result<TailFit> {
    let x_eq = params.x_eq();
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for s in &traj.samples {
        if s.eta < eta_lo || s.eta > eta_hi {
            continue;
        }
        let r = x_eq - s.x;
        if r <= 0.0 {
            break; // window shrinks here
        }
        pts.push((s.eta, r));
    }
    if pts.len() < 8 {
        return Err(SimError::FitFailure(format!(
            "only {} usable saddle-approach points in [{eta_lo}, {eta_hi}]",
            pts.len()
        )));
    }
    let rows: Vec<Vec<f64>> =
        pts.iter().map(|&(eta, _)| vec![1.0, -eta * eta / 4.0, -3.0 * eta.ln()]).collect();
    let y: Vec<f64> = pts.iter().map(|&(_, r)| r.ln()).collect();
    let c = fit::least_squares(&rows, &y)?;
    Ok(TailFit {
        a_inf: c[0].exp(),
        gaussian_slope: c[1],
        log_correction: c[2],
        window: (pts[0].0, pts.last().unwrap().0),
        n_points: pts.len(),
    })
}

#[derive(Debug, Clone)]
pub struct HeteroclinicResult {
    pub p: f64,
    pub lo_bound: f64,
    pub hi_bound: f64,
    pub beta_star: f64,
    pub interval_width: f64,
    pub iterations: usize,
    /// Total classification runs, bracket validation included.
    pub classifications: usize,
    /// The midpoint was accepted on an undecided classification.
    pub undecided_accept: bool,
    /// Final run at beta_star to the horizon, no terminal events.
    pub trajectory: Trajectory,
    pub tail: Option<TailFit>,
}

/// Bisect the bracket down to `tol_beta` and integrate the accepted shot.
///
/// Classification runs use tolerances at least as tight as 1e-12/1e-14:
/// near the saddle the discriminating signal collapses like exp(-eta^2/4),
/// so loose tolerances would bury exits below the integration noise once
/// the bracket narrows past ~1e-8.
pub fn bisect_beta(
    params: &ProblemParams,
    config: &IntegratorConfig,
    tol_beta: f64,
) -> Result<HeteroclinicResult> {
    if !(tol_beta > 0.0 && tol_beta < 1e-2) {
        return Err(SimError::InvalidParameter(format!("tol_beta {tol_beta} out of range")));
    }
    let class_cfg = IntegratorConfig {
        rel_tol: config.rel_tol.min(1e-12),
        abs_tol: config.abs_tol.min(1e-14),
        min_record_spacing: 0.0,
        ..config.clone()
    };
    let bracket = initial_bracket(params, &class_cfg, 1e-3)?;
    let (mut lo, mut hi) = (bracket.lo, bracket.hi);
    let mut classifications = 2 + 2 * bracket.attempts;
    let mut iterations = 0usize;
    let mut undecided_accept = false;
    let mut beta_star = 0.5 * (lo + hi);

    while hi - lo > tol_beta && iterations < 60 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        classifications += 1;
        match classify_shot(params, mid, &class_cfg)?.0 {
            ShotOutcome::CaseII { .. } => lo = mid,
            ShotOutcome::CaseI { .. } => hi = mid,
            ShotOutcome::Undecided { .. } => {
                undecided_accept = true;
                beta_star = mid;
                break;
            }
        }
    }
    if !undecided_accept {
        beta_star = 0.5 * (lo + hi);
    }

    let run_cfg = IntegratorConfig { h_max: 0.02, ..class_cfg };
    let trajectory =
        integrator::integrate(params, 0.0, (0.0, beta_star), Direction::Forward, &run_cfg, vec![])?;
    let tail = tail_fit(&trajectory, params, 3.0, 8.0).ok();

    Ok(HeteroclinicResult {
        p: params.p,
        lo_bound: bracket.lo,
        hi_bound: bracket.hi,
        beta_star,
        interval_width: hi - lo,
        iterations,
        classifications,
        undecided_accept,
        trajectory,
        tail,
    })
}

/// Odd extension of the connecting trajectory to negative eta:
/// (x, y)(-eta) = (-x(eta), y(eta)). Samples ascend in eta.
pub fn extend_by_reflection(traj: &Trajectory) -> Vec<Sample> {
    let mut out: Vec<Sample> = traj
        .samples
        .iter()
        .skip(1)
        .rev()
        .map(|s| Sample { eta: -s.eta, x: -s.x, y: s.y, v: s.v })
        .collect();
    out.extend(traj.samples.iter().cloned());
    out
}
