//! The autonomous sublinear oscillator W'' + W|W|^{p-1} = 0. Orbits are
//! closed curves around the origin; the unit-amplitude orbit from (1, 0)
//! carries the oscillatory fine structure of decaying phase-plane
//! trajectories, and its period admits an exact one-dimensional integral.
//!
//! p = 1 is admitted throughout this module as the linear control case
//! (W = cos, period 2 pi).

use serde::Serialize;

use crate::error::{Result, SimError};
use crate::kernels::signed_pow;
use crate::quad;
use crate::rk::{self, Direction, EventSpec, RkConfig, State};

fn validate_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p <= 1.0) || !p.is_finite() {
        return Err(SimError::InvalidParameter(format!(
            "oscillator exponent must lie in (0, 1], got {p}"
        )));
    }
    Ok(())
}

/// Exact period of the unit-amplitude orbit:
///   T(p) = 2^{3/2} (1+p)^{1/2} * I,  I = int_0^1 (1 - lambda^{1+p})^{-1/2} dlambda.
/// The endpoint singularity at lambda = 1 is removed by lambda = 1 - s^2,
/// after which the integrand is smooth and Gauss panels converge fast.
pub fn period_t(p: f64) -> Result<f64> {
    validate_p(p)?;
    let q = 1.0 + p;
    let f = |s: f64| {
        // 1 - (1 - s^2)^q, evaluated without cancellation near s = 0.
        let one_minus = -((q * (-s * s).ln_1p()).exp_m1());
        if one_minus <= 0.0 {
            // Only reachable at s = 0 in exact arithmetic; the limit is 2/sqrt(q).
            2.0 / q.sqrt()
        } else {
            2.0 * s / one_minus.sqrt()
        }
    };
    let (integral, err) = quad::integrate_adaptive(f, 0.0, 1.0, 1e-13);
    if !err.is_finite() {
        return Err(SimError::Invariant(format!("period quadrature did not converge at p = {p}")));
    }
    Ok(2.0f64.sqrt() * 2.0 * q.sqrt() * integral)
}

/// Period of the orbit with amplitude a > 0: T_a = a^{(1-p)/2} T(p).
pub fn period_amplitude(p: f64, a: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(SimError::InvalidParameter(format!("amplitude must be positive, got {a}")));
    }
    Ok(a.powf((1.0 - p) / 2.0) * period_t(p)?)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct OscSample {
    pub zeta: f64,
    pub w: f64,
    pub wp: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PeriodicOrbit {
    pub p: f64,
    pub amplitude: f64,
    pub samples: Vec<OscSample>,
    /// Period measured from successive maxima (falling zero crossings of W'
    /// with W > 0), least-squares averaged over all observed cycles.
    pub period: f64,
    /// Largest deviation of W'^2/2 + |W|^{1+p}/(1+p) from its initial value.
    pub energy_drift: f64,
    pub energy0: f64,
    pub max_abs_wp: f64,
}

impl PeriodicOrbit {
    pub fn energy(p: f64, w: f64, wp: f64) -> f64 {
        0.5 * wp * wp + w.abs().powf(1.0 + p) / (1.0 + p)
    }

    /// Linear interpolation is enough for symmetry audits at 1e-8 only if
    /// samples are dense; use Hermite reconstruction instead.
    pub fn value_at(&self, zeta: f64) -> (f64, f64) {
        let s = &self.samples;
        let idx = match s.binary_search_by(|smp| smp.zeta.partial_cmp(&zeta).unwrap()) {
            Ok(i) => return (s[i].w, s[i].wp),
            Err(i) => i.clamp(1, s.len() - 1) - 1,
        };
        let p = self.p;
        let raw = |smp: &OscSample| rk::RawSample {
            t: smp.zeta,
            state: [smp.w, smp.wp],
            deriv: [smp.wp, -signed_pow(smp.w, p)],
        };
        let out = rk::hermite(&raw(&s[idx]), &raw(&s[idx + 1]), zeta);
        (out[0], out[1])
    }
}

fn oscillator_rhs(p: f64) -> impl Fn(f64, State) -> State {
    move |_t, s| [s[1], -signed_pow(s[0], p)]
}

fn osc_config(p: f64, amplitude: f64) -> RkConfig {
    // Resolve each cycle well regardless of the amplitude-scaled period.
    // Tolerances sized so three periods keep the energy drift under 1e-9:
    // local errors accumulate roughly as steps * rel_tol here.
    let t_est = amplitude.powf((1.0 - p) / 2.0) * 5.0;
    RkConfig {
        rel_tol: 1e-12,
        abs_tol: 5e-14,
        h_init: (t_est / 200.0).min(1e-3),
        h_max: t_est / 100.0,
        ..RkConfig::default()
    }
}

/// Integrate the oscillator from (w0, w0'), spanning at least three periods
/// when started at a turning point. Exposed for perturbed controls; most
/// callers want `solve_w`.
pub fn solve_oscillator(p: f64, w0: f64, w0p: f64) -> Result<PeriodicOrbit> {
    validate_p(p)?;
    let amplitude = w0.abs().max(w0p.abs());
    if !(amplitude > 0.0) {
        return Err(SimError::InvalidParameter("oscillator needs a nonzero start".into()));
    }
    // Upper bound 2 pi >= T(p) for the unit orbit; scale and pad.
    let span = 3.35 * amplitude.powf((1.0 - p) / 2.0) * (2.0 * std::f64::consts::PI);
    let cfg = osc_config(p, amplitude);
    let mut events = vec![EventSpec {
        name: "w_max",
        g: Box::new(|_t: f64, s: State| s[1]),
        direction: Direction::Falling,
        terminal: false,
    }];
    let raw = rk::integrate(oscillator_rhs(p), 0.0, [w0, w0p], span, &cfg, &mut events)?;

    // Falling crossings of W' are maxima of W (W'' < 0 there forces W > 0),
    // one per cycle; regress crossing times on the cycle index.
    let maxima: Vec<f64> = raw.events.iter().map(|e| e.t).collect();
    if maxima.len() < 3 {
        return Err(SimError::NotEnoughOscillations { found: maxima.len(), need: 3 });
    }
    let offset = if w0p == 0.0 && w0 > 0.0 { 0.0 } else { maxima[0] };
    let mut num = 0.0;
    let mut den = 0.0;
    for (k, t) in maxima.iter().enumerate() {
        let idx = if offset == 0.0 { (k + 1) as f64 } else { k as f64 };
        if idx > 0.0 {
            num += idx * (t - offset);
            den += idx * idx;
        }
    }
    let period = num / den;

    let e0 = PeriodicOrbit::energy(p, w0, w0p);
    let mut drift = 0.0f64;
    let mut max_wp = 0.0f64;
    let samples: Vec<OscSample> = raw
        .samples
        .iter()
        .map(|r| {
            let e = PeriodicOrbit::energy(p, r.state[0], r.state[1]);
            drift = drift.max((e - e0).abs());
            max_wp = max_wp.max(r.state[1].abs());
            OscSample { zeta: r.t, w: r.state[0], wp: r.state[1] }
        })
        .collect();

    Ok(PeriodicOrbit { p, amplitude, samples, period, energy_drift: drift, energy0: e0, max_abs_wp: max_wp })
}

/// The canonical unit-amplitude orbit from (1, 0).
pub fn solve_w(p: f64) -> Result<PeriodicOrbit> {
    solve_oscillator(p, 1.0, 0.0)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SymmetryReport {
    /// max |W(-zeta) - W(zeta)| over a grid, via a backward companion run.
    pub even_deviation: f64,
    /// max |W(T/2 - zeta) + W(zeta)| over a grid of the first half period.
    pub half_turn_deviation: f64,
}

/// Audit the reflection symmetries of an orbit started at a turning point.
pub fn check_symmetry(orbit: &PeriodicOrbit) -> Result<SymmetryReport> {
    let p = orbit.p;
    let t_half = 0.5 * orbit.period;
    let first = orbit.samples[0];

    let cfg = osc_config(p, orbit.amplitude);
    let raw = rk::integrate(
        oscillator_rhs(p),
        0.0,
        [first.w, first.wp],
        -orbit.period,
        &cfg,
        &mut [],
    )?;

    let n = 200;
    let mut even_dev = 0.0f64;
    let mut half_dev = 0.0f64;
    for i in 0..=n {
        let z = orbit.period * i as f64 / n as f64;
        let (wf, _) = orbit.value_at(z);
        let wb = raw.interpolate(-z)[0];
        even_dev = even_dev.max((wb - wf).abs());
        if z <= t_half {
            let (wr, _) = orbit.value_at(t_half - z);
            half_dev = half_dev.max((wr + wf).abs());
        }
    }
    Ok(SymmetryReport { even_deviation: even_dev, half_turn_deviation: half_dev })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScalingCheck {
    pub amplitude: f64,
    pub period_measured: f64,
    pub period_predicted: f64,
    pub rel_error: f64,
}

/// Measure the period at amplitude a and compare with a^{(1-p)/2} T(p).
pub fn amplitude_scaling_check(p: f64, a: f64) -> Result<ScalingCheck> {
    let orbit = solve_oscillator(p, a, 0.0)?;
    let predicted = period_amplitude(p, a)?;
    let rel = (orbit.period - predicted).abs() / predicted;
    Ok(ScalingCheck { amplitude: a, period_measured: orbit.period, period_predicted: predicted, rel_error: rel })
}

#[derive(Debug, Clone, Serialize)]
pub struct PhasePortrait {
    pub orbits: Vec<PortraitOrbit>,
    /// True when every adjacent pair of orbits (ordered by p) is nested:
    /// the smaller-p orbit encloses the larger-p one away from the shared
    /// touch points (+-1, 0).
    pub nested: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PortraitOrbit {
    pub p: f64,
    pub period: f64,
    pub max_abs_wp: f64,
    /// One full cycle of (W, W') samples.
    pub cycle: Vec<(f64, f64)>,
}

/// Unit-amplitude orbits for a list of exponents, with the nesting audit.
/// All orbits pass through (1, 0) and (-1, 0); between those points the
/// upper branches are strictly ordered, which is checked pointwise on a
/// W-grid against interpolated |W'|.
pub fn emit_phase_portrait(ps: &[f64]) -> Result<PhasePortrait> {
    if ps.is_empty() {
        return Err(SimError::InvalidParameter("empty exponent list".into()));
    }
    let mut sorted = ps.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut orbits = Vec::with_capacity(sorted.len());
    for &p in &sorted {
        let orb = solve_w(p)?;
        let cycle: Vec<(f64, f64)> = orb
            .samples
            .iter()
            .take_while(|s| s.zeta <= orb.period * 1.0001)
            .map(|s| (s.w, s.wp))
            .collect();
        orbits.push((orb, cycle));
    }

    // Upper branch |W'|(W) from samples of the first half period. W is a
    // square-root cusp of W' near the turning points, so interpolate in
    // zeta (where both are smooth) and bisect for the requested W.
    let upper = |orb: &PeriodicOrbit, w: f64| -> f64 {
        let half: Vec<&OscSample> =
            orb.samples.iter().take_while(|s| s.zeta <= 0.5 * orb.period + 1e-9).collect();
        // W decreases monotonically from 1 to -1 over the first half cycle.
        for pair in half.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if (a.w - w) * (b.w - w) <= 0.0 {
                let (mut lo, mut hi) = (a.zeta, b.zeta);
                let side = a.w - w;
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if (orb.value_at(mid).0 - w) * side >= 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                return orb.value_at(0.5 * (lo + hi)).1.abs();
            }
        }
        0.0
    };

    let mut nested = true;
    let grid: Vec<f64> = (1..40).map(|i| -0.975 + 0.05 * i as f64).collect();
    for pair in orbits.windows(2) {
        let (outer, inner) = (&pair[0].0, &pair[1].0);
        for &w in &grid {
            if upper(outer, w) < upper(inner, w) - 1e-6 {
                nested = false;
            }
        }
        if outer.max_abs_wp < inner.max_abs_wp {
            nested = false;
        }
    }

    Ok(PhasePortrait {
        orbits: orbits
            .into_iter()
            .map(|(orb, cycle)| PortraitOrbit {
                p: orb.p,
                period: orb.period,
                max_abs_wp: orb.max_abs_wp,
                cycle,
            })
            .collect(),
        nested,
    })
}
