//! Order-preserving work distribution for parameter sweeps. The parallel
//! path (default) and the sequential fallback produce identical output
//! vectors, so every sweep result is byte-for-byte reproducible either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::heteroclinic::{self, ShotOutcome};
use crate::homoclinic::{self, Seed};
use crate::integrator::{check_monotone_f, IntegratorConfig};
use crate::kernels::ProblemParams;
use crate::periodic;

pub fn map_sequential<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_parallel<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Map over a slice with the crate-level concurrency choice.
#[cfg(feature = "parallel")]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    map_parallel(items, f)
}

/// Map over a slice with the crate-level concurrency choice.
#[cfg(not(feature = "parallel"))]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    map_sequential(items, f)
}

/// Summary of one seed's two-sided run, as produced by seed sweeps.
#[derive(Debug, Clone, Serialize)]
pub struct SeedSurvey {
    pub seed: Seed,
    pub c_seed: f64,
    pub converged_plus: bool,
    pub converged_minus: bool,
    pub containment_ok: bool,
    pub monotone_ok: bool,
    pub max_monotone_violation: f64,
    pub gaussian_slope: Option<f64>,
}

pub fn survey_seed(
    params: &ProblemParams,
    seed: Seed,
    config: &IntegratorConfig,
) -> Result<SeedSurvey> {
    let run = homoclinic::run_homoclinic(params, seed, config)?;
    let fwd = check_monotone_f(&run.forward, 1e-9);
    let bwd = check_monotone_f(&run.backward, 1e-9);
    let slope = homoclinic::extract_envelope(&run.forward, params, 3.0, homoclinic::AMP_FLOOR)
        .and_then(|env| homoclinic::fit_decay(params, &env))
        .map(|f| f.gaussian_slope)
        .ok();
    Ok(SeedSurvey {
        seed,
        c_seed: run.c_seed,
        converged_plus: run.converged_plus,
        converged_minus: run.converged_minus,
        containment_ok: run.containment.ok,
        monotone_ok: fwd.ok && bwd.ok,
        max_monotone_violation: fwd.max_violation.max(bwd.max_violation),
        gaussian_slope: slope,
    })
}

pub fn survey_seeds(
    params: &ProblemParams,
    seeds: &[Seed],
    config: &IntegratorConfig,
) -> Vec<Result<SeedSurvey>> {
    map(seeds, |&seed| survey_seed(params, seed, config))
}

/// Classify a whole ladder of shot speeds.
pub fn scan_shots(
    params: &ProblemParams,
    betas: &[f64],
    config: &IntegratorConfig,
) -> Vec<Result<(f64, ShotOutcome)>> {
    map(betas, |&beta| {
        heteroclinic::classify_shot(params, beta, config).map(|(out, _)| (beta, out))
    })
}

/// Exact periods over a grid of exponents.
pub fn period_grid(ps: &[f64]) -> Vec<Result<(f64, f64)>> {
    map(ps, |&p| periodic::period_t(p).map(|t| (p, t)))
}
