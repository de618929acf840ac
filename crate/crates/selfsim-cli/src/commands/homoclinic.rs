//! `homoclinic`: integrate one admissible seed in both directions (or sweep
//! a sampled batch) and report convergence, containment and envelope decay.

use serde::Serialize;
use selfsim::homoclinic::{
    self, ContainmentReport, DecayFit, Seed, SeedReport, AMP_FLOOR,
};
use selfsim::integrator::IntegratorConfig;
use selfsim::kernels::ProblemParams;
use selfsim::sweep::{self, SeedSurvey};

use crate::config::{Common, Ini};
use crate::emit::{fmt_real, Artifacts, SvgPlot};
use crate::{CliError, CommonFlags};

const SECTION: &str = "homoclinic";

#[derive(Serialize)]
struct SingleReport {
    p: f64,
    report: SeedReport,
    containment: ContainmentReport,
    decay: Option<DecayFit>,
    r5: f64,
    r10: f64,
    decay_ratio: f64,
}

#[derive(Serialize)]
struct SweepReport {
    p: f64,
    rng_seed: u64,
    surveys: Vec<SeedSurvey>,
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_real).unwrap_or_default()
}

pub fn run(flags: &CommonFlags) -> Result<(), CliError> {
    let ini = Ini::load(flags.config.as_ref())?;
    let common = Common::resolve(flags, &ini, SECTION)?;
    let params = ProblemParams::new(common.p)?;

    let alpha = ini.f64(SECTION, "alpha")?.unwrap_or(0.1);
    let beta = ini.f64(SECTION, "beta")?.unwrap_or(0.0);
    let n_seeds = ini.usize(SECTION, "n_seeds")?.unwrap_or(0);
    let config =
        IntegratorConfig { eta_max: common.eta_max, ..homoclinic::recommended_config() };

    let extra = [
        ("alpha", format!("{alpha:e}")),
        ("beta", format!("{beta:e}")),
        ("n_seeds", n_seeds.to_string()),
    ];
    let hash = common.config_hash(SECTION, &extra);
    let mut art = Artifacts::new(&common.out, SECTION, hash)?;

    if n_seeds > 0 {
        let seeds = homoclinic::sample_seeds(&params, n_seeds, common.seed);
        let surveys: Vec<SeedSurvey> = sweep::survey_seeds(&params, &seeds, &config)
            .into_iter()
            .collect::<Result<_, _>>()?;
        let rows: Vec<Vec<String>> = surveys
            .iter()
            .map(|s| {
                vec![
                    fmt_real(s.seed.alpha),
                    fmt_real(s.seed.beta),
                    fmt_real(s.c_seed),
                    s.converged_plus.to_string(),
                    s.converged_minus.to_string(),
                    s.containment_ok.to_string(),
                    s.monotone_ok.to_string(),
                    fmt_real(s.max_monotone_violation),
                    fmt_opt(s.gaussian_slope),
                ]
            })
            .collect();
        art.csv(
            "surveys.csv",
            &[
                "alpha",
                "beta",
                "c_seed",
                "converged_plus",
                "converged_minus",
                "containment_ok",
                "monotone_ok",
                "max_monotone_violation",
                "gaussian_slope",
            ],
            &rows,
        )?;
        art.json(
            "homoclinic.json",
            &SweepReport { p: params.p, rng_seed: common.seed, surveys },
        )?;
        return art.finish();
    }

    let result = homoclinic::run_homoclinic(&params, Seed::new(alpha, beta), &config)?;
    let fit = homoclinic::extract_envelope(&result.forward, &params, 3.0, AMP_FLOOR)
        .and_then(|env| homoclinic::fit_decay(&params, &env))
        .ok();
    let (r5, r10, decay_ratio) = homoclinic::algebraic_decay_ratio(&result, &params, 0.1);
    let lq = [1.0, 2.0]
        .iter()
        .map(|&q| homoclinic::lq_norm(&result, &params, q, fit.as_ref()))
        .collect::<Result<Vec<_>, _>>()?;

    let merged = result.merged_samples();
    let rows: Vec<Vec<String>> = merged
        .iter()
        .map(|s| vec![fmt_real(s.eta), fmt_real(s.x), fmt_real(s.y), fmt_real(s.v)])
        .collect();
    art.csv("trajectory.csv", &["eta", "x", "y", "v"], &rows)?;

    let mut plot = SvgPlot::new("Seed orbit in the phase plane", "x", "y");
    plot.lines.push((merged.iter().map(|s| (s.x, s.y)).collect(), "steelblue"));
    plot.markers.push((alpha, beta, "black"));
    let x_eq = params.x_eq();
    plot.markers.push((x_eq, 0.0, "firebrick"));
    plot.markers.push((-x_eq, 0.0, "firebrick"));
    art.svg("phase.svg", &plot)?;

    art.json(
        "homoclinic.json",
        &SingleReport {
            p: params.p,
            report: homoclinic::seed_report(&result, fit.as_ref(), &lq),
            containment: result.containment,
            decay: fit,
            r5,
            r10,
            decay_ratio,
        },
    )?;
    art.finish()
}
