//! `pde-verify`: reconstruct space-time fields from the three profile
//! families and hold them against the reaction-diffusion equation itself,
//! first through grid-refined residuals, then by marching the initial data
//! forward and comparing with the self-similar prediction.

use std::collections::BTreeMap;

use serde::Serialize;
use selfsim::homoclinic::{self, Seed, AMP_FLOOR};
use selfsim::integrator::IntegratorConfig;
use selfsim::kernels::ProblemParams;
use selfsim::pde::{self, BcKind, Grid, Norms, ResidualReport, SelfSimilarProfile};
use selfsim::{heteroclinic, Result as SimResult};

use crate::config::{Common, Ini};
use crate::emit::{fmt_real, Artifacts, SvgPlot};
use crate::{CliError, CommonFlags};

const SECTION: &str = "pde-verify";

#[derive(Serialize)]
struct ResidualPair {
    coarse: ResidualReport,
    fine: ResidualReport,
    /// max_abs ratio coarse/fine; 4 means clean second order.
    factor_raw: f64,
    /// Same ratio away from the zero-crossing windows.
    factor_smooth: f64,
}

#[derive(Serialize)]
struct EvolutionRow {
    norms: Norms,
    ordering_ok: bool,
    max_ordering_excess: f64,
    steps: usize,
}

#[derive(Serialize)]
struct PdeReport {
    p: f64,
    l: f64,
    nx: usize,
    cfl: f64,
    t0: f64,
    t1: f64,
    resid_l: f64,
    resid_nx: usize,
    residual: BTreeMap<&'static str, ResidualPair>,
    evolution: BTreeMap<&'static str, EvolutionRow>,
}

fn residual_pair(
    profile: &SelfSimilarProfile,
    l: f64,
    nx: usize,
    t: f64,
) -> SimResult<ResidualPair> {
    let coarse = pde::pde_residual(profile, l, nx, t)?;
    let fine = pde::pde_residual(profile, l, 2 * nx - 1, t)?;
    Ok(ResidualPair {
        factor_raw: coarse.max_abs / fine.max_abs,
        factor_smooth: coarse.max_smooth / fine.max_smooth,
        coarse,
        fine,
    })
}

pub fn run(flags: &CommonFlags) -> Result<(), CliError> {
    let ini = Ini::load(flags.config.as_ref())?;
    let common = Common::resolve(flags, &ini, SECTION)?;
    let params = ProblemParams::new(common.p)?;

    let nx = ini.usize(SECTION, "nx")?.unwrap_or(1025);
    let l = ini.f64(SECTION, "l")?.unwrap_or(12.0 * 2.0f64.sqrt());
    let cfl = ini.f64(SECTION, "cfl")?.unwrap_or(0.4);
    let t0 = ini.f64(SECTION, "t0")?.unwrap_or(1.0);
    let t1 = ini.f64(SECTION, "t1")?.unwrap_or(2.0);
    let resid_l = ini.f64(SECTION, "resid_l")?.unwrap_or(16.0);
    let resid_nx = ini.usize(SECTION, "resid_nx")?.unwrap_or(2049);

    let extra = [
        ("nx", nx.to_string()),
        ("l", format!("{l:e}")),
        ("cfl", format!("{cfl:e}")),
        ("t0", format!("{t0:e}")),
        ("t1", format!("{t1:e}")),
        ("resid_l", format!("{resid_l:e}")),
        ("resid_nx", resid_nx.to_string()),
    ];
    let hash = common.config_hash(SECTION, &extra);
    let mut art = Artifacts::new(&common.out, SECTION, hash)?;

    // Profile construction: a localized oscillatory solution with its decay
    // fit (tail model), the connecting front, and the homogeneous control.
    let osc_cfg = IntegratorConfig { eta_max: common.eta_max, ..homoclinic::recommended_config() };
    let run = homoclinic::run_homoclinic(&params, Seed::new(0.1, 0.0), &osc_cfg)?;
    let env = homoclinic::extract_envelope(&run.forward, &params, 3.0, AMP_FLOOR)?;
    let fit = homoclinic::fit_decay(&params, &env)?;
    let oscillatory = SelfSimilarProfile::oscillatory(&params, &run, &fit);

    let het_cfg = IntegratorConfig { eta_max: common.eta_max, ..IntegratorConfig::default() };
    let front_run = heteroclinic::bisect_beta(&params, &het_cfg, common.tol_beta)?;
    let front = SelfSimilarProfile::front(&params, &front_run)?;
    let uniform = SelfSimilarProfile::uniform(&params);

    let mut residual = BTreeMap::new();
    residual.insert("oscillatory", residual_pair(&oscillatory, resid_l, resid_nx, t0)?);
    residual.insert("front", residual_pair(&front, resid_l, resid_nx, t0)?);

    let mut conv_rows: Vec<Vec<String>> = Vec::new();
    for (name, pair) in &residual {
        for rep in [&pair.coarse, &pair.fine] {
            conv_rows.push(vec![
                name.to_string(),
                rep.nx.to_string(),
                fmt_real(rep.dx),
                fmt_real(rep.max_abs),
                fmt_real(rep.max_smooth),
                fmt_real(rep.l2),
                rep.n_excluded.to_string(),
            ]);
        }
    }
    art.csv(
        "convergence.csv",
        &["profile", "nx", "dx", "max_abs", "max_smooth", "l2", "n_excluded"],
        &conv_rows,
    )?;

    let grid = Grid { l, nx, t0, t1, cfl };
    let cases: [(&'static str, &SelfSimilarProfile, BcKind); 3] = [
        ("oscillatory", &oscillatory, BcKind::Zero),
        ("front", &front, BcKind::SelfSimilar),
        ("uniform", &uniform, BcKind::SelfSimilar),
    ];
    let mut evolution = BTreeMap::new();
    let mut evo_rows: Vec<Vec<String>> = Vec::new();
    for (name, profile, bc) in cases {
        let result = pde::evolve(profile, &grid, bc)?;
        let norms = pde::compare_self_similar(profile, &grid, &result.values, result.t);
        evo_rows.push(vec![
            name.to_string(),
            fmt_real(norms.sup_abs),
            fmt_real(norms.sup_rel),
            fmt_real(norms.l2),
            result.ordering_ok.to_string(),
            fmt_real(result.max_ordering_excess),
            result.steps.to_string(),
        ]);
        evolution.insert(
            name,
            EvolutionRow {
                norms,
                ordering_ok: result.ordering_ok,
                max_ordering_excess: result.max_ordering_excess,
                steps: result.steps,
            },
        );
    }
    art.csv(
        "evolution.csv",
        &["profile", "sup_abs", "sup_rel", "l2", "ordering_ok", "max_ordering_excess", "steps"],
        &evo_rows,
    )?;

    let mut plot = SvgPlot::new("Initial fields u(x, t0)", "x", "u");
    for (name, profile, _) in [
        ("oscillatory", &oscillatory, ()),
        ("front", &front, ()),
        ("uniform", &uniform, ()),
    ] {
        let pts: Vec<(f64, f64)> = (0..=512)
            .map(|i| {
                let x = -l + 2.0 * l * i as f64 / 512.0;
                (x, profile.u(x, t0, pde::Shift::NONE))
            })
            .collect();
        let color = match name {
            "oscillatory" => "steelblue",
            "front" => "firebrick",
            _ => "seagreen",
        };
        plot.lines.push((pts, color));
    }
    art.svg("profiles.svg", &plot)?;

    art.json(
        "pde.json",
        &PdeReport { p: params.p, l, nx, cfl, t0, t1, resid_l, resid_nx, residual, evolution },
    )?;
    art.finish()
}
