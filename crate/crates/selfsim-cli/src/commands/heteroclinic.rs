//! `heteroclinic`: scan shot speeds across the rigorous bracket, bisect to
//! the connecting speed and report the front with its saddle-approach fit.

use serde::Serialize;
use selfsim::heteroclinic::{self, ShotOutcome, TailFit};
use selfsim::integrator::IntegratorConfig;
use selfsim::kernels::ProblemParams;
use selfsim::sweep;

use crate::config::{Common, Ini};
use crate::emit::{fmt_real, Artifacts, SvgPlot};
use crate::{CliError, CommonFlags};

const SECTION: &str = "heteroclinic";

#[derive(Serialize)]
struct FrontReport {
    p: f64,
    x_eq: f64,
    lo_bound: f64,
    hi_bound: f64,
    beta_star: f64,
    interval_width: f64,
    iterations: usize,
    classifications: usize,
    undecided_accept: bool,
    terminal_eta: f64,
    terminal_x: f64,
    terminal_y: f64,
    terminal_distance: f64,
    tail: Option<TailFit>,
}

pub fn run(flags: &CommonFlags) -> Result<(), CliError> {
    let ini = Ini::load(flags.config.as_ref())?;
    let common = Common::resolve(flags, &ini, SECTION)?;
    let params = ProblemParams::new(common.p)?;
    let scan_n = ini.usize(SECTION, "scan_n")?.unwrap_or(33);
    if scan_n < 2 {
        return Err(CliError::Validation(format!("scan_n must be at least 2, got {scan_n}")));
    }

    let extra = [("scan_n", scan_n.to_string())];
    let hash = common.config_hash(SECTION, &extra);
    let mut art = Artifacts::new(&common.out, SECTION, hash)?;

    // Classification needs tolerances well below the final bracket width;
    // the same configuration keeps scan labels and bisection consistent.
    let config = IntegratorConfig {
        rel_tol: 1e-12,
        abs_tol: 1e-14,
        eta_max: common.eta_max,
        ..IntegratorConfig::default()
    };

    let (lo, hi) = heteroclinic::bracket_bounds(&params);
    let betas: Vec<f64> =
        (0..scan_n).map(|i| lo + (hi - lo) * i as f64 / (scan_n - 1) as f64).collect();
    let shots: Vec<(f64, ShotOutcome)> =
        sweep::scan_shots(&params, &betas, &config).into_iter().collect::<Result<_, _>>()?;
    let scan_rows: Vec<Vec<String>> = shots
        .iter()
        .map(|(beta, out)| {
            let (eta_exit, detail) = match out {
                ShotOutcome::CaseI { eta_exit, y_exit } => (*eta_exit, *y_exit),
                ShotOutcome::CaseII { eta_exit, x_exit } => (*eta_exit, *x_exit),
                ShotOutcome::Undecided { eta_horizon, terminal_distance, .. } => {
                    (*eta_horizon, *terminal_distance)
                }
            };
            vec![fmt_real(*beta), out.label().to_string(), fmt_real(eta_exit), fmt_real(detail)]
        })
        .collect();
    art.csv("scan.csv", &["beta", "outcome", "eta_exit", "exit_value"], &scan_rows)?;

    let result = heteroclinic::bisect_beta(&params, &config, common.tol_beta)?;
    let term = *result.trajectory.terminal();
    let x_eq = params.x_eq();

    let samples = heteroclinic::extend_by_reflection(&result.trajectory);
    let rows: Vec<Vec<String>> = samples
        .iter()
        .map(|s| vec![fmt_real(s.eta), fmt_real(s.x), fmt_real(s.y)])
        .collect();
    art.csv("connection.csv", &["eta", "x", "y"], &rows)?;

    let mut plot = SvgPlot::new("Connecting front", "eta", "x");
    let span = (samples.first().unwrap().eta, samples.last().unwrap().eta);
    plot.lines.push((samples.iter().map(|s| (s.eta, s.x)).collect(), "steelblue"));
    plot.lines.push((vec![(span.0, x_eq), (span.1, x_eq)], "silver"));
    plot.lines.push((vec![(span.0, -x_eq), (span.1, -x_eq)], "silver"));
    plot.markers.push((0.0, 0.0, "black"));
    art.svg("front.svg", &plot)?;

    art.json(
        "heteroclinic.json",
        &FrontReport {
            p: result.p,
            x_eq,
            lo_bound: result.lo_bound,
            hi_bound: result.hi_bound,
            beta_star: result.beta_star,
            interval_width: result.interval_width,
            iterations: result.iterations,
            classifications: result.classifications,
            undecided_accept: result.undecided_accept,
            terminal_eta: term.eta,
            terminal_x: term.x,
            terminal_y: term.y,
            terminal_distance: (term.x - x_eq).hypot(term.y),
            tail: result.tail,
        },
    )?;
    art.finish()
}
