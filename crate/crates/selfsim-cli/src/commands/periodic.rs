//! `periodic`: tabulate the oscillator period against the exact quadrature
//! over a grid of exponents and draw the nested family of unit orbits.

use serde::Serialize;
use selfsim::error::Result as SimResult;
use selfsim::periodic::{self, PhasePortrait};
use selfsim::sweep;

use crate::config::{Common, Ini};
use crate::emit::{fmt_real, Artifacts, SvgPlot};
use crate::{CliError, CommonFlags};

const SECTION: &str = "periodic";

#[derive(Serialize)]
struct PeriodRow {
    p: f64,
    period_quadrature: f64,
    period_measured: f64,
    rel_gap: f64,
    energy_drift: f64,
    max_abs_wp: f64,
}

#[derive(Serialize)]
struct PeriodicReport {
    rows: Vec<PeriodRow>,
    portrait_ps: Vec<f64>,
    nested: bool,
}

pub fn run(flags: &CommonFlags) -> Result<(), CliError> {
    let ini = Ini::load(flags.config.as_ref())?;
    let common = Common::resolve(flags, &ini, SECTION)?;

    // p = 1 is the linear control row (period 2 pi); the grid ignores the
    // global --p since the table is the point of this command.
    let p_grid: Vec<f64> = match ini.f64_list(SECTION, "p_grid")? {
        Some(v) => v,
        None => (1..=9).map(|i| i as f64 / 10.0).chain([1.0]).collect(),
    };
    let portrait_ps: Vec<f64> = match ini.f64_list(SECTION, "portrait")? {
        Some(v) => v,
        None => vec![0.1, 0.3, 0.5, 0.7, 0.9],
    };

    let fmt_list =
        |v: &[f64]| v.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(",");
    let extra = [("p_grid", fmt_list(&p_grid)), ("portrait", fmt_list(&portrait_ps))];
    let hash = common.config_hash(SECTION, &extra);
    let mut art = Artifacts::new(&common.out, SECTION, hash)?;

    let rows: Vec<PeriodRow> = sweep::map(&p_grid, |&p| -> SimResult<PeriodRow> {
        let exact = periodic::period_t(p)?;
        let orbit = periodic::solve_w(p)?;
        Ok(PeriodRow {
            p,
            period_quadrature: exact,
            period_measured: orbit.period,
            rel_gap: (orbit.period - exact).abs() / exact,
            energy_drift: orbit.energy_drift,
            max_abs_wp: orbit.max_abs_wp,
        })
    })
    .into_iter()
    .collect::<Result<_, _>>()?;

    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                fmt_real(r.p),
                fmt_real(r.period_quadrature),
                fmt_real(r.period_measured),
                fmt_real(r.rel_gap),
                fmt_real(r.energy_drift),
                fmt_real(r.max_abs_wp),
            ]
        })
        .collect();
    art.csv(
        "period_table.csv",
        &["p", "period_quadrature", "period_measured", "rel_gap", "energy_drift", "max_abs_wp"],
        &csv_rows,
    )?;

    let portrait: PhasePortrait = periodic::emit_phase_portrait(&portrait_ps)?;
    let mut plot = SvgPlot::new("Unit-amplitude orbits", "W", "W'");
    for orbit in &portrait.orbits {
        plot.lines.push((orbit.cycle.clone(), "steelblue"));
    }
    plot.markers.push((1.0, 0.0, "black"));
    plot.markers.push((-1.0, 0.0, "black"));
    art.svg("portrait.svg", &plot)?;

    art.json(
        "periodic.json",
        &PeriodicReport { rows, portrait_ps, nested: portrait.nested },
    )?;
    art.finish()
}
