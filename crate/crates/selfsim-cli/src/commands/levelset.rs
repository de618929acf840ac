//! `levelset`: sample closed level curves of V inside the critical level
//! and plot the bounded phase-plane geometry with its three equilibria.

use serde::Serialize;
use selfsim::kernels::{self, ProblemParams};

use crate::config::{Common, Ini};
use crate::emit::{fmt_real, Artifacts, SvgPlot};
use crate::{CliError, CommonFlags};

const SECTION: &str = "levelset";

#[derive(Serialize)]
struct CurveSummary {
    c: f64,
    closed: bool,
    n_points: usize,
}

#[derive(Serialize)]
struct LevelsetReport {
    p: f64,
    c_star: f64,
    x_eq: f64,
    curves: Vec<CurveSummary>,
}

pub fn run(flags: &CommonFlags) -> Result<(), CliError> {
    let ini = Ini::load(flags.config.as_ref())?;
    let common = Common::resolve(flags, &ini, SECTION)?;
    let params = ProblemParams::new(common.p)?;

    // Levels are absolute values of c; the default ladder spans [0, c*].
    let levels: Vec<f64> = match ini.f64_list(SECTION, "c")? {
        Some(v) => v,
        None => [0.0, 0.1, 0.3, 0.55, 0.8, 1.0]
            .iter()
            .map(|f| f * params.c_star())
            .collect(),
    };
    let n = ini.usize(SECTION, "n")?.unwrap_or(257);

    let extra = [
        ("c", levels.iter().map(|v| format!("{v:e}")).collect::<Vec<_>>().join(",")),
        ("n", n.to_string()),
    ];
    let hash = common.config_hash(SECTION, &extra);
    let mut art = Artifacts::new(&common.out, SECTION, hash)?;

    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut curves = Vec::new();
    let mut plot = SvgPlot::new("Level curves of V", "x", "y");
    for &c in &levels {
        let pts = kernels::level_curve_sample(&params, c, n.max(8))?;
        let closed = pts.len() > 1;
        for (idx, &(x, y)) in pts.iter().enumerate() {
            rows.push(vec![fmt_real(c), idx.to_string(), fmt_real(x), fmt_real(y)]);
        }
        curves.push(CurveSummary { c, closed, n_points: pts.len() });
        if closed {
            plot.lines.push((pts, "steelblue"));
        } else {
            plot.markers.push((pts[0].0, pts[0].1, "steelblue"));
        }
    }

    // Equilibria: the origin plus the saddles at +-x_eq.
    let x_eq = params.x_eq();
    plot.markers.push((0.0, 0.0, "black"));
    plot.markers.push((x_eq, 0.0, "firebrick"));
    plot.markers.push((-x_eq, 0.0, "firebrick"));

    art.csv("levelset.csv", &["c", "idx", "x", "y"], &rows)?;
    art.svg("levelset.svg", &plot)?;
    art.json(
        "levelset.json",
        &LevelsetReport { p: params.p, c_star: params.c_star(), x_eq, curves },
    )?;
    art.finish()
}
