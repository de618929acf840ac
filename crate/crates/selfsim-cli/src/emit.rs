//! Artifact writers. All output is byte-deterministic: reals are printed
//! with 17 significant digits in CSV, serde's shortest-roundtrip form in
//! JSON, and fixed two-decimal pixel coordinates in SVG. No timestamps.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::CliError;

pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

/// Collects the files of one run and writes the manifest on `finish`.
pub struct Artifacts {
    dir: PathBuf,
    command: &'static str,
    config_hash: String,
    files: Vec<String>,
}

/// One manifest record per artifact, so files remain attributable to the
/// run that produced them even when directories are shared.
#[derive(Serialize)]
struct ManifestEntry<'a> {
    file: &'a str,
    command: &'static str,
    config_hash: &'a str,
    version: &'static str,
}

#[derive(Serialize)]
struct Manifest<'a> {
    entries: Vec<ManifestEntry<'a>>,
}

impl Artifacts {
    pub fn new(dir: &Path, command: &'static str, config_hash: String) -> Result<Self, CliError> {
        fs::create_dir_all(dir)?;
        Ok(Artifacts { dir: dir.to_path_buf(), command, config_hash, files: Vec::new() })
    }

    fn write_file(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        let mut f = fs::File::create(self.dir.join(name))?;
        f.write_all(bytes)?;
        self.files.push(name.to_string());
        Ok(())
    }

    /// RFC-4180-style CSV: header row, comma separator, \r\n line ends.
    /// Cells are preformatted strings (use `fmt_real` for numbers).
    pub fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
        let mut out = String::new();
        out.push_str(&header.join(","));
        out.push_str("\r\n");
        for row in rows {
            out.push_str(&row.join(","));
            out.push_str("\r\n");
        }
        self.write_file(name, out.as_bytes())
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut bytes = serde_json::to_vec_pretty(value)
            .map_err(|e| CliError::Validation(format!("serialization failed: {e}")))?;
        bytes.push(b'\n');
        self.write_file(name, &bytes)
    }

    pub fn svg(&mut self, name: &str, plot: &SvgPlot) -> Result<(), CliError> {
        self.write_file(name, plot.render().as_bytes())
    }

    pub fn finish(self) -> Result<(), CliError> {
        let manifest = Manifest {
            entries: self
                .files
                .iter()
                .map(|f| ManifestEntry {
                    file: f,
                    command: self.command,
                    config_hash: &self.config_hash,
                    version: env!("CARGO_PKG_VERSION"),
                })
                .collect(),
        };
        let mut bytes = serde_json::to_vec_pretty(&manifest)
            .map_err(|e| CliError::Validation(format!("serialization failed: {e}")))?;
        bytes.push(b'\n');
        let mut f = fs::File::create(self.dir.join("manifest.json"))?;
        f.write_all(&bytes)?;
        Ok(())
    }
}

/// A single-panel line plot on a 800x600 canvas.
pub struct SvgPlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    /// (points, css color) per curve.
    pub lines: Vec<(Vec<(f64, f64)>, &'static str)>,
    /// (x, y, css color) filled dots.
    pub markers: Vec<(f64, f64, &'static str)>,
}

const W: f64 = 800.0;
const H: f64 = 600.0;
const ML: f64 = 72.0; // left margin, room for y tick labels
const MR: f64 = 24.0;
const MT: f64 = 40.0;
const MB: f64 = 56.0;

impl SvgPlot {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        SvgPlot {
            title: title.to_string(),
            x_label: x_label.to_string(),
            y_label: y_label.to_string(),
            lines: Vec::new(),
            markers: Vec::new(),
        }
    }

    fn bounds(&self) -> (f64, f64, f64, f64) {
        let mut xs: Vec<f64> = Vec::new();
        let mut ys: Vec<f64> = Vec::new();
        for (pts, _) in &self.lines {
            for &(x, y) in pts {
                xs.push(x);
                ys.push(y);
            }
        }
        for &(x, y, _) in &self.markers {
            xs.push(x);
            ys.push(y);
        }
        let fold = |v: &[f64], init: f64, f: fn(f64, f64) -> f64| v.iter().copied().fold(init, f);
        let (mut x0, mut x1) = (fold(&xs, f64::INFINITY, f64::min), fold(&xs, f64::NEG_INFINITY, f64::max));
        let (mut y0, mut y1) = (fold(&ys, f64::INFINITY, f64::min), fold(&ys, f64::NEG_INFINITY, f64::max));
        if !x0.is_finite() || x0 == x1 {
            x0 -= 1.0;
            x1 += 1.0;
        }
        if !y0.is_finite() || y0 == y1 {
            y0 -= 1.0;
            y1 += 1.0;
        }
        let (px, py) = (0.04 * (x1 - x0), 0.06 * (y1 - y0));
        (x0 - px, x1 + px, y0 - py, y1 + py)
    }

    pub fn render(&self) -> String {
        let (x0, x1, y0, y1) = self.bounds();
        let sx = |x: f64| ML + (x - x0) / (x1 - x0) * (W - ML - MR);
        let sy = |y: f64| H - MB - (y - y0) / (y1 - y0) * (H - MT - MB);

        let mut s = String::new();
        s.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {W} {H}\" \
             font-family=\"sans-serif\" font-size=\"14\">\n"
        ));
        s.push_str(&format!("<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n"));
        s.push_str(&format!(
            "<text x=\"{:.2}\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">{}</text>\n",
            (ML + W - MR) / 2.0,
            xml_escape(&self.title)
        ));

        // Frame.
        s.push_str(&format!(
            "<rect x=\"{ML}\" y=\"{MT}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"black\"/>\n",
            W - ML - MR,
            H - MT - MB
        ));

        // Ticks: five per axis, value labels trimmed.
        for i in 0..=4 {
            let fx = x0 + (x1 - x0) * i as f64 / 4.0;
            let px = sx(fx);
            s.push_str(&format!(
                "<line x1=\"{px:.2}\" y1=\"{:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
                H - MB,
                H - MB + 6.0
            ));
            s.push_str(&format!(
                "<text x=\"{px:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>\n",
                H - MB + 22.0,
                tick_label(fx)
            ));
            let fy = y0 + (y1 - y0) * i as f64 / 4.0;
            let py = sy(fy);
            s.push_str(&format!(
                "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{ML}\" y2=\"{py:.2}\" stroke=\"black\"/>\n",
                ML - 6.0
            ));
            s.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>\n",
                ML - 10.0,
                py + 5.0,
                tick_label(fy)
            ));
        }

        // Axis labels.
        s.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>\n",
            (ML + W - MR) / 2.0,
            H - 12.0,
            xml_escape(&self.x_label)
        ));
        s.push_str(&format!(
            "<text x=\"18\" y=\"{:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.2})\">{}</text>\n",
            (MT + H - MB) / 2.0,
            (MT + H - MB) / 2.0,
            xml_escape(&self.y_label)
        ));

        for (pts, color) in &self.lines {
            let mut d = String::new();
            for &(x, y) in pts {
                if !d.is_empty() {
                    d.push(' ');
                }
                d.push_str(&format!("{:.2},{:.2}", sx(x), sy(y)));
            }
            s.push_str(&format!(
                "<polyline points=\"{d}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n"
            ));
        }
        for &(x, y, color) in &self.markers {
            s.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"{color}\"/>\n",
                sx(x),
                sy(y)
            ));
        }
        s.push_str("</svg>\n");
        s
    }
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if a >= 0.01 && a < 10000.0 {
        format!("{v:.3}")
    } else {
        format!("{v:.2e}")
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
