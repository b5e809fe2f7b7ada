//! Report files: `verdict.json`, `spectrum_u0.csv`, `spectrum_u1.csv`,
//! `spectrum.svg` and `gap.csv`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectra::{GapReport, SpectrumReport};
use crate::verdict::VerdictReport;

/// One row of a spectrum CSV. `resolved` is false for eigenvalues outside the
/// resolved band `|Re| <= N^2/4` (truncation-edge modes).
#[derive(Clone, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct SpectrumRow {
    pub re: f64,
    pub im: f64,
    pub is_real: bool,
    pub block_index: Option<usize>,
    pub resolved: bool,
}

pub fn spectrum_rows(s: &SpectrumReport) -> Vec<SpectrumRow> {
    s.eigenvalues
        .iter()
        .map(|e| SpectrumRow {
            re: e.value.re,
            im: e.value.im,
            is_real: e.is_real(s.tol_im),
            block_index: e.block,
            resolved: s.resolved_band.is_none_or(|b| e.value.re.abs() <= b),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct GapRow {
    pub n: usize,
    pub lambda_n: f64,
    /// Ratio to the next term; empty on the last row.
    pub ratio: Option<f64>,
}

pub fn gap_rows(g: &GapReport) -> Vec<GapRow> {
    g.lambda_seq
        .iter()
        .enumerate()
        .map(|(i, &lambda_n)| GapRow {
            n: i + 1,
            lambda_n,
            ratio: g.ratios.get(i).copied(),
        })
        .collect()
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let ctx = || format!("writing {}", path.display());
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::io(ctx(), e.into()))?;
    for row in rows {
        w.serialize(row).map_err(|e| Error::io(ctx(), e.into()))?;
    }
    w.flush().map_err(|e| Error::io(ctx(), e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 48.0;

/// Scatter of both spectra in `asinh` coordinates with the real axis
/// highlighted. Axes are symmetric in `Im` and span the data in `Re`.
pub fn spectrum_svg(u0: Option<&SpectrumReport>, u1: Option<&SpectrumReport>) -> String {
    let sets: Vec<(&str, &str, &SpectrumReport)> = [("u0", "#1f77b4", u0), ("u1", "#d62728", u1)]
        .into_iter()
        .filter_map(|(l, c, s)| s.map(|s| (l, c, s)))
        .collect();
    let pts = || sets.iter().flat_map(|(_, _, s)| s.eigenvalues.iter());
    let xmin = pts().map(|e| e.value.re.asinh()).fold(-1.0, f64::min);
    let xmax = pts().map(|e| e.value.re.asinh()).fold(1.0, f64::max);
    let ymax = pts().map(|e| e.value.im.abs().asinh()).fold(1.0, f64::max);
    let sx = |x: f64| MARGIN + (x.asinh() - xmin) / (xmax - xmin) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT / 2.0 - y.asinh() / ymax * (HEIGHT / 2.0 - MARGIN);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r##"<line x1="{MARGIN}" y1="{y}" x2="{x2}" y2="{y}" stroke="#ff7f0e" stroke-width="3" opacity="0.6"/>"##,
        y = sy(0.0),
        x2 = WIDTH - MARGIN
    );
    let _ = writeln!(
        svg,
        r##"<line x1="{x}" y1="{MARGIN}" x2="{x}" y2="{y2}" stroke="#888" stroke-width="1"/>"##,
        x = sx(0.0),
        y2 = HEIGHT - MARGIN
    );
    for (label, color, s) in &sets {
        for e in &s.eigenvalues {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}" fill-opacity="0.7"><title>{label}: {:.6e} {:+.6e}i</title></circle>"#,
                sx(e.value.re),
                sy(e.value.im),
                e.value.re,
                e.value.im
            );
        }
    }
    for (i, (label, color, _)) in sets.iter().enumerate() {
        let y = 20.0 + 16.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<circle cx="{}" cy="{y}" r="4" fill="{color}"/><text x="{}" y="{}" font-family="sans-serif" font-size="12">{label}</text>"#,
            WIDTH - 90.0,
            WIDTH - 80.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{MARGIN}" y="{}" font-family="sans-serif" font-size="12">asinh(Re) horizontal, asinh(Im) vertical; real axis highlighted</text>"#,
        HEIGHT - 14.0
    );
    svg.push_str("</svg>\n");
    svg
}

/// Writes every report file into `dir` (created if missing) and returns the paths.
pub fn emit_reports(report: &VerdictReport, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
    let mut written = Vec::new();

    let json = dir.join("verdict.json");
    write_text(&json, &(report.to_json()? + "\n"))?;
    written.push(json);

    for (name, s) in [
        ("spectrum_u0.csv", &report.spectrum_u0),
        ("spectrum_u1.csv", &report.spectrum_u1),
    ] {
        if let Some(s) = s {
            let path = dir.join(name);
            write_csv(&path, &spectrum_rows(s))?;
            written.push(path);
        }
    }

    let svg = dir.join("spectrum.svg");
    write_text(
        &svg,
        &spectrum_svg(report.spectrum_u0.as_ref(), report.spectrum_u1.as_ref()),
    )?;
    written.push(svg);

    if let Some(g) = &report.gap_summary {
        let path = dir.join("gap.csv");
        write_csv(&path, &gap_rows(g))?;
        written.push(path);
    }
    Ok(written)
}
