//! JSON summary and plot-ready series.
//!
//! `summary.json` carries everything; `fits.json` and `diagnostics.json`
//! hold its two halves, and `series_<observable>_p<p>.csv` lists
//! `t,mean,stderr,count` per grid time. Exponents are growth rates in `t`:
//! the clustering coefficient decays, so its fitted and theoretical
//! exponents are negative.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::degtail::DegreeTailReport;
use super::fit::{collect_series, ExponentFit, FitObservable};
use super::martingale::MartingaleReport;
use crate::error::{Error, Result};
use crate::observables::ObservableRecord;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    pub martingale: Vec<MartingaleReport>,
    pub degree_tail: Vec<DegreeTailReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesPoint {
    pub t: u64,
    pub mean: f64,
    pub stderr: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Series {
    pub observable: FitObservable,
    pub p: f64,
    pub points: Vec<SeriesPoint>,
    /// Rows where the observable was undefined or not computed.
    pub excluded_rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentComparison {
    pub observable: FitObservable,
    pub p: f64,
    pub fitted: f64,
    pub stderr: f64,
    pub theory: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub n_records: usize,
    pub p_values: Vec<f64>,
    pub exponents: Vec<ExponentComparison>,
    pub fits: Vec<ExponentFit>,
    pub series: Vec<Series>,
    pub diagnostics: Diagnostics,
}

fn distinct_p(records: &[ObservableRecord]) -> Vec<f64> {
    let mut ps: Vec<f64> = records.iter().map(|r| r.p).collect();
    ps.sort_by(f64::total_cmp);
    ps.dedup();
    ps
}

pub fn series(records: &[ObservableRecord], observable: FitObservable, p: f64) -> Series {
    let (points, excluded_rows) = collect_series(records, observable, p);
    let points = points
        .into_iter()
        .map(|(t, values)| {
            let n = values.len() as f64;
            let mean = values.iter().sum::<f64>() / n;
            let stderr = if values.len() > 1 {
                (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0) / n).sqrt()
            } else {
                0.0
            };
            SeriesPoint {
                t,
                mean,
                stderr,
                count: values.len(),
            }
        })
        .collect();
    Series {
        observable,
        p,
        points,
        excluded_rows,
    }
}

pub fn build_report(records: &[ObservableRecord], fits: &[ExponentFit], diagnostics: &Diagnostics) -> Report {
    let p_values = distinct_p(records);
    let series = p_values
        .iter()
        .flat_map(|&p| {
            FitObservable::ALL
                .into_iter()
                .map(move |o| series(records, o, p))
        })
        .filter(|s| !s.points.is_empty())
        .collect();
    Report {
        n_records: records.len(),
        p_values,
        exponents: fits
            .iter()
            .map(|f| ExponentComparison {
                observable: f.observable,
                p: f.p,
                fitted: f.slope,
                stderr: f.slope_stderr,
                theory: f.theory_exponent,
            })
            .collect(),
        fits: fits.to_vec(),
        series,
        diagnostics: diagnostics.clone(),
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").map_err(|e| Error::file(path, e))
}

/// Writes the summary, fits, diagnostics and series CSVs into `dir`.
pub fn write_report(
    dir: impl AsRef<Path>,
    records: &[ObservableRecord],
    fits: &[ExponentFit],
    diagnostics: &Diagnostics,
) -> Result<Report> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::file(dir, e))?;
    let report = build_report(records, fits, diagnostics);
    write_json(&dir.join("summary.json"), &report)?;
    write_json(&dir.join("fits.json"), &report.fits)?;
    write_json(&dir.join("diagnostics.json"), &report.diagnostics)?;
    for s in &report.series {
        let path = dir.join(format!("series_{}_p{}.csv", s.observable, s.p));
        let mut file = fs::File::create(&path).map_err(|e| Error::file(&path, e))?;
        writeln!(file, "t,mean,stderr,count")?;
        for point in &s.points {
            writeln!(file, "{},{},{},{}", point.t, point.mean, point.stderr, point.count)?;
        }
    }
    Ok(report)
}
