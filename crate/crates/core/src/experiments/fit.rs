//! Log-log regression of ensemble means against the theoretical exponents.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::observables::ObservableRecord;
use crate::rng::StreamRng;
use crate::theory;

pub const BOOTSTRAP_RESAMPLES: usize = 200;
const BOOTSTRAP_SEED: u64 = 0x05EE_DF17;

/// A column of [`ObservableRecord`] that can be fitted against `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitObservable {
    Cherries,
    CherriesMulti,
    Triangles,
    Tau,
    Clique,
    CliqueExact,
    MaxDegree,
    Vertices,
    Gamma1,
}

impl FitObservable {
    pub const ALL: [FitObservable; 9] = [
        FitObservable::Cherries,
        FitObservable::CherriesMulti,
        FitObservable::Triangles,
        FitObservable::Tau,
        FitObservable::Clique,
        FitObservable::CliqueExact,
        FitObservable::MaxDegree,
        FitObservable::Vertices,
        FitObservable::Gamma1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FitObservable::Cherries => "cherries",
            FitObservable::CherriesMulti => "cherries_multi",
            FitObservable::Triangles => "triangles",
            FitObservable::Tau => "tau",
            FitObservable::Clique => "clique",
            FitObservable::CliqueExact => "clique_exact",
            FitObservable::MaxDegree => "max_degree",
            FitObservable::Vertices => "n_vertices",
            FitObservable::Gamma1 => "gamma_t_1",
        }
    }

    pub fn value(self, record: &ObservableRecord) -> Option<f64> {
        match self {
            FitObservable::Cherries => Some(record.cherries_simple as f64),
            FitObservable::CherriesMulti => Some(record.cherries_multi as f64),
            FitObservable::Triangles => record.triangles.map(|v| v as f64),
            FitObservable::Tau => record.tau,
            FitObservable::Clique => record.clique_lb.map(|v| v as f64),
            FitObservable::CliqueExact => record.clique_exact.map(|v| v as f64),
            FitObservable::MaxDegree => Some(record.max_degree as f64),
            FitObservable::Vertices => Some(record.n_vertices as f64),
            FitObservable::Gamma1 => Some(record.gamma_t_1 as f64),
        }
    }

    /// Growth exponent predicted for this observable. The clustering
    /// coefficient decays, so its exponent is `-gamma(p)`.
    pub fn theory_exponent(self, p: f64) -> f64 {
        match self {
            FitObservable::Cherries | FitObservable::CherriesMulti => theory::cherry_exponent(p),
            FitObservable::Triangles => theory::triangle_exponent(p),
            FitObservable::Tau => -theory::gamma(p),
            FitObservable::Clique | FitObservable::CliqueExact => theory::alpha(p),
            FitObservable::MaxDegree | FitObservable::Gamma1 => theory::c_p(p),
            FitObservable::Vertices => 1.0,
        }
    }
}

impl fmt::Display for FitObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FitObservable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cherries_simple" => return Ok(FitObservable::Cherries),
            "clique_lb" | "clique_greedy" => return Ok(FitObservable::Clique),
            "vertices" => return Ok(FitObservable::Vertices),
            _ => {}
        }
        Self::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| Error::UnknownStatistic(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentFit {
    pub observable: FitObservable,
    pub p: f64,
    pub slope: f64,
    pub intercept: f64,
    /// Bootstrap standard deviation of the slope over replica resamples.
    pub slope_stderr: f64,
    pub r_squared: f64,
    pub theory_exponent: f64,
    pub grid_points: usize,
    /// Smallest number of replicas behind any grid point.
    pub replicas: usize,
    /// Grid times dropped because their mean was not positive.
    pub dropped_t: Vec<u64>,
    /// Rows excluded because the observable was undefined or not computed.
    pub excluded_rows: usize,
}

impl ExponentFit {
    pub fn deviation(&self) -> f64 {
        self.slope - self.theory_exponent
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares of `y` on `x`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> LineFit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    LineFit {
        slope,
        intercept,
        r_squared,
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Fits `log(mean) = intercept + slope * log(t)` over grid points, each a
/// time with its replica values. Non-positive means are dropped; at least
/// three points must survive.
pub fn fit_power_law(points: &[(u64, Vec<f64>)]) -> Result<(LineFit, f64, Vec<u64>)> {
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for (t, values) in points {
        if values.is_empty() || mean(values) <= 0.0 {
            dropped.push(*t);
        } else {
            kept.push((*t, values.as_slice()));
        }
    }
    if kept.len() < 3 {
        return Err(Error::Fit(format!(
            "{} grid points with positive mean (dropped t = {dropped:?}); at least 3 are required",
            kept.len()
        )));
    }
    let xs: Vec<f64> = kept.iter().map(|(t, _)| (*t as f64).ln()).collect();
    let ys: Vec<f64> = kept.iter().map(|(_, v)| mean(v).ln()).collect();
    let line = least_squares(&xs, &ys);

    let mut rng = StreamRng::seed_from_u64(BOOTSTRAP_SEED);
    let mut slopes = Vec::with_capacity(BOOTSTRAP_RESAMPLES);
    let mut resampled = Vec::new();
    for _ in 0..BOOTSTRAP_RESAMPLES {
        let (mut bx, mut by) = (Vec::new(), Vec::new());
        for (x, (_, values)) in xs.iter().zip(&kept) {
            resampled.clear();
            resampled.extend((0..values.len()).map(|_| values[rng.random_range(0..values.len())]));
            let m = mean(&resampled);
            if m > 0.0 {
                bx.push(*x);
                by.push(m.ln());
            }
        }
        if bx.len() >= 3 {
            slopes.push(least_squares(&bx, &by).slope);
        }
    }
    let stderr = if slopes.len() > 1 {
        let m = mean(&slopes);
        (slopes.iter().map(|s| (s - m).powi(2)).sum::<f64>() / (slopes.len() - 1) as f64).sqrt()
    } else {
        0.0
    };
    Ok((line, stderr, dropped))
}

/// Replica values per grid time for `observable` at `p`, plus the count of
/// rows where it was undefined.
pub fn collect_series(records: &[ObservableRecord], observable: FitObservable, p: f64) -> (Vec<(u64, Vec<f64>)>, usize) {
    let mut by_t: BTreeMap<u64, Vec<f64>> = BTreeMap::new();
    let mut excluded = 0;
    for record in records.iter().filter(|r| (r.p - p).abs() < 1e-12) {
        match observable.value(record) {
            Some(v) => by_t.entry(record.t).or_default().push(v),
            None => excluded += 1,
        }
    }
    (by_t.into_iter().collect(), excluded)
}

pub fn fit_exponent(records: &[ObservableRecord], observable: FitObservable, p: f64) -> Result<ExponentFit> {
    let (series, excluded_rows) = collect_series(records, observable, p);
    let (line, slope_stderr, dropped_t) = fit_power_law(&series)?;
    let replicas = series
        .iter()
        .filter(|(t, _)| !dropped_t.contains(t))
        .map(|(_, v)| v.len())
        .min()
        .unwrap_or(0);
    Ok(ExponentFit {
        observable,
        p,
        slope: line.slope,
        intercept: line.intercept,
        slope_stderr,
        r_squared: line.r_squared,
        theory_exponent: observable.theory_exponent(p),
        grid_points: series.len() - dropped_t.len(),
        replicas,
        dropped_t,
        excluded_rows,
    })
}
