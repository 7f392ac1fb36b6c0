//! Tail of `sup_s d_s(i) / phi(s)` across replicas.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::experiments::fit::least_squares;
use crate::growth::{ModelParams, Trajectory, VertexId};
use crate::par::{self, Execution};
use crate::rng::derive_seed;
use crate::theory;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeTailConfig {
    pub p: f64,
    pub vertex: u32,
    pub t: u64,
    pub lambdas: Vec<f64>,
    pub replicas: usize,
    pub master_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeTailReport {
    pub config: DegreeTailConfig,
    /// Replicas in which the vertex was born by `t`.
    pub counted: usize,
    /// Exceedance level `lambda / i^{c_p}` per lambda.
    pub thresholds: Vec<f64>,
    pub frequencies: Vec<f64>,
    pub monotone: bool,
    /// `ln f(first lambda) - ln f(last lambda)`; a zero frequency enters as
    /// `1 / counted`, which understates the decrease.
    pub log_decrease: f64,
    /// Successive slopes of `ln f` against lambda are non-increasing within
    /// three binomial standard errors.
    pub concave_or_linear: bool,
    /// Minus the least-squares slope of `ln f` on lambda over nonzero frequencies.
    pub decay_rate: Option<f64>,
    pub max_supremum: f64,
    pub min_supremum: f64,
}

/// Running supremum of `d_s(i)/phi(s)` over `s` in `[birth, t]`, `None` if
/// `i` is not born by `t`.
fn supremum(params: &ModelParams, vertex: VertexId, phi: &[f64]) -> Option<f64> {
    let mut trajectory = Trajectory::lean(params).ok()?;
    let mut sup = f64::NEG_INFINITY;
    loop {
        let graph = trajectory.graph();
        let t = graph.t();
        if let Some(&d) = graph.degrees().get(vertex.index()) {
            sup = sup.max(d as f64 / phi[t as usize - 1]);
        }
        if t >= params.t_max {
            break;
        }
        trajectory.step();
    }
    (sup > f64::NEG_INFINITY).then_some(sup)
}

pub fn degree_tail_diagnostic(config: &DegreeTailConfig, exec: Execution) -> Result<DegreeTailReport> {
    if config.vertex == 0 {
        return Err(Error::Config("vertex ids start at 1".into()));
    }
    if config.lambdas.is_empty() || config.replicas == 0 {
        return Err(Error::Config("need at least one lambda and one replica".into()));
    }
    if config.lambdas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("lambdas must be strictly increasing".into()));
    }
    let c = theory::c_p(config.p);
    let scale = (config.vertex as f64).powf(c);
    if let Some(l) = config.lambdas.iter().find(|&&l| l <= 1.0 / scale) {
        return Err(Error::Config(format!("lambda = {l} must exceed i^(-c_p) = {}", 1.0 / scale)));
    }
    let base = ModelParams::new(config.p, config.t, config.master_seed)?;
    let phi = theory::phi_table(config.t, config.p);
    let vertex = VertexId(config.vertex);

    let sups: Vec<f64> = par::map_range(config.replicas, exec, |r| {
        let params = ModelParams {
            seed: derive_seed(config.master_seed, &[r as u64]),
            ..base
        };
        supremum(&params, vertex, &phi)
    })
    .into_iter()
    .flatten()
    .collect();
    let counted = sups.len();
    if counted == 0 {
        return Err(Error::Config(format!("vertex {} was never born by t = {}", config.vertex, config.t)));
    }

    let thresholds: Vec<f64> = config.lambdas.iter().map(|l| l / scale).collect();
    let frequencies: Vec<f64> = thresholds
        .iter()
        .map(|&th| sups.iter().filter(|&&s| s > th).count() as f64 / counted as f64)
        .collect();
    let monotone = frequencies.windows(2).all(|w| w[1] <= w[0]);

    let floor = 1.0 / counted as f64;
    let log_f: Vec<f64> = frequencies.iter().map(|&f| f.max(floor).ln()).collect();
    let log_decrease = log_f[0] - log_f[log_f.len() - 1];

    // Standard error of ln f for a binomial frequency.
    let se: Vec<f64> = frequencies
        .iter()
        .map(|&f| {
            let f = f.max(floor);
            ((1.0 - f) / (f * counted as f64)).sqrt()
        })
        .collect();
    let lambdas = &config.lambdas;
    let concave_or_linear = (1..lambdas.len().saturating_sub(1)).all(|k| {
        let left = (log_f[k] - log_f[k - 1]) / (lambdas[k] - lambdas[k - 1]);
        let right = (log_f[k + 1] - log_f[k]) / (lambdas[k + 1] - lambdas[k]);
        let noise = 3.0 * (se[k - 1] + 2.0 * se[k] + se[k + 1]) / (lambdas[k + 1] - lambdas[k - 1]).min(1.0);
        right <= left + noise
    });

    let nonzero: Vec<(f64, f64)> = lambdas
        .iter()
        .zip(&frequencies)
        .filter(|(_, &f)| f > 0.0)
        .map(|(&l, &f)| (l, f.ln()))
        .collect();
    let decay_rate = (nonzero.len() >= 2).then(|| {
        let (xs, ys): (Vec<f64>, Vec<f64>) = nonzero.into_iter().unzip();
        -least_squares(&xs, &ys).slope
    });

    Ok(DegreeTailReport {
        config: config.clone(),
        counted,
        thresholds,
        frequencies,
        monotone,
        log_decrease,
        concave_or_linear,
        decay_rate,
        max_supremum: sups.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        min_supremum: sups.iter().copied().fold(f64::INFINITY, f64::min),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(lambdas: Vec<f64>) -> DegreeTailConfig {
        DegreeTailConfig {
            p: 0.5,
            vertex: 1,
            t: 2_000,
            lambdas,
            replicas: 2_000,
            master_seed: 5,
        }
    }

    #[test]
    fn frequencies_are_nested() {
        let report = degree_tail_diagnostic(&config(vec![2.5, 3.0, 4.0, 5.0]), Execution::Parallel).unwrap();
        assert!(report.monotone);
        assert_eq!(report.counted, 2_000);
        assert!(report.min_supremum >= 2.0);
        assert!(report.decay_rate.unwrap() > 0.0);
    }

    #[test]
    fn below_every_supremum_everything_exceeds() {
        // Every supremum is at least X_1 = 2.
        let report = degree_tail_diagnostic(&config(vec![1.01, 1.5, 1.99]), Execution::Sequential).unwrap();
        assert_eq!(report.frequencies, vec![1.0, 1.0, 1.0]);
        assert_eq!(report.log_decrease, 0.0);
    }

    #[test]
    fn validates_inputs() {
        assert!(degree_tail_diagnostic(&config(vec![]), Execution::Sequential).is_err());
        assert!(degree_tail_diagnostic(&config(vec![3.0, 2.0]), Execution::Sequential).is_err());
        assert!(degree_tail_diagnostic(&config(vec![0.5]), Execution::Sequential).is_err());
        let mut late = config(vec![3.0]);
        late.vertex = 10_000;
        late.replicas = 10;
        assert!(degree_tail_diagnostic(&late, Execution::Sequential).is_err());
    }
}
