//! Martingale check for `X_s(i) = d_s(i) / phi(s)`.
//!
//! One trajectory is grown to `t0` and frozen; `M` independent
//! continuations then run to `t1`. Under the model, `E[X_{t1}(i) | G_{t0}]`
//! equals `X_{t0}(i)`, so the mean increment must vanish within its
//! standard error. A wrong normalizer such as `t^{c_p}` leaves a drift.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::growth::{ModelParams, Trajectory, VertexId};
use crate::par::{self, Execution};
use crate::rng::derive_seed;
use crate::theory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalizer {
    /// `phi(t)`, the exact compensator.
    Phi,
    /// `t^{c_p}`, which only matches `phi` up to a constant factor.
    PowerLaw,
}

impl Normalizer {
    fn table(self, t_max: u64, p: f64) -> Vec<f64> {
        match self {
            Normalizer::Phi => theory::phi_table(t_max, p),
            Normalizer::PowerLaw => {
                let c = theory::c_p(p);
                (1..=t_max).map(|t| (t as f64).powf(c)).collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MartingaleConfig {
    pub p: f64,
    pub t0: u64,
    pub t1: u64,
    pub replicas: usize,
    pub master_seed: u64,
    pub normalizer: Normalizer,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexDrift {
    pub vertex: VertexId,
    pub x_t0: f64,
    pub mean_x_t1: f64,
    /// Mean of `X_{t1} - X_{t0}` over continuations.
    pub mean_increment: f64,
    pub stderr: f64,
    /// `|mean_increment| <= 3 stderr` (plus a rounding floor).
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MartingaleReport {
    pub config: MartingaleConfig,
    /// The first vertex and the youngest vertex alive at `t0`.
    pub vertices: Vec<VertexDrift>,
    pub pass: bool,
}

pub fn martingale_diagnostic(config: &MartingaleConfig, exec: Execution) -> Result<MartingaleReport> {
    if config.t0 < 1 || config.t0 >= config.t1 {
        return Err(Error::Config(format!(
            "martingale diagnostic needs 1 <= t0 < t1, got t0 = {}, t1 = {}",
            config.t0, config.t1
        )));
    }
    if config.replicas < 2 {
        return Err(Error::Config("martingale diagnostic needs at least 2 replicas".into()));
    }
    let params = ModelParams::new(config.p, config.t1, config.master_seed)?;
    let mut base = Trajectory::lean(&ModelParams {
        seed: derive_seed(config.master_seed, &[0]),
        ..params
    })?;
    base.run_to(config.t0);
    let frozen = base.graph().clone();
    let youngest = VertexId(frozen.n_vertices() as u32);
    let mut vertices = vec![VertexId::FIRST];
    if youngest != VertexId::FIRST {
        vertices.push(youngest);
    }

    let norm = config.normalizer.table(config.t1, config.p);
    let x_t0: Vec<f64> = vertices
        .iter()
        .map(|v| frozen.degrees()[v.index()] as f64 / norm[config.t0 as usize - 1])
        .collect();

    let finals: Vec<Vec<f64>> = par::map_range(config.replicas, exec, |r| {
        let seed = derive_seed(config.master_seed, &[1, r as u64]);
        let mut continuation = Trajectory::resume(frozen.clone(), config.p, seed, false);
        continuation.run_to(config.t1);
        vertices
            .iter()
            .map(|v| continuation.graph().degrees()[v.index()] as f64 / norm[config.t1 as usize - 1])
            .collect()
    });

    let m = config.replicas as f64;
    let drifts: Vec<VertexDrift> = vertices
        .iter()
        .enumerate()
        .map(|(k, &vertex)| {
            let increments: Vec<f64> = finals.iter().map(|f| f[k] - x_t0[k]).collect();
            let mean = increments.iter().sum::<f64>() / m;
            let var = increments.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (m - 1.0);
            let stderr = (var / m).sqrt();
            let floor = 1e-9 * x_t0[k].abs().max(1.0);
            VertexDrift {
                vertex,
                x_t0: x_t0[k],
                mean_x_t1: x_t0[k] + mean,
                mean_increment: mean,
                stderr,
                pass: mean.abs() <= 3.0 * stderr + floor,
            }
        })
        .collect();
    let pass = drifts.iter().all(|d| d.pass);
    Ok(MartingaleReport {
        config: config.clone(),
        vertices: drifts,
        pass,
    })
}
