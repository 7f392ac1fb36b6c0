use serde::Serialize;

use crate::error::{Error, Result};
use crate::growth::{StepLog, StepRecord, VertexId};
use crate::theory;

/// `d_s(i) / phi(s)` for `s` from the birth of `i` to the end of a log.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeTrajectory {
    pub vertex: VertexId,
    pub birth_step: u64,
    /// `(s, d_s(i) / phi(s))`.
    pub points: Vec<(u64, f64)>,
    pub supremum: f64,
}

impl DegreeTrajectory {
    pub fn running_supremum(&self) -> Vec<f64> {
        self.points
            .iter()
            .scan(f64::NEG_INFINITY, |sup, &(_, x)| {
                *sup = sup.max(x);
                Some(*sup)
            })
            .collect()
    }
}

pub fn normalized_degree_trajectory(log: &StepLog, i: VertexId) -> Result<DegreeTrajectory> {
    let t = log.horizon();
    let phi = theory::phi_table(t, log.params.p);
    let mut alive = 1u32;
    let mut degree = 0u64;
    let mut birth_step = None;
    if i == VertexId::FIRST {
        degree = 2;
        birth_step = Some(1);
    }
    let mut points = Vec::new();
    if birth_step.is_some() {
        points.push((1, degree as f64 / phi[0]));
    }
    for (k, record) in log.records.iter().enumerate() {
        let s = k as u64 + 2;
        match *record {
            StepRecord::Vertex { target } => {
                alive += 1;
                if target == i {
                    degree += 1;
                }
                if alive == i.0 {
                    degree = 1;
                    birth_step = Some(s);
                }
            }
            StepRecord::Edge { u, w } => {
                degree += u64::from(u == i) + u64::from(w == i);
            }
        }
        if birth_step.is_some() {
            points.push((s, degree as f64 / phi[s as usize - 1]));
        }
    }
    let birth_step = birth_step.ok_or(Error::UnknownVertex(i.0))?;
    let supremum = points.iter().map(|&(_, x)| x).fold(f64::NEG_INFINITY, f64::max);
    Ok(DegreeTrajectory {
        vertex: i,
        birth_step,
        points,
        supremum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::growth::{generate, ModelParams};

    #[test]
    fn first_vertex_starts_at_two() {
        let (_, log) = generate(&ModelParams::new(0.5, 200, 3).unwrap()).unwrap();
        let traj = normalized_degree_trajectory(&log, VertexId(1)).unwrap();
        assert_eq!(traj.points[0], (1, 2.0));
        assert_eq!(traj.points.len(), 200);
        assert!(traj.supremum >= 2.0);
        assert_eq!(*traj.running_supremum().last().unwrap(), traj.supremum);
    }

    #[test]
    fn pure_edge_steps_are_constant() {
        let (_, log) = generate(&ModelParams::new(0.0, 1_000, 3).unwrap()).unwrap();
        let traj = normalized_degree_trajectory(&log, VertexId(1)).unwrap();
        for &(_, x) in &traj.points {
            assert!((x - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn defined_from_birth_to_horizon() {
        let params = ModelParams::new(0.6, 500, 9).unwrap();
        let (graph, log) = generate(&params).unwrap();
        let i = VertexId(graph.n_vertices() as u32 / 2);
        let traj = normalized_degree_trajectory(&log, i).unwrap();
        let birth = graph.birth_step(i).unwrap();
        assert_eq!(traj.birth_step, birth);
        assert_eq!(traj.points.first().unwrap().0, birth);
        assert_eq!(traj.points.last().unwrap().0, 500);
        let phi_t = theory::phi(500, params.p);
        let last = traj.points.last().unwrap().1;
        assert!((last - graph.degree(i).unwrap() as f64 / phi_t).abs() < 1e-12);

        let missing = VertexId(graph.n_vertices() as u32 + 1);
        assert!(normalized_degree_trajectory(&log, missing).is_err());
    }
}
