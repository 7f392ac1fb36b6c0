//! Simulation laboratory for preferential attachment with edge-steps.
//!
//! - [`growth`]: the generator, step logs and replay.
//! - [`snapshot`]: the text log format.
//! - [`observables`]: cherries, triangles, clustering, cliques, degrees.
//! - [`theory`]: closed-form exponents and the degree normalizer.
//! - [`oracle`]: exact enumeration of the process law for tiny horizons.
//! - [`experiments`]: seeded ensembles, exponent fits and diagnostics.

pub mod error;
pub mod experiments;
pub mod growth;
pub mod observables;
pub mod oracle;
pub mod par;
pub mod rng;
pub mod simple;
pub mod snapshot;
pub mod theory;

pub use error::{Error, Result};
pub use growth::{generate, GrowthGraph, ModelParams, StepLog, StepRecord, Trajectory, VertexId};
pub use par::Execution;
pub use simple::SimpleGraph;
