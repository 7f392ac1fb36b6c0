//! Ensembles, exponent fits, diagnostics and reports.

pub mod config;
pub mod degtail;
pub mod ensemble;
pub mod fit;
pub mod martingale;
pub mod report;

pub use config::{Measurement, SweepConfig};
pub use degtail::{degree_tail_diagnostic, DegreeTailConfig, DegreeTailReport};
pub use ensemble::{collect_ensemble, read_records, run_ensemble, run_ensemble_to_csv, EnsembleSummary};
pub use fit::{fit_exponent, fit_power_law, ExponentFit, FitObservable};
pub use martingale::{martingale_diagnostic, MartingaleConfig, MartingaleReport, Normalizer};
pub use report::{build_report, write_report, Diagnostics, Report};
