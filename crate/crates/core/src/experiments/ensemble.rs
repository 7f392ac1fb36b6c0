//! Resumable `(p, t, replica)` sweeps.
//!
//! Every cell is an independent trajectory seeded by
//! `derive_seed(master_seed, [p_index, t_index, replica])`. Cells run on a
//! worker pool; a single writer appends finished rows to the CSV, and rows
//! whose `(p, seed, t)` key is already present are never recomputed. When the
//! sweep completes the file is rewritten in canonical cell order, so an
//! interrupted and resumed sweep ends with the same rows as an uninterrupted
//! one (only `wall_millis` differs).

use std::collections::{HashMap, HashSet};
use std::fs::{File, OpenOptions};
use std::path::Path;
use std::sync::mpsc;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::growth::{ModelParams, Trajectory};
use crate::observables::{measure, MeasureOptions, ObservableRecord};
use crate::par::{self, Execution};
use crate::rng::derive_seed;

use super::config::{Measurement, SweepConfig};

/// Dedup key of a row: `(p bits, seed, t)`.
pub type RowKey = (u64, u64, u64);

pub fn row_key(record: &ObservableRecord) -> RowKey {
    (record.p.to_bits(), record.seed, record.t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub p_index: usize,
    pub t_index: usize,
    pub replica: u64,
    pub p: f64,
    pub t: u64,
    pub seed: u64,
}

impl Cell {
    /// Measurement times of this cell: snapshots below `t`, then `t`.
    pub fn times(&self, snapshots: &[u64]) -> Vec<u64> {
        let mut times: Vec<u64> = snapshots.iter().copied().filter(|&s| s < self.t).collect();
        times.sort_unstable();
        times.dedup();
        times.push(self.t);
        times
    }
}

/// All cells in canonical order: by `p`, then `t`, then replica.
pub fn cells(config: &SweepConfig) -> Vec<Cell> {
    let mut out = Vec::new();
    for (p_index, &p) in config.p_values.iter().enumerate() {
        for (t_index, &t) in config.t_grid.iter().enumerate() {
            for replica in 0..config.replicas {
                out.push(Cell {
                    p_index,
                    t_index,
                    replica,
                    p,
                    t,
                    seed: derive_seed(config.master_seed, &[p_index as u64, t_index as u64, replica]),
                });
            }
        }
    }
    out
}

fn measure_options(config: &SweepConfig) -> MeasureOptions {
    MeasureOptions {
        triangles: config.measures(Measurement::Triangles),
        clique_pool: config
            .measures(Measurement::Clique)
            .then_some(config.clique_pool_k),
        exact_clique: config.measures(Measurement::CliqueExact),
        clique_budget: config.clique_budget,
        // Parallelism lives at the cell level.
        exec: Execution::Sequential,
    }
}

/// Runs one cell, skipping measurement times whose rows already exist.
pub fn run_cell(cell: &Cell, config: &SweepConfig, existing: &HashSet<RowKey>) -> Vec<ObservableRecord> {
    let params = ModelParams {
        p: cell.p,
        t_max: cell.t,
        seed: cell.seed,
    };
    let options = measure_options(config);
    let mut trajectory = Trajectory::resume(
        crate::growth::GrowthGraph::with_capacity(cell.t, true),
        params.p,
        params.seed,
        false,
    );
    let start = Instant::now();
    let mut rows = Vec::new();
    for time in cell.times(&config.snapshot_times) {
        trajectory.run_to(time);
        if existing.contains(&(cell.p.to_bits(), cell.seed, time)) {
            continue;
        }
        let mut record = measure(trajectory.graph(), cell.p, cell.seed, &options);
        record.wall_millis = start.elapsed().as_millis() as u64;
        rows.push(record);
    }
    rows
}

/// Runs every cell not already complete in `existing`, handing each cell's
/// rows to `sink` from the calling thread (the single writer).
pub fn run_ensemble<F>(config: &SweepConfig, existing: &HashSet<RowKey>, mut sink: F) -> Result<usize>
where
    F: FnMut(Vec<ObservableRecord>) -> Result<()>,
{
    config.validate()?;
    let pending: Vec<Cell> = cells(config)
        .into_iter()
        .filter(|c| {
            c.times(&config.snapshot_times)
                .iter()
                .any(|&t| !existing.contains(&(c.p.to_bits(), c.seed, t)))
        })
        .collect();
    let count = pending.len();
    let mut first_error = None;
    std::thread::scope(|scope| {
        let (tx, rx) = mpsc::channel();
        let pending = &pending;
        scope.spawn(move || {
            par::with_workers(config.workers, || {
                let exec = if config.workers == Some(1) {
                    Execution::Sequential
                } else {
                    Execution::Parallel
                };
                par::for_each(pending, exec, |cell| {
                    // The receiver only goes away after every sender is dropped.
                    let _ = tx.send(run_cell(cell, config, existing));
                });
            });
        });
        for rows in rx {
            if first_error.is_none() {
                if let Err(e) = sink(rows) {
                    first_error = Some(e);
                }
            }
        }
    });
    match first_error {
        Some(e) => Err(e),
        None => Ok(count),
    }
}

/// In-memory sweep, rows in canonical order.
pub fn collect_ensemble(config: &SweepConfig) -> Result<Vec<ObservableRecord>> {
    let mut rows = Vec::new();
    run_ensemble(config, &HashSet::new(), |batch| {
        rows.extend(batch);
        Ok(())
    })?;
    sort_canonical(config, &mut rows);
    Ok(rows)
}

pub fn read_records(path: impl AsRef<Path>) -> Result<Vec<ObservableRecord>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::file(path, e))?;
    let mut reader = csv::Reader::from_reader(file);
    reader
        .deserialize()
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(Error::from)
}

pub fn write_records(path: impl AsRef<Path>, records: &[ObservableRecord]) -> Result<()> {
    let path = path.as_ref();
    let tmp = path.with_extension("csv.tmp");
    {
        let file = File::create(&tmp).map_err(|e| Error::file(&tmp, e))?;
        let mut writer = csv::Writer::from_writer(file);
        for record in records {
            writer.serialize(record)?;
        }
        writer.flush()?;
    }
    std::fs::rename(&tmp, path).map_err(|e| Error::file(path, e))
}

/// Canonical order: config cells first (by `p`, `t`, replica, measurement
/// time), then any foreign rows by `(p, seed, t)`.
pub fn sort_canonical(config: &SweepConfig, records: &mut [ObservableRecord]) {
    let order: HashMap<(u64, u64), usize> = cells(config)
        .iter()
        .enumerate()
        .map(|(i, c)| ((c.p.to_bits(), c.seed), i))
        .collect();
    records.sort_by(|a, b| {
        let rank = |r: &ObservableRecord| order.get(&(r.p.to_bits(), r.seed)).copied().unwrap_or(usize::MAX);
        rank(a)
            .cmp(&rank(b))
            .then(a.p.total_cmp(&b.p))
            .then(a.seed.cmp(&b.seed))
            .then(a.t.cmp(&b.t))
    });
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnsembleSummary {
    pub cells_run: usize,
    pub rows_written: usize,
    pub rows_total: usize,
}

/// Runs the sweep against `config.output_csv`, resuming from existing rows.
pub fn run_ensemble_to_csv(config: &SweepConfig) -> Result<EnsembleSummary> {
    let path = &config.output_csv;
    let mut existing_rows = if path.exists() {
        read_records(path)?
    } else {
        Vec::new()
    };
    let existing: HashSet<RowKey> = existing_rows.iter().map(row_key).collect();

    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Error::file(path, e))?;
    let needs_header = file.metadata().map(|m| m.len() == 0).unwrap_or(true);
    let mut writer = csv::WriterBuilder::new()
        .has_headers(needs_header)
        .from_writer(file);

    let mut written = Vec::new();
    let cells_run = run_ensemble(config, &existing, |rows| {
        for row in &rows {
            writer.serialize(row)?;
        }
        writer.flush()?;
        written.extend(rows);
        Ok(())
    })?;
    drop(writer);

    let rows_written = written.len();
    existing_rows.extend(written);
    let mut seen = HashSet::new();
    existing_rows.retain(|r| seen.insert(row_key(r)));
    sort_canonical(config, &mut existing_rows);
    write_records(path, &existing_rows)?;
    Ok(EnsembleSummary {
        cells_run,
        rows_written,
        rows_total: existing_rows.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(dir: &Path) -> SweepConfig {
        SweepConfig {
            p_values: vec![0.5],
            t_grid: vec![50, 100, 200],
            replicas: 2,
            master_seed: 11,
            observables: vec![Measurement::Triangles, Measurement::Clique],
            clique_pool_k: 200,
            clique_budget: 1_000_000,
            snapshot_times: vec![],
            output_csv: dir.join("records.csv"),
            report_dir: None,
            workers: Some(2),
        }
    }

    fn strip_time(mut rows: Vec<ObservableRecord>) -> Vec<ObservableRecord> {
        for r in &mut rows {
            r.wall_millis = 0;
        }
        rows
    }

    #[test]
    fn cardinality_and_snapshots() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = config(dir.path());
        let rows = collect_ensemble(&cfg).unwrap();
        assert_eq!(rows.len(), 6);

        cfg.snapshot_times = vec![25, 100];
        let rows = collect_ensemble(&cfg).unwrap();
        // t = 50: {25, 50}; t = 100: {25, 100}; t = 200: {25, 100, 200}.
        assert_eq!(rows.len(), 2 * (2 + 2 + 3));
        let keys: HashSet<RowKey> = rows.iter().map(row_key).collect();
        assert_eq!(keys.len(), rows.len());
    }

    #[test]
    fn seeds_are_order_independent() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = config(dir.path());
        let mut wider = cfg.clone();
        wider.p_values.push(0.9);
        wider.replicas = 3;
        let base: Vec<u64> = cells(&cfg).iter().map(|c| c.seed).collect();
        let extended: HashSet<u64> = cells(&wider).iter().map(|c| c.seed).collect();
        assert!(base.iter().all(|s| extended.contains(s)));
        assert_eq!(collect_ensemble(&cfg).unwrap().len(), 6);

        let mut sequential = cfg.clone();
        sequential.workers = Some(1);
        assert_eq!(
            strip_time(collect_ensemble(&cfg).unwrap()),
            strip_time(collect_ensemble(&sequential).unwrap())
        );
    }

    #[test]
    fn rerun_adds_no_duplicates() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = config(dir.path());
        let first = run_ensemble_to_csv(&cfg).unwrap();
        assert_eq!((first.cells_run, first.rows_total), (6, 6));
        let second = run_ensemble_to_csv(&cfg).unwrap();
        assert_eq!((second.cells_run, second.rows_written, second.rows_total), (0, 0, 6));
    }

    #[test]
    fn resumed_sweep_matches_uninterrupted() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = config(dir.path());
        cfg.snapshot_times = vec![30];
        run_ensemble_to_csv(&cfg).unwrap();
        let full = strip_time(read_records(&cfg.output_csv).unwrap());

        // Simulate an interruption: keep a scattered subset of rows.
        let partial: Vec<_> = full.iter().cloned().enumerate().filter(|(i, _)| i % 3 == 1).map(|(_, r)| r).collect();
        write_records(&cfg.output_csv, &partial).unwrap();
        let summary = run_ensemble_to_csv(&cfg).unwrap();
        assert_eq!(summary.rows_total, full.len());
        assert_eq!(strip_time(read_records(&cfg.output_csv).unwrap()), full);
    }

    #[test]
    fn pure_vertex_steps_have_no_triangles() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = config(dir.path());
        cfg.p_values = vec![1.0, 0.3];
        let rows = collect_ensemble(&cfg).unwrap();
        for r in &rows {
            assert!(3 * r.triangles.unwrap() <= r.cherries_simple);
            if let Some(tau) = r.tau {
                assert!((0.0..=1.0).contains(&tau));
            }
            if r.p == 1.0 {
                assert_eq!(r.triangles, Some(0));
            }
        }
    }
}
