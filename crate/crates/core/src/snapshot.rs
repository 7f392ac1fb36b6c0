//! Line-oriented step-log files.
//!
//! ```text
//! # pa-edgestep-log v1
//! p=0.5 seed=42 t=4
//! V 1
//! E 2 1
//! E 1 1
//! ```
//!
//! One record per step `s = 2..=t`. Paths ending in `.gz` are gzip-compressed
//! with identical contents.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use flate2::read::GzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;

use crate::error::{Error, Result};
use crate::growth::{GrowthGraph, ModelParams, StepLog, StepRecord, VertexId};

pub const MAGIC: &str = "# pa-edgestep-log v1";

fn is_gzip(path: &Path) -> bool {
    path.extension().is_some_and(|ext| ext == "gz")
}

pub fn write_log_to<W: Write>(log: &StepLog, mut out: W) -> Result<()> {
    let ModelParams { p, seed, .. } = log.params;
    writeln!(out, "{MAGIC}")?;
    writeln!(out, "p={p} seed={seed} t={}", log.horizon())?;
    for record in &log.records {
        match record {
            StepRecord::Vertex { target } => writeln!(out, "V {target}")?,
            StepRecord::Edge { u, w } => writeln!(out, "E {u} {w}")?,
        }
    }
    out.flush()?;
    Ok(())
}

/// Writes `log` to `path`, gzip-compressed when the path ends in `.gz`.
pub fn write_snapshot(log: &StepLog, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::file(path, e))?;
    if is_gzip(path) {
        let mut encoder = GzEncoder::new(BufWriter::new(file), Compression::default());
        write_log_to(log, &mut encoder)?;
        encoder.finish()?.flush()?;
    } else {
        write_log_to(log, BufWriter::new(file))?;
    }
    Ok(())
}

/// Writes the log of `graph`, recovered from its endpoints and birth steps.
pub fn write_graph_snapshot(
    graph: &GrowthGraph,
    params: ModelParams,
    path: impl AsRef<Path>,
) -> Result<()> {
    write_snapshot(&StepLog::from_graph(graph, params), path)
}

fn parse_header(line: &str, number: usize) -> Result<(f64, u64, u64)> {
    let mut p = None;
    let mut seed = None;
    let mut t = None;
    for field in line.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| Error::parse(number, format!("malformed header field `{field}`")))?;
        let bad = |what: &str| Error::parse(number, format!("malformed {what} `{value}`"));
        match key {
            "p" => p = Some(value.parse::<f64>().map_err(|_| bad("p"))?),
            "seed" => seed = Some(value.parse::<u64>().map_err(|_| bad("seed"))?),
            "t" => t = Some(value.parse::<u64>().map_err(|_| bad("t"))?),
            other => return Err(Error::parse(number, format!("unknown header key `{other}`"))),
        }
    }
    match (p, seed, t) {
        (Some(p), Some(seed), Some(t)) => Ok((p, seed, t)),
        _ => Err(Error::parse(number, "header must define p, seed and t")),
    }
}

fn parse_id(token: Option<&str>, number: usize) -> Result<VertexId> {
    let token = token.ok_or_else(|| Error::parse(number, "missing vertex id"))?;
    token
        .parse::<u32>()
        .ok()
        .filter(|&v| v >= 1)
        .map(VertexId)
        .ok_or_else(|| Error::parse(number, format!("invalid vertex id `{token}`")))
}

/// Parses a log and replays it, validating every record against the graph so far.
pub fn read_log_from<R: BufRead>(input: R) -> Result<(GrowthGraph, StepLog)> {
    let mut lines = input.lines();
    let mut number = 1;

    let first = lines.next().transpose()?.unwrap_or_default();
    if first.trim_end() != MAGIC {
        return Err(Error::parse(number, format!("expected `{MAGIC}`")));
    }

    number += 1;
    let header = lines
        .next()
        .transpose()?
        .ok_or_else(|| Error::parse(number, "missing parameter header"))?;
    let (p, seed, t) = parse_header(&header, number)?;
    let params = ModelParams::new(p, t, seed).map_err(|e| Error::parse(number, e.to_string()))?;

    let mut graph = GrowthGraph::with_capacity(t, true);
    let mut log = StepLog::new(params);
    log.records.reserve(t as usize - 1);
    for line in lines {
        let line = line?;
        number += 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let record = match tokens.next() {
            Some("V") => StepRecord::Vertex {
                target: parse_id(tokens.next(), number)?,
            },
            Some("E") => StepRecord::Edge {
                u: parse_id(tokens.next(), number)?,
                w: parse_id(tokens.next(), number)?,
            },
            Some(tag) => return Err(Error::parse(number, format!("unknown record tag `{tag}`"))),
            None => unreachable!(),
        };
        if tokens.next().is_some() {
            return Err(Error::parse(number, "trailing fields after record"));
        }
        if log.horizon() >= t {
            return Err(Error::parse(number, format!("more records than t = {t} allows")));
        }
        graph
            .apply(record)
            .map_err(|e| Error::parse(number, e.to_string()))?;
        log.records.push(record);
    }
    if log.horizon() != t {
        return Err(Error::parse(
            number,
            format!("log ends at step {} but header declares t = {t}", log.horizon()),
        ));
    }
    Ok((graph, log))
}

/// Reads a log file (gzip when the path ends in `.gz`) and replays it.
pub fn read_snapshot(path: impl AsRef<Path>) -> Result<(GrowthGraph, StepLog)> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::file(path, e))?;
    if is_gzip(path) {
        read_log_from(BufReader::new(GzDecoder::new(file)))
    } else {
        read_log_from(BufReader::new(file))
    }
}
