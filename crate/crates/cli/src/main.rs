use std::io::{self, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use pae_core::experiments::{
    degree_tail_diagnostic, fit_exponent, martingale_diagnostic, read_records, run_ensemble_to_csv,
    write_report, DegreeTailConfig, Diagnostics, FitObservable, MartingaleConfig, Normalizer, SweepConfig,
};
use pae_core::observables::{self, MeasureOptions, DEFAULT_CLIQUE_BUDGET};
use pae_core::oracle::{self, Statistic};
use pae_core::{generate, par, snapshot, theory, Execution, ModelParams};

#[derive(Parser)]
#[command(name = "pae", version, about = "Preferential attachment with edge-steps")]
struct Cli {
    /// Run on one thread instead of the rayon pool.
    #[arg(long, global = true)]
    sequential: bool,
    /// Size of the worker pool.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormalizerArg {
    Phi,
    PowerLaw,
}

#[derive(Subcommand)]
enum Command {
    /// Grow one graph and write its step log (gzipped if OUT ends in .gz).
    Generate {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        t: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Measure a snapshot and print one CSV row.
    Observe {
        #[arg(long = "in")]
        input: PathBuf,
        /// Candidate pool for the clique lower bound; 0 skips it.
        #[arg(long, default_value_t = observables::DEFAULT_CLIQUE_POOL)]
        clique_pool: usize,
        #[arg(long)]
        exact_clique: bool,
        #[arg(long, default_value_t = DEFAULT_CLIQUE_BUDGET)]
        clique_budget: u64,
        #[arg(long)]
        no_triangles: bool,
    },
    /// Run an ensemble sweep from a TOML config, then fit and report.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Fit a power law in t to one observable of a sweep CSV.
    Fit {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        observable: FitObservable,
        #[arg(long)]
        p: f64,
    },
    /// Exact expectations by enumerating every outcome (t <= 9).
    Oracle {
        #[arg(long)]
        t: u64,
        /// Exact probability, `num/den` or a finite decimal.
        #[arg(long)]
        p: String,
        /// Statistic name, repeatable; `all` selects every statistic.
        #[arg(long, default_value = "all")]
        statistic: Vec<String>,
    },
    /// Drift of d_t(i)/phi(t) for vertex 1 and the youngest vertex at t0.
    Martingale {
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1)]
        t0: u64,
        #[arg(long)]
        t1: u64,
        #[arg(long)]
        replicas: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = NormalizerArg::Phi)]
        normalizer: NormalizerArg,
    },
    /// Exceedance frequencies of sup_s d_s(i)/phi(s) above lambda / i^c_p.
    Degtail {
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1)]
        i: u32,
        #[arg(long)]
        t: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        lambdas: Vec<f64>,
        #[arg(long)]
        replicas: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Theoretical exponents at p.
    Theory {
        #[arg(long)]
        p: f64,
    },
}

#[derive(serde::Serialize)]
struct TheoryOutput {
    #[serde(flatten)]
    exponents: theory::TheoryExponents,
    p_star: f64,
    gamma_star: f64,
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        bail!("p must lie in [0, 1], got {p}");
    }
    Ok(())
}

fn sweep(config_path: &PathBuf, exec: Execution) -> Result<()> {
    let mut config = SweepConfig::from_file(config_path)
        .with_context(|| format!("loading {}", config_path.display()))?;
    if exec == Execution::Sequential {
        config.workers = Some(1);
    }
    let summary = run_ensemble_to_csv(&config)?;
    eprintln!(
        "ran {} cells, wrote {} rows ({} total) to {}",
        summary.cells_run,
        summary.rows_written,
        summary.rows_total,
        config.output_csv.display()
    );

    let records = read_records(&config.output_csv)?;
    let mut fits = Vec::new();
    println!("observable,p,slope,slope_stderr,theory,r_squared");
    for &p in &config.p_values {
        for observable in FitObservable::ALL {
            // Undefined or uncomputed columns simply have no fit.
            if let Ok(fit) = fit_exponent(&records, observable, p) {
                println!(
                    "{},{},{:.4},{:.4},{:.4},{:.4}",
                    observable, p, fit.slope, fit.slope_stderr, fit.theory_exponent, fit.r_squared
                );
                fits.push(fit);
            }
        }
    }
    if let Some(dir) = &config.report_dir {
        write_report(dir, &records, &fits, &Diagnostics::default())?;
        eprintln!("report written to {}", dir.display());
    }
    Ok(())
}

fn oracle_rows(t: u64, p_text: &str, names: &[String], exec: Execution) -> Result<()> {
    let p = oracle::parse_probability(p_text)?;
    let stats: Vec<Statistic> = if names.iter().any(|n| n == "all") {
        Statistic::ALL.to_vec()
    } else {
        names.iter().map(|n| n.parse()).collect::<Result<_, _>>()?
    };
    let values = oracle::exact_expectations_with(t, &p, &stats, exec)?;
    let mut out = io::stdout().lock();
    writeln!(out, "{}", oracle::CSV_HEADER)?;
    for (stat, value) in stats.iter().zip(&values) {
        writeln!(out, "{}", oracle::csv_row(t, &p, *stat, value))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match cli.command {
        Command::Generate { p, t, seed, out } => {
            let params = ModelParams::new(p, t, seed)?;
            let (graph, log) = generate(&params)?;
            snapshot::write_snapshot(&log, &out)?;
            eprintln!(
                "t={} vertices={} max_degree={} -> {}",
                graph.t(),
                graph.n_vertices(),
                observables::max_degree(&graph).1,
                out.display()
            );
        }
        Command::Observe {
            input,
            clique_pool,
            exact_clique,
            clique_budget,
            no_triangles,
        } => {
            let (graph, log) = snapshot::read_snapshot(&input)?;
            let options = MeasureOptions {
                triangles: !no_triangles,
                clique_pool: (clique_pool > 0).then_some(clique_pool),
                exact_clique,
                clique_budget,
                exec,
            };
            let record = observables::measure(&graph, log.params.p, log.params.seed, &options);
            let mut writer = csv::WriterBuilder::new().has_headers(true).from_writer(io::stdout());
            writer.serialize(&record)?;
            writer.flush()?;
        }
        Command::Sweep { config } => sweep(&config, exec)?,
        Command::Fit { input, observable, p } => {
            let records = read_records(&input)?;
            print_json(&fit_exponent(&records, observable, p)?)?;
        }
        Command::Oracle { t, p, statistic } => oracle_rows(t, &p, &statistic, exec)?,
        Command::Martingale {
            p,
            t0,
            t1,
            replicas,
            seed,
            normalizer,
        } => {
            check_p(p)?;
            let config = MartingaleConfig {
                p,
                t0,
                t1,
                replicas,
                master_seed: seed,
                normalizer: match normalizer {
                    NormalizerArg::Phi => Normalizer::Phi,
                    NormalizerArg::PowerLaw => Normalizer::PowerLaw,
                },
            };
            print_json(&martingale_diagnostic(&config, exec)?)?;
        }
        Command::Degtail {
            p,
            i,
            t,
            lambdas,
            replicas,
            seed,
        } => {
            check_p(p)?;
            let config = DegreeTailConfig {
                p,
                vertex: i,
                t,
                lambdas,
                replicas,
                master_seed: seed,
            };
            print_json(&degree_tail_diagnostic(&config, exec)?)?;
        }
        Command::Theory { p } => {
            check_p(p)?;
            let optimum = theory::gamma_minimizer();
            print_json(&TheoryOutput {
                exponents: theory::TheoryExponents::new(p),
                p_star: optimum.p_star,
                gamma_star: optimum.gamma_star,
            })?;
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let workers = if cli.sequential { Some(1) } else { cli.workers };
    par::with_workers(workers, || run(cli))
}
