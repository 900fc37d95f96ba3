//! Command-line front end: thresholds, bounds, exact analysis, Monte
//! Carlo simulation, curve sweeps, and threshold optimization, emitting
//! JSON lines or CSV for plotting and pipelines.
//!
//! Exit codes: 0 success, 2 usage error, 3 I/O error, 4 numerical failure
//! (quadrature error estimate above tolerance).

mod output;

use std::fs::File;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use altchoice::{
    exact_success_prob_with_panels, lower_bound_h, optimal_threshold, optimize_threshold, simulate,
    simulate_best_or_worst, sweep, ClassCounts, ObjectiveSpec, SearchConfig, SimulationConfig,
    DEFAULT_QUAD_PANELS,
};
use output::{write_records, Format, Record};

#[derive(Parser)]
#[command(
    name = "altchoice",
    version,
    about = "Threshold stopping strategies for the k-class alternative best-choice problem"
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write output to FILE instead of standard output
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the bound-maximizing threshold t_k = k^(-1/(k-1)) (1/e for k = 1)
    Threshold {
        /// Number of classes
        #[arg(long)]
        k: u32,
    },

    /// Evaluate the success-probability lower bound h_k
    Bound {
        /// Number of classes
        #[arg(long)]
        k: u32,

        /// Single evaluation point in [0, 1]
        #[arg(long, conflicts_with = "grid")]
        t: Option<f64>,

        /// Evaluation grid start:stop:step, endpoints inclusive
        #[arg(long)]
        grid: Option<String>,
    },

    /// Exact success probability of the threshold strategy for concrete class counts
    Exact {
        /// Comma-separated class sizes, e.g. 3,5,2 (k is the list length)
        #[arg(long)]
        classes: String,

        /// Threshold in [0, 1]
        #[arg(long)]
        t: f64,

        /// Quadrature panels (8 Gauss-Legendre nodes each)
        #[arg(long, default_value_t = DEFAULT_QUAD_PANELS)]
        quad_panels: usize,

        /// Fail with exit code 4 if the quadrature error estimate exceeds this
        #[arg(long, default_value_t = 1e-9)]
        quad_tol: f64,
    },

    /// Monte Carlo estimate of the success probability
    Simulate {
        /// Comma-separated class sizes, e.g. 3,5,2
        #[arg(long)]
        classes: String,

        /// Threshold in [0, 1]
        #[arg(long)]
        t: f64,

        #[arg(long, default_value_t = 100_000)]
        trials: u64,

        #[arg(long, default_value_t = 0)]
        seed: u64,

        /// Worker threads (default: available parallelism; results do not depend on it)
        #[arg(long)]
        workers: Option<usize>,
    },

    /// Empirical, exact, and bound curves side by side over a threshold grid
    Sweep {
        /// Comma-separated class sizes
        #[arg(long)]
        classes: String,

        /// Threshold grid start:stop:step, endpoints inclusive
        #[arg(long)]
        grid: String,

        #[arg(long, default_value_t = 100_000)]
        trials: u64,

        #[arg(long, default_value_t = 0)]
        seed: u64,

        /// Worker threads (default: available parallelism)
        #[arg(long)]
        workers: Option<usize>,

        #[arg(long, default_value_t = DEFAULT_QUAD_PANELS)]
        quad_panels: usize,

        #[arg(long, default_value_t = 1e-9)]
        quad_tol: f64,
    },

    /// Best-or-worst selection over one totally ranked stream
    BestOrWorst {
        /// Stream length
        #[arg(long)]
        n: u32,

        /// Threshold in [0, 1]
        #[arg(long)]
        t: f64,

        #[arg(long, default_value_t = 100_000)]
        trials: u64,

        #[arg(long, default_value_t = 0)]
        seed: u64,

        #[arg(long)]
        workers: Option<usize>,
    },

    /// Search for the threshold maximizing an objective
    Optimize {
        /// Number of classes (mutually exclusive with --classes)
        #[arg(long, conflicts_with = "classes")]
        k: Option<u32>,

        /// Comma-separated class sizes; k is inferred from the length
        #[arg(long)]
        classes: Option<String>,

        #[arg(long, value_enum)]
        objective: ObjectiveArg,

        /// Trials per evaluation (monte-carlo objective)
        #[arg(long, default_value_t = 100_000)]
        trials: u64,

        /// Master seed (monte-carlo objective)
        #[arg(long, default_value_t = 0)]
        seed: u64,

        #[arg(long)]
        workers: Option<usize>,

        /// Quadrature panels (exact objective)
        #[arg(long, default_value_t = DEFAULT_QUAD_PANELS)]
        quad_panels: usize,

        /// Coarse scan points before refinement
        #[arg(long, default_value_t = 33)]
        coarse_grid: usize,

        /// Width of the final golden-section bracket
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,

        /// Fallback grid size when the coarse maximum is not bracketed
        #[arg(long, default_value_t = 100_001)]
        dense_grid: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ObjectiveArg {
    AnalyticBound,
    Exact,
    MonteCarlo,
}

enum CliError {
    Usage(String),
    Io(String),
    Numerical(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<altchoice::Error> for CliError {
    fn from(e: altchoice::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (columns, records) = build_records(&cli.command)?;
    let mut sink = open_sink(&cli.out)?;
    write_records(&mut sink, cli.format, &columns, &records)
        .and_then(|()| sink.flush())
        .map_err(|e| CliError::Io(e.to_string()))
}

fn open_sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    match path {
        Some(p) => {
            let file = File::create(p)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display())))?;
            Ok(Box::new(file))
        }
        None => Ok(Box::new(std::io::stdout())),
    }
}

fn parse_classes(spec: &str) -> Result<ClassCounts, CliError> {
    let counts = spec
        .split(',')
        .map(|p| p.trim().parse::<u32>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| {
            CliError::Usage(format!(
                "invalid class counts `{spec}`: expected comma-separated positive integers"
            ))
        })?;
    Ok(ClassCounts::new(counts)?)
}

/// Parse `start:stop:step` into an inclusive grid inside [0, 1]. Points
/// are generated as start + i*step; a point within 1e-9 of stop snaps to
/// stop so the endpoint survives binary rounding of the step.
fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let usage = || {
        CliError::Usage(format!(
            "invalid grid `{spec}`: expected start:stop:step with 0 <= start <= stop <= 1, step > 0"
        ))
    };
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(usage());
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| usage())?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&stop) || start > stop || step <= 0.0
    {
        return Err(usage());
    }
    let mut grid = Vec::new();
    for i in 0..10_000_000u64 {
        let t = start + i as f64 * step;
        if t > stop + 1e-9 {
            return Ok(grid);
        }
        grid.push(if (t - stop).abs() < 1e-9 { stop } else { t });
    }
    Err(CliError::Usage(format!(
        "grid `{spec}` has too many points"
    )))
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

type Batch = (Vec<&'static str>, Vec<Record>);

fn build_records(command: &Command) -> Result<Batch, CliError> {
    match command {
        Command::Threshold { k } => {
            let t = optimal_threshold(*k)?;
            let record = Record::new("threshold")
                .param_int("k", u64::from(*k))
                .result_float("t", t);
            Ok((vec!["t"], vec![record]))
        }

        Command::Bound { k, t, grid } => {
            let points = match (t, grid) {
                (Some(t), None) => vec![*t],
                (None, Some(g)) => parse_grid(g)?,
                _ => {
                    return Err(CliError::Usage(
                        "bound requires exactly one of --t or --grid".to_string(),
                    ))
                }
            };
            let mut records = Vec::with_capacity(points.len());
            for t in points {
                let h = lower_bound_h(*k, t)?;
                let mut record = Record::new("bound").param_int("k", u64::from(*k));
                if let Some(g) = grid {
                    record = record.param_str("grid", g);
                }
                records.push(record.result_float("t", t).result_float("h", h));
            }
            Ok((vec!["t", "h"], records))
        }

        Command::Exact {
            classes,
            t,
            quad_panels,
            quad_tol,
        } => {
            let counts = parse_classes(classes)?;
            let exact = exact_success_prob_with_panels(&counts, *t, *quad_panels)?;
            check_quadrature(exact.abs_error_estimate, *quad_tol)?;
            let record = Record::new("exact")
                .param_str("classes", classes)
                .param_float("t", *t)
                .param_int("quad_panels", *quad_panels as u64)
                .param_float("quad_tol", *quad_tol)
                .result_float("value", exact.value)
                .result_float("abs_error_estimate", exact.abs_error_estimate)
                .result_int("quad_points", exact.quad_points as u64);
            Ok((
                vec!["value", "abs_error_estimate", "quad_points"],
                vec![record],
            ))
        }

        Command::Simulate {
            classes,
            t,
            trials,
            seed,
            workers,
        } => {
            let counts = parse_classes(classes)?;
            let mut cfg = SimulationConfig::new(counts, *t, *trials, *seed)?;
            if let Some(w) = workers {
                cfg = cfg.with_workers(*w)?;
            }
            let stats = simulate(&cfg)?;
            let mut record = Record::new("simulate")
                .param_str("classes", classes)
                .param_float("t", *t)
                .param_int("trials", *trials)
                .param_int("seed", *seed);
            if let Some(w) = workers {
                record = record.param_int("workers", *w as u64);
            }
            let record = record
                .result_int("trials", stats.trials)
                .result_int("successes", stats.successes)
                .result_int("failures", stats.failures)
                .result_int("no_stops", stats.no_stops)
                .result_float("success_rate", stats.success_rate)
                .result_float("failure_rate", stats.failure_rate)
                .result_float("no_stop_rate", stats.no_stop_rate)
                .result_float("std_err", stats.std_err)
                .result_float("ci95_low", stats.ci95_low)
                .result_float("ci95_high", stats.ci95_high);
            Ok((
                vec![
                    "trials",
                    "successes",
                    "failures",
                    "no_stops",
                    "success_rate",
                    "failure_rate",
                    "no_stop_rate",
                    "std_err",
                    "ci95_low",
                    "ci95_high",
                ],
                vec![record],
            ))
        }

        Command::Sweep {
            classes,
            grid,
            trials,
            seed,
            workers,
            quad_panels,
            quad_tol,
        } => {
            let counts = parse_classes(classes)?;
            let k = counts.k() as u32;
            let points = parse_grid(grid)?;
            let rows = sweep(
                &counts,
                &points,
                *trials,
                *seed,
                workers.unwrap_or_else(default_workers),
            )?;
            let mut records = Vec::with_capacity(rows.len());
            for (t, stats) in rows {
                let exact = exact_success_prob_with_panels(&counts, t, *quad_panels)?;
                check_quadrature(exact.abs_error_estimate, *quad_tol)?;
                let h = lower_bound_h(k, t)?;
                records.push(
                    Record::new("sweep")
                        .param_str("classes", classes)
                        .param_str("grid", grid)
                        .param_int("trials", *trials)
                        .param_int("seed", *seed)
                        .param_int("quad_panels", *quad_panels as u64)
                        .result_float("t", t)
                        .result_float("success_rate", stats.success_rate)
                        .result_float("ci_low", stats.ci95_low)
                        .result_float("ci_high", stats.ci95_high)
                        .result_float("no_stop_rate", stats.no_stop_rate)
                        .result_float("exact", exact.value)
                        .result_float("h_bound", h),
                );
            }
            Ok((
                vec![
                    "t",
                    "success_rate",
                    "ci_low",
                    "ci_high",
                    "no_stop_rate",
                    "exact",
                    "h_bound",
                ],
                records,
            ))
        }

        Command::BestOrWorst {
            n,
            t,
            trials,
            seed,
            workers,
        } => {
            let stats = simulate_best_or_worst(
                *n,
                *t,
                *trials,
                *seed,
                workers.unwrap_or_else(default_workers),
            )?;
            let record = Record::new("best-or-worst")
                .param_int("n", u64::from(*n))
                .param_float("t", *t)
                .param_int("trials", *trials)
                .param_int("seed", *seed)
                .result_int("trials", stats.trials)
                .result_int("successes", stats.successes)
                .result_int("best_hits", stats.best_hits)
                .result_int("worst_hits", stats.worst_hits)
                .result_int("failures", stats.failures)
                .result_int("no_stops", stats.no_stops)
                .result_int("degenerate", stats.degenerate)
                .result_float("success_rate", stats.success_rate)
                .result_float("degenerate_rate", stats.degenerate_rate)
                .result_float("std_err", stats.std_err)
                .result_float("ci95_low", stats.ci95_low)
                .result_float("ci95_high", stats.ci95_high);
            Ok((
                vec![
                    "trials",
                    "successes",
                    "best_hits",
                    "worst_hits",
                    "failures",
                    "no_stops",
                    "degenerate",
                    "success_rate",
                    "degenerate_rate",
                    "std_err",
                    "ci95_low",
                    "ci95_high",
                ],
                vec![record],
            ))
        }

        Command::Optimize {
            k,
            classes,
            objective,
            trials,
            seed,
            workers,
            quad_panels,
            coarse_grid,
            tolerance,
            dense_grid,
        } => {
            let spec = match objective {
                ObjectiveArg::AnalyticBound => {
                    let k = match (k, classes) {
                        (Some(k), None) => *k,
                        (None, Some(c)) => parse_classes(c)?.k() as u32,
                        _ => {
                            return Err(CliError::Usage(
                                "objective analytic-bound requires --k or --classes".to_string(),
                            ))
                        }
                    };
                    ObjectiveSpec::AnalyticBound { k }
                }
                ObjectiveArg::Exact => ObjectiveSpec::Exact {
                    counts: required_classes(classes, "exact")?,
                    panels: *quad_panels,
                },
                ObjectiveArg::MonteCarlo => ObjectiveSpec::MonteCarlo {
                    counts: required_classes(classes, "monte-carlo")?,
                    trials: *trials,
                    master_seed: *seed,
                    workers: workers.unwrap_or_else(default_workers),
                },
            };
            let search = SearchConfig {
                coarse_grid: *coarse_grid,
                tolerance: *tolerance,
                dense_grid: *dense_grid,
                ..SearchConfig::default()
            };
            let result = optimize_threshold(&spec, &search)?;
            let mut record = Record::new("optimize").param_str("objective", spec.name());
            if let Some(k) = k {
                record = record.param_int("k", u64::from(*k));
            }
            if let Some(c) = classes {
                record = record.param_str("classes", c);
            }
            if matches!(objective, ObjectiveArg::MonteCarlo) {
                record = record.param_int("trials", *trials).param_int("seed", *seed);
            }
            let record = record
                .param_int("coarse_grid", *coarse_grid as u64)
                .param_float("tolerance", *tolerance)
                .result_float("t_star", result.threshold)
                .result_float("value", result.value)
                .result_int("evaluations", result.evaluations as u64)
                .result_str("method", result.method.name())
                .result_bool("flagged_non_unimodal", result.flagged_non_unimodal);
            Ok((
                vec![
                    "t_star",
                    "value",
                    "evaluations",
                    "method",
                    "flagged_non_unimodal",
                ],
                vec![record],
            ))
        }
    }
}

fn required_classes(classes: &Option<String>, objective: &str) -> Result<ClassCounts, CliError> {
    match classes {
        Some(c) => parse_classes(c),
        None => Err(CliError::Usage(format!(
            "objective {objective} requires --classes"
        ))),
    }
}

fn check_quadrature(estimate: f64, tol: f64) -> Result<(), CliError> {
    if estimate > tol {
        return Err(CliError::Numerical(format!(
            "quadrature error estimate {estimate:e} exceeds tolerance {tol:e}; raise --quad-panels or --quad-tol"
        )));
    }
    Ok(())
}
