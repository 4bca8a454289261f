mod event;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use auction_cube::bidanalysis::parse_bids;
use auction_cube::format::fmt_sig;
use auction_cube::simulator::{simulate, trace, Execution, SimulationConfig, MAX_TRACE_TRIALS};
use auction_cube::thresholds::{
    order_stat_json, order_stat_table, write_order_stat_csv, OrderStatRow, DEFAULT_BAND,
    REFERENCE_SIGMAS,
};
use auction_cube::{analyze_bids, g_factor, h_factor, BidSample, Error};
use clap::{Parser, Subcommand};

use output::{digits, Cell, Format, Report};

/// Decision support for choosing reverse-auction designs.
#[derive(Debug, Parser)]
#[command(name = "auction-cube", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print numbers with full precision instead of 6 (table) or 10 (csv, json) digits.
    #[arg(long, global = true)]
    full_precision: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the g(n) and h(n) threshold factors.
    Factors {
        #[arg(default_value_t = 2)]
        n_min: u32,
        #[arg(default_value_t = 100)]
        n_max: u32,
    },
    /// Estimate sigma and thresholds from a file of first-round bids.
    Analyze {
        bid_file: PathBuf,
        /// Strategic margin to compare against G.
        #[arg(long, short = 'm')]
        margin: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_BAND)]
        band: f64,
    },
    /// Recommend an auction design for an event description (JSON).
    Recommend {
        event: PathBuf,
        /// Indifference band; overrides the event file.
        #[arg(long)]
        band: Option<f64>,
    },
    /// Run a Monte Carlo simulation described by a config file (JSON).
    Simulate {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<u64>,
        /// Exit with status 3 when any |z| exceeds this value.
        #[arg(long, default_value_t = 4.0)]
        z_max: f64,
        /// Run on the calling thread only.
        #[arg(long)]
        sequential: bool,
        /// Also write per-trial costs as CSV (at most 10000 trials).
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Reproduce the order-statistic table for lists of sigma and n.
    Tables {
        /// Comma-separated sigma values; defaults to the reference grid.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        sigma: Option<Vec<String>>,
        /// Comma-separated sample sizes.
        #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = [2u32, 3, 4, 5, 6])]
        n: Vec<u32>,
    },
}

/// Failure with its process exit status.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

const DOMAIN: u8 = 1;
const USAGE: u8 = 2;
const BREACH: u8 = 3;

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::Config(_) | Error::Io(_) => USAGE,
            _ => DOMAIN,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

struct Output {
    text: String,
    warnings: Vec<String>,
    breach: Option<String>,
}

impl Output {
    fn new(text: String) -> Self {
        Self {
            text,
            warnings: Vec::new(),
            breach: None,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &out.text)
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => {
                    print!("{}", out.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(USAGE);
            }
            match out.breach {
                Some(msg) => {
                    eprintln!("error: {msg}");
                    ExitCode::from(BREACH)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let digits = digits(cli.format, cli.full_precision);
    match &cli.command {
        Command::Factors { n_min, n_max } => {
            let (report, warnings) = factors(*n_min, *n_max)?;
            let mut out = Output::new(report.render(cli.format, digits));
            out.warnings = warnings;
            Ok(out)
        }
        Command::Analyze {
            bid_file,
            margin,
            band,
        } => analyze(bid_file, *margin, *band, cli.format, digits),
        Command::Recommend { event, band } => {
            let (report, warnings) = event::recommend(&read(event)?, *band)?;
            let mut out = Output::new(report.render(cli.format, digits));
            out.warnings = warnings;
            Ok(out)
        }
        Command::Simulate {
            config,
            seed,
            trials,
            z_max,
            sequential,
            trace,
        } => {
            let mut cfg: SimulationConfig = serde_json::from_str(&read(config)?)
                .map_err(|e| Failure::usage(format!("{}: {e}", config.display())))?;
            if let Some(s) = seed {
                cfg.seed = *s;
            }
            if let Some(t) = trials {
                cfg.trials = *t;
            }
            let exec = if *sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            };
            if let Some(path) = trace {
                write_trace(&cfg, path, digits)?;
            }
            run_simulation(&cfg, exec, *z_max, cli.format, digits)
        }
        Command::Tables { sigma, n } => tables(sigma.as_deref(), n, cli.format, digits),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn factors(n_min: u32, n_max: u32) -> Result<(Report, Vec<String>), Failure> {
    if n_min < 2 || n_min > n_max {
        return Err(Failure::usage(format!(
            "invalid range {n_min}..{n_max}: need 2 <= n_min <= n_max"
        )));
    }
    let mut warnings = Vec::new();
    if n_max > 100 {
        warnings.push(format!(
            "n_max = {n_max} is beyond the tabulated range and may be slow"
        ));
    }
    let rows = (n_min..=n_max)
        .map(|n| {
            let h = match h_factor(n) {
                Ok(h) => Some(h),
                Err(Error::NotAvailable(_)) => None,
                Err(e) => return Err(e),
            };
            Ok(vec![
                Cell::Int(n.into()),
                Cell::Num(g_factor(n)?),
                Cell::opt(h),
            ])
        })
        .collect::<Result<_, Error>>()?;
    Ok((
        Report::Rows {
            headers: vec!["n", "g", "h"],
            rows,
        },
        warnings,
    ))
}

fn analyze(
    path: &Path,
    margin: Option<f64>,
    band: f64,
    format: Format,
    digits: usize,
) -> Result<Output, Failure> {
    let prices = parse_bids(&read(path)?)?;
    let a = analyze_bids(&BidSample::new(prices, "")?)?;
    let t = a.thresholds.as_ref();
    let mut fields = vec![
        ("n", Cell::Int(a.n.into())),
        ("mean", Cell::Num(a.mean)),
        ("sigma_hat", Cell::Num(a.sigma_hat)),
        ("g_prime", Cell::Num(t.map_or(0.0, |t| t.g_prime))),
        ("g", Cell::Num(t.map_or(0.0, |t| t.g))),
        ("h_prime", Cell::Num(t.map_or(0.0, |t| t.h_prime))),
        ("h", t.map_or(Cell::Num(0.0), |t| Cell::opt(t.h))),
        ("rel_err_g", Cell::opt(t.map(|t| t.rel_err_g))),
        ("rel_err_h", Cell::opt(t.and_then(|t| t.rel_err_h))),
    ];
    if a.n == 2 {
        fields[6].1 = Cell::Missing;
    }
    if let Some(m) = margin {
        fields.push(("margin", Cell::Num(m)));
        fields.push((
            "recommendation",
            Cell::text(event::verdict(a.recommendation(m, band)?)),
        ));
    }
    let mut out = Output::new(Report::Record(fields).render(format, digits));
    out.warnings = a.warnings;
    Ok(out)
}

fn run_simulation(
    cfg: &SimulationConfig,
    exec: Execution,
    z_max: f64,
    format: Format,
    digits: usize,
) -> Result<Output, Failure> {
    if !(z_max.is_finite() && z_max > 0.0) {
        return Err(Failure::usage(format!(
            "z-max = {z_max} must be finite and > 0"
        )));
    }
    let report = simulate(cfg, exec)?;
    let mut breaches = Vec::new();
    let rows = report
        .results
        .iter()
        .map(|r| {
            let z = r.result.z_score;
            if z.is_some_and(|z| z.abs() > z_max) {
                breaches.push(r.design.clone());
            }
            vec![
                Cell::text(&r.design),
                Cell::Num(r.result.mean),
                Cell::Num(r.result.std_error),
                Cell::Int(r.result.trials),
                Cell::opt(r.result.analytic_reference),
                Cell::opt(z),
            ]
        })
        .collect();
    let table = Report::Rows {
        headers: vec!["design", "mean", "std_error", "trials", "reference", "z"],
        rows,
    };
    let mut out = Output::new(table.render(format, digits));
    out.warnings = report.warnings;
    if !breaches.is_empty() {
        out.breach = Some(format!(
            "|z| above {z_max} for {} (seed {})",
            breaches.join(", "),
            report.seed
        ));
    }
    Ok(out)
}

fn write_trace(cfg: &SimulationConfig, path: &Path, digits: usize) -> Result<(), Failure> {
    if cfg.trials > MAX_TRACE_TRIALS {
        return Err(Failure::usage(format!(
            "--trace needs at most {MAX_TRACE_TRIALS} trials, got {}",
            cfg.trials
        )));
    }
    let costs = trace(cfg)?;
    let mut headers = vec!["trial".to_string()];
    headers.extend(cfg.designs.iter().map(|d| d.label()));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&headers).expect("in-memory write");
    for (i, row) in costs.iter().enumerate() {
        let mut record = vec![(i + 1).to_string()];
        record.extend(row.iter().map(|&x| fmt_sig(x, digits.max(10))));
        w.write_record(&record).expect("in-memory write");
    }
    let bytes = w.into_inner().expect("in-memory flush");
    std::fs::write(path, bytes)
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

fn tables(
    sigma: Option<&[String]>,
    n: &[u32],
    format: Format,
    digits: usize,
) -> Result<Output, Failure> {
    let sigmas = match sigma {
        None => REFERENCE_SIGMAS.to_vec(),
        Some(list) => list
            .iter()
            .filter(|s| !s.trim().is_empty())
            .map(|s| {
                auction_cube::format::parse_number(s)
                    .map_err(|e| Failure::usage(format!("--sigma: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?,
    };
    if sigmas.is_empty() || n.is_empty() {
        return Err(Failure::usage("sigma and n lists must not be empty"));
    }
    if let Some(bad) = sigmas.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
        return Err(Failure::usage(format!(
            "--sigma: {bad} must be finite and > 0"
        )));
    }
    if let Some(bad) = n.iter().find(|&&n| n < 2) {
        return Err(Failure::usage(format!("--n: sample size {bad} is below 2")));
    }
    let rows = order_stat_table(n, &sigmas)?;
    let text = match format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_order_stat_csv(&rows, digits, &mut buf)?;
            String::from_utf8(buf).expect("csv is utf-8")
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&order_stat_json(&rows, digits))
                .expect("json renders");
            s.push('\n');
            s
        }
        Format::Table => order_stat_report(&rows).render(format, digits),
    };
    Ok(Output::new(text))
}

fn order_stat_report(rows: &[OrderStatRow]) -> Report {
    Report::Rows {
        headers: auction_cube::thresholds::ORDER_STAT_COLUMNS.to_vec(),
        rows: rows
            .iter()
            .map(|r| {
                vec![
                    Cell::Num(r.sigma),
                    Cell::Int(r.n.into()),
                    Cell::Num(r.g_prime),
                    Cell::Num(r.e1),
                    Cell::Num(r.e2),
                    Cell::opt(r.e3),
                    Cell::Num(r.g),
                    Cell::Num(r.rel_err_g),
                    Cell::opt(r.h),
                    Cell::opt(r.rel_err_h),
                ]
            })
            .collect(),
    }
}
