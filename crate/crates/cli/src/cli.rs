use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;
use theta_heights_core::Error;

use crate::commands;
use crate::table::Table;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "THETA_HEIGHTS_THREADS";

#[derive(Parser, Debug)]
#[command(name = "theta-heights", version, about = "Height statistics of non-plane binary trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Tree counts y_1..y_n.
    Count {
        #[arg(long)]
        n: usize,
    },
    /// Counts by bounded height for one size.
    Heights {
        #[arg(long)]
        n: usize,
        /// Largest height listed (default n - 1).
        #[arg(long)]
        h: Option<usize>,
    },
    /// Exact height distribution.
    Dist {
        #[arg(long)]
        n: usize,
    },
    /// Certified rho, lambda and lambda / (2 sqrt(pi)).
    Constants {
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Theta survival function, density and sums at one point.
    Theta {
        #[arg(long)]
        x: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Exact moments against their asymptotic constants.
    Moments {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        r: u32,
    },
    /// Exact tail against the theta survival function.
    CompareClt {
        #[arg(long)]
        n: usize,
    },
    /// Exact point probabilities against the theta density.
    CompareLlt {
        #[arg(long)]
        n: usize,
    },
    /// Height histogram of uniformly sampled trees.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Saddle-point bound on P(H_n >= h).
    Bound {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        h: usize,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(Error),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(_) => 1,
            CliError::Io(_) => 74,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Compute(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Compute(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn check(cond: bool, msg: &str) -> Result<(), CliError> {
    if cond {
        Ok(())
    } else {
        Err(usage(msg))
    }
}

/// Validates the arguments of a command before any computation.
pub fn validate(cmd: &Command) -> Result<(), CliError> {
    match *cmd {
        Command::Count { n }
        | Command::Dist { n }
        | Command::Moments { n, .. }
        | Command::Heights { n, .. } => check(n >= 1, "--n must be at least 1")?,
        Command::CompareClt { n } | Command::CompareLlt { n } => {
            check(n >= 4, "--n must be at least 4")?
        }
        Command::Sample { n, trials, .. } => {
            check(n >= 1, "--n must be at least 1")?;
            check(trials >= 1, "--trials must be at least 1")?;
        }
        Command::Bound { n, h } => {
            check(n >= 2, "--n must be at least 2")?;
            check(h >= 1 && h < n, "--h must satisfy 1 <= h < n")?;
        }
        Command::Constants { tol } => check(tol > 0.0 && tol.is_finite(), "--tol must be positive")?,
        Command::Theta { x, tol } => {
            check(x > 0.0 && x.is_finite(), "--x must be positive")?;
            check(tol > 0.0 && tol.is_finite(), "--tol must be positive")?;
        }
    }
    if let Command::Moments { r, .. } = *cmd {
        check(r >= 1, "--r must be at least 1")?;
    }
    Ok(())
}

/// Output of one command: a table, and for `count` the JSON form is the bare
/// array of counts.
pub struct Report {
    pub table: Table,
    pub bare_column: Option<usize>,
}

pub fn execute(cmd: &Command) -> Result<Report, CliError> {
    validate(cmd)?;
    let table = match *cmd {
        Command::Count { n } => {
            return Ok(Report {
                table: commands::count(n),
                bare_column: Some(1),
            })
        }
        Command::Heights { n, h } => commands::heights(n, h)?,
        Command::Dist { n } => commands::dist(n)?,
        Command::Constants { tol } => commands::constants_table(tol)?,
        Command::Theta { x, tol } => commands::theta(x, tol)?,
        Command::Moments { n, r } => commands::moments(n, r)?,
        Command::CompareClt { n } => {
            let d = commands::exact_distribution(n)?;
            commands::compare_clt(&d, commands::theta_params()?)?
        }
        Command::CompareLlt { n } => {
            let d = commands::exact_distribution(n)?;
            commands::compare_llt(&d, commands::theta_params()?)?
        }
        Command::Sample { n, trials, seed } => commands::sample(n, trials, seed)?,
        Command::Bound { n, h } => commands::bound(n, h)?,
    };
    Ok(Report {
        table,
        bare_column: None,
    })
}

pub fn render<W: Write>(report: &Report, format: Format, mut out: W) -> io::Result<()> {
    match format {
        Format::Csv => report.table.write_csv(out),
        Format::Json => {
            let doc = match report.bare_column {
                Some(i) => Value::Array(report.table.rows.iter().map(|r| r[i].to_json()).collect()),
                None => report.table.to_json(),
            };
            serde_json::to_writer(&mut out, &doc)?;
            out.write_all(b"\n")
        }
    }
}

/// Configures the worker pool from the environment. Must run before any
/// parallel work.
pub fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| usage(format!("{THREADS_ENV} must be a positive integer, got '{raw}'")))?;
    // a pool that is already built keeps its size
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    init_threads()?;
    let report = execute(&cli.command)?;
    match &cli.output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            render(&report, cli.format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            render(&report, cli.format, &mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}
