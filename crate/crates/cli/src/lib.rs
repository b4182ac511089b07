//! Command-line front end for `ccps-core`.
//!
//! [`run`] parses an argument vector, executes one subcommand and returns
//! the process exit code: 0 on success, 2 for argument errors, 3 for I/O or
//! format errors and 4 when a numeric contract is violated.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use ccps_core::correlation::autocorr_decompose;
use ccps_core::derivative::{make_kernel, make_ramanujan_kernel, DerivativeKernel, DerivativeOrder};
use ccps_core::edge::edge_response;
use ccps_core::imageio::{normalize_display, read_pgm, write_pgm, PgmFormat, ScanDirection};
use ccps_core::sequences::{ccps, fmt_f64, ramanujan_sum};
use ccps_core::subspace::{decompose, mult_count, strassen_reference, DEFAULT_ENERGY_THRESHOLD};
use ccps_core::{CcpsId, Error, Sequence};

/// Reference lengths always listed by `bench`.
pub const TABLE_LENGTHS: [usize; 5] = [3, 6, 8, 32, 82];

/// Tolerance for the autocorrelation identity reported by `corr`.
pub const CORR_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "ccps", version, about = "Complex conjugate pair sum toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    Col,
    Row,
}

impl From<Direction> for ScanDirection {
    fn from(d: Direction) -> Self {
        match d {
            Direction::Col => ScanDirection::Columnwise,
            Direction::Row => ScanDirection::Rowwise,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ImageFormat {
    P2,
    P5,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print one CCPS period, or a derivative kernel with --order
    Gen {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        order: Option<u8>,
    },
    /// Print the Ramanujan sum of period q
    Rs {
        #[arg(long)]
        q: usize,
    },
    /// Edge-detect a PGM image with a CCPS (or Ramanujan sum) kernel
    Edge {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "out")]
        output: PathBuf,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        order: u8,
        #[arg(long, value_enum, default_value_t = Direction::Col)]
        direction: Direction,
        /// Use the Ramanujan sum of period q instead of a single CCPS
        #[arg(long)]
        sum_rs: bool,
        /// Also write the signed response before normalisation, one value
        /// per line in row-major order
        #[arg(long)]
        raw: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ImageFormat::P5)]
        format: ImageFormat,
    },
    /// Decompose a signal onto every conjugate subspace and write a report
    Project {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        report: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ENERGY_THRESHOLD)]
        threshold: f64,
        /// Include the projection samples in the report
        #[arg(long)]
        samples: bool,
    },
    /// List the strongest (q, k) subspaces of a signal by energy
    Periods {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 5)]
        top: usize,
        #[arg(long, default_value_t = DEFAULT_ENERGY_THRESHOLD)]
        threshold: f64,
    },
    /// Compare a signal's autocorrelation with its projection autocorrelations
    Corr {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Print projection multiplication counts against floor(N^2.81)
    Bench {
        #[arg(long)]
        max: Option<usize>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Numeric(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidId { .. } | Error::UnsupportedOrder { .. } => CliError::Usage(e.to_string()),
            Error::InputTooShort { .. } | Error::LengthMismatch(_) => CliError::Io(e.to_string()),
            Error::SingularGram { .. }
            | Error::SingularSystem { .. }
            | Error::FactorizationMismatch { .. }
            | Error::NotInSubspace { .. }
            | Error::NonIntegerRamanujan { .. } => CliError::Numeric(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn read_file(path: &Path) -> CliResult<Vec<u8>> {
    std::fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    std::fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_signal(path: &Path) -> CliResult<Sequence> {
    let bytes = read_file(path)?;
    let text = String::from_utf8(bytes)
        .map_err(|_| CliError::Io(format!("{}: not UTF-8 text", path.display())))?;
    Sequence::parse_text(&text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn order_of(v: u8) -> CliResult<DerivativeOrder> {
    DerivativeOrder::try_from(v).map_err(|v| CliError::Usage(format!("unsupported order {v}")))
}

fn id_of(q: usize, k: usize) -> CliResult<CcpsId> {
    Ok(CcpsId::new(q, k)?)
}

/// Lengths with more divisors than any smaller length, up to `max`.
pub fn divisor_rich(max: usize) -> Vec<usize> {
    let mut best = 0;
    let mut out = Vec::new();
    for n in 1..=max {
        let d = ccps_core::number_theory::divisors(n).len();
        if d > best {
            best = d;
            out.push(n);
        }
    }
    out
}

/// Rows printed by `bench`: the reference lengths plus divisor-rich lengths
/// up to `max`, ascending and without duplicates.
pub fn bench_lengths(max: Option<usize>) -> Vec<usize> {
    let mut ns: Vec<usize> = TABLE_LENGTHS.to_vec();
    if let Some(max) = max {
        ns.extend(divisor_rich(max));
    }
    ns.sort_unstable();
    ns.dedup();
    ns
}

fn cmd_bench(max: Option<usize>) -> String {
    let mut out = String::from("# N M_total floor(N^2.81)\n");
    for n in bench_lengths(max) {
        let _ = writeln!(out, "{} {} {}", n, mult_count(n), strassen_reference(n));
    }
    out
}

fn edge_kernel(q: usize, k: usize, order: u8, sum_rs: bool) -> CliResult<DerivativeKernel> {
    let order = order_of(order)?;
    Ok(if sum_rs {
        make_ramanujan_kernel(q, order)?
    } else {
        make_kernel(id_of(q, k)?, order)?
    })
}

fn sample_text(re: f64, im: f64) -> String {
    if im == 0.0 {
        fmt_f64(re)
    } else {
        format!("{},{}", fmt_f64(re), fmt_f64(im))
    }
}

fn execute(cli: Cli) -> CliResult<String> {
    match cli.command {
        Command::Gen { q, k, order } => {
            let id = id_of(q, k)?;
            let seq = match order {
                None => ccps(id),
                Some(o) => make_kernel(id, order_of(o)?)?.taps().clone(),
            };
            Ok(seq.to_text())
        }
        Command::Rs { q } => {
            if q == 0 {
                return Err(CliError::Usage("q must be at least 1".into()));
            }
            Ok(ramanujan_sum(q)?.to_text())
        }
        Command::Edge {
            input,
            output,
            q,
            k,
            order,
            direction,
            sum_rs,
            raw,
            format,
        } => {
            let kernel = edge_kernel(q, k, order, sum_rs)?;
            let img = read_pgm(&read_file(&input)?)
                .map_err(|e| CliError::Io(format!("{}: {e}", input.display())))?;
            let response = edge_response(&img, &kernel, direction.into())?;
            if let Some(raw) = raw {
                let mut text = String::new();
                for &p in response.pixels() {
                    let _ = writeln!(text, "{}", fmt_f64(p));
                }
                write_file(&raw, text.as_bytes())?;
            }
            let fmt = match format {
                ImageFormat::P2 => PgmFormat::P2,
                ImageFormat::P5 => PgmFormat::P5,
            };
            let bytes = write_pgm(&normalize_display(&response), fmt)
                .map_err(|e| CliError::Numeric(e.to_string()))?;
            write_file(&output, &bytes)?;
            Ok(String::new())
        }
        Command::Project {
            input,
            report,
            threshold,
            samples,
        } => {
            let x = read_signal(&input)?;
            let r = decompose(&x)?;
            write_file(&report, r.to_text(threshold, samples).as_bytes())?;
            if !r.reconstructs() {
                return Err(CliError::Numeric(format!(
                    "reconstruction residual {:e} exceeds tolerance",
                    r.residual_norm
                )));
            }
            Ok(String::new())
        }
        Command::Periods {
            input,
            top,
            threshold,
        } => {
            let x = read_signal(&input)?;
            let r = decompose(&x)?;
            if !r.reconstructs() {
                return Err(CliError::Numeric(format!(
                    "reconstruction residual {:e} exceeds tolerance",
                    r.residual_norm
                )));
            }
            let mut out = String::new();
            for e in r.ranked(threshold).into_iter().take(top) {
                let _ = writeln!(out, "q={} k={} energy={:.11e}", e.id.q(), e.id.k(), e.energy);
            }
            Ok(out)
        }
        Command::Corr { input } => {
            let x = read_signal(&input)?;
            let split = autocorr_decompose(&x)?;
            let mut out = String::from("# lag lhs rhs\n");
            for (l, (a, b)) in split.lhs.iter().zip(split.rhs.iter()).enumerate() {
                let _ = writeln!(out, "{l} {} {}", sample_text(a.re, a.im), sample_text(b.re, b.im));
            }
            let worst = split.max_discrepancy();
            let _ = writeln!(out, "max_discrepancy {worst:e}");
            if worst > CORR_TOL {
                return Err(CliError::Numeric(format!(
                    "autocorrelation identity off by {worst:e}"
                )));
            }
            Ok(out)
        }
        Command::Bench { max } => Ok(cmd_bench(max)),
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(cli) {
        Ok(text) => match stdout.write_all(text.as_bytes()) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                3
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.exit_code()
        }
    }
}
