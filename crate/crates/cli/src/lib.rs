//! The `primerel` command line.
//!
//! Exit codes: 0 success, 1 bad input, 2 a resource cap was hit, 3 an
//! internal invariant failed (an accepted value the oracle refutes, a log
//! record that no longer checks out, a benchmark count mismatch).

use std::ffi::OsString;
use std::io::{self, Write};
use std::num::NonZeroUsize;
use std::path::PathBuf;
use std::sync::mpsc;

use clap::{Parser, Subcommand};
use primerel::oracle::{DEFAULT_MAX_PRODUCT_DIGITS, DEFAULT_SEGMENT_LEN};
use primerel::relations::DEFAULT_CANDIDATE_CAP;

mod commands;
pub mod output;
pub mod record;

pub use output::Format;
pub use record::{read_log, ResultLog, ResultRecord};

use commands::{bench, bigsearch, relations, sieve, tables, verify, zscan};
use output::Printer;

#[derive(Debug, Parser)]
#[command(name = "primerel", version, about = "Prime generation by exclusion, certificate relations and seeded search")]
pub struct Cli {
    #[arg(long, global = true, value_enum, env = "PRIMEREL_FORMAT", default_value = "text")]
    pub format: Format,
    /// Append a JSONL record for every certified value.
    #[arg(long, global = true, env = "PRIMEREL_LOG")]
    pub log: Option<PathBuf>,
    /// Worker threads (defaults to one per core).
    #[arg(long, global = true, env = "PRIMEREL_WORKERS")]
    pub workers: Option<NonZeroUsize>,
    /// Refuse seeded searches whose product would exceed this many digits.
    #[arg(long, global = true, env = "PRIMEREL_SEED_CAP_DIGITS", default_value_t = DEFAULT_MAX_PRODUCT_DIGITS,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub seed_cap_digits: u64,
    /// Sieve segment length in entries.
    #[arg(long, global = true, env = "PRIMEREL_SEGMENT_LEN", default_value_t = DEFAULT_SEGMENT_LEN,
          value_parser = positive_usize)]
    pub segment_len: usize,
    /// Most grid points or window positions one enumeration may visit.
    #[arg(long, global = true, env = "PRIMEREL_CANDIDATE_CAP", default_value_t = DEFAULT_CANDIDATE_CAP,
          value_parser = positive_usize)]
    pub candidate_cap: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Odd primes below a bound by K-exclusion.
    Sieve(sieve::Args),
    /// Scan generalized Mersenne numbers over a grid.
    Zscan(zscan::Args),
    /// Relation 1: K times the basis product plus a large-prime power product.
    Rel1(relations::Rel1Args),
    /// Relation 1 with the basis product replaced by a factorial.
    Rel1f(relations::Rel1fArgs),
    /// Relation 2: the basis split into two products.
    Rel2(relations::Rel2Args),
    /// Relation 3: one term per basis prime.
    Rel3(relations::Rel3Args),
    /// Re-evaluate the three worked tables for bound 119.
    Tables(tables::Args),
    /// Seeded search for primes c*k - 2^n.
    Bigsearch(bigsearch::Args),
    /// Timing ladders against the oracle.
    Bench(bench::Args),
    /// Re-check every record of a result log.
    Verify(verify::Args),
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

/// A failed run, by exit code.
#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Resource(String),
    Invariant(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Resource(_) => 2,
            Failure::Invariant(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Resource(m) | Failure::Invariant(m) => m,
        }
    }
}

impl From<primerel::Error> for Failure {
    fn from(e: primerel::Error) -> Self {
        match e {
            primerel::Error::Range(_) | primerel::Error::Validation(_) => Failure::Validation(e.to_string()),
            primerel::Error::Resource { .. } => Failure::Resource(e.to_string()),
            primerel::Error::Invariant(_) => Failure::Invariant(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Validation(format!("i/o: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Validation(format!("json: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Validation(format!("csv: {e}"))
    }
}

/// Settings every subcommand may consult.
pub struct Context {
    pub seed_cap_digits: u64,
    pub segment_len: usize,
    pub candidate_cap: usize,
    pub log_path: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    match run(cli, out) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.exit_code()
        }
    }
}

/// Sends whatever the printer writes back to the calling thread.
struct ChannelWriter(mpsc::Sender<Vec<u8>>);

impl Write for ChannelWriter {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        self.0
            .send(buf.to_vec())
            .map_err(|_| io::Error::new(io::ErrorKind::BrokenPipe, "output closed"))?;
        Ok(buf.len())
    }

    fn flush(&mut self) -> io::Result<()> {
        Ok(())
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    // verify reads the log; everything else appends to it
    let log = match cli.command {
        Command::Verify(_) => None,
        _ => cli.log.as_deref().map(ResultLog::open).transpose()?,
    };
    let pool = cli
        .workers
        .map(|w| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(w.get())
                .build()
                .map_err(|e| Failure::Resource(format!("cannot start {w} workers: {e}")))
        })
        .transpose()?;
    let ctx = Context {
        seed_cap_digits: cli.seed_cap_digits,
        segment_len: cli.segment_len,
        candidate_cap: cli.candidate_cap,
        log_path: cli.log,
    };
    let (format, command) = (cli.format, cli.command);
    let (tx, rx) = mpsc::channel();

    std::thread::scope(|scope| {
        let worker = scope.spawn(move || {
            let mut sink = io::LineWriter::new(ChannelWriter(tx));
            let mut printer = Printer::new(format, &mut sink, log);
            let body = |p: &mut Printer| match &command {
                Command::Sieve(a) => sieve::run(a, &ctx, p),
                Command::Zscan(a) => zscan::run(a, p),
                Command::Rel1(a) => relations::rel1(a, &ctx, p),
                Command::Rel1f(a) => relations::rel1f(a, &ctx, p),
                Command::Rel2(a) => relations::rel2(a, &ctx, p),
                Command::Rel3(a) => relations::rel3(a, &ctx, p),
                Command::Tables(a) => tables::run(a, p),
                Command::Bigsearch(a) => bigsearch::run(a, &ctx, p),
                Command::Bench(a) => bench::run(a, &ctx, p),
                Command::Verify(a) => verify::run(a, &ctx, p),
            };
            let outcome = match &pool {
                Some(pool) => pool.install(|| body(&mut printer)),
                None => body(&mut printer),
            };
            // flush whatever was produced before reporting a failure
            let finished = printer.finish();
            outcome.and(finished)
        });
        let mut written = Ok(());
        for chunk in rx {
            if written.is_ok() {
                written = out.write_all(&chunk);
            }
        }
        let outcome = worker
            .join()
            .unwrap_or_else(|_| Err(Failure::Invariant("worker thread panicked".into())));
        outcome.and(written.and_then(|()| out.flush()).map_err(Failure::from))
    })
}
