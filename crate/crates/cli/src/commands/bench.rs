use std::time::Instant;

use clap::ValueEnum;
use num_bigint::BigUint;
use primerel::exclusion::primes_below;
use primerel::oracle::{primes_leq_sqrt, SieveConfig};
use primerel::relations::{enumerate_certified, Budget, Family};
use primerel::search::SearchState;
use serde_json::json;

use super::{check_certificate, parse_size};
use crate::output::Printer;
use crate::{Context, Failure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    SieveVsOracle,
    RelationsThroughput,
    BigsearchScaling,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Sizes to run: bounds, budgets or seeds depending on the suite.
    /// Accepts `10^4` style powers.
    #[arg(long, value_delimiter = ',', value_parser = parse_size)]
    pub ladder: Vec<u64>,
    /// Basis bound for the relations suite.
    #[arg(long, default_value_t = 1000)]
    pub bound: u64,
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn rate(count: usize, millis: f64) -> f64 {
    if millis > 0.0 {
        count as f64 / (millis / 1e3)
    } else {
        0.0
    }
}

fn round(x: f64) -> f64 {
    (x * 1000.0).round() / 1000.0
}

pub fn run(args: &Args, ctx: &Context, p: &mut Printer) -> Result<(), Failure> {
    match args.suite {
        Suite::SieveVsOracle => sieve_vs_oracle(args, ctx, p),
        Suite::RelationsThroughput => relations_throughput(args, ctx, p),
        Suite::BigsearchScaling => bigsearch_scaling(args, ctx, p),
    }
}

fn ladder(args: &Args, default: &[u64]) -> Vec<u64> {
    if args.ladder.is_empty() {
        default.to_vec()
    } else {
        args.ladder.clone()
    }
}

/// Text output for the bench suites is CSV as well.
fn csv_line(p: &mut Printer, row: serde_json::Value, first: &mut bool) -> Result<(), Failure> {
    let map = row.as_object().expect("bench rows are objects");
    if *first {
        p.text(map.keys().cloned().collect::<Vec<_>>().join(","))?;
        *first = false;
    }
    let line = map
        .values()
        .map(|v| v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string()))
        .collect::<Vec<_>>()
        .join(",");
    p.row(line, row)
}

fn sieve_vs_oracle(args: &Args, ctx: &Context, p: &mut Printer) -> Result<(), Failure> {
    let oracle = SieveConfig {
        segment_len: ctx.segment_len,
    };
    let mut first = true;
    for bound in ladder(args, &[10_000, 100_000, 1_000_000]) {
        let t = Instant::now();
        let module = primes_below(bound, true)?;
        let module_ms = ms(t);
        let t = Instant::now();
        let reference = oracle.primes_below(bound)?;
        let oracle_ms = ms(t);
        let row = json!({
            "suite": "sieve-vs-oracle",
            "size": bound,
            "module_count": module.len(),
            "oracle_count": reference.len(),
            "module_ms": round(module_ms),
            "oracle_ms": round(oracle_ms),
            "module_primes_per_sec": round(rate(module.len(), module_ms)),
            "oracle_primes_per_sec": round(rate(reference.len(), oracle_ms)),
        });
        csv_line(p, row, &mut first)?;
        if module != reference {
            return Err(Failure::Invariant(format!(
                "exclusion sieve and oracle disagree below {bound}"
            )));
        }
    }
    Ok(())
}

fn relations_throughput(args: &Args, ctx: &Context, p: &mut Printer) -> Result<(), Failure> {
    let basis = primes_leq_sqrt(&BigUint::from(args.bound))?;
    let window_high: u64 = (&basis.window_high())
        .try_into()
        .map_err(|_| Failure::Resource("window too large to sieve".into()))?;
    let t = Instant::now();
    let window_primes = SieveConfig {
        segment_len: ctx.segment_len,
    }
    .primes_below(window_high + 1)?
    .into_iter()
    .filter(|&q| q > basis.largest())
    .count();
    let oracle_ms = ms(t);

    let families = [
        ("relation1", Family::Relation1),
        ("relation1-factorial", Family::Relation1Factorial),
        ("relation2", Family::Relation2 { first: vec![2] }),
        ("relation3", Family::Relation3),
    ];
    let mut first = true;
    for budget in ladder(args, &[4, 8, 16]) {
        let budget = u32::try_from(budget)
            .map_err(|_| Failure::Validation(format!("budget {budget} is too large")))?;
        for (name, family) in &families {
            let b = Budget {
                candidate_cap: ctx.candidate_cap,
                ..Budget::uniform(budget)
            };
            let t = Instant::now();
            let certs = enumerate_certified(family, &basis, &b)?;
            let module_ms = ms(t);
            for c in &certs {
                check_certificate(c)?;
            }
            let row = json!({
                "suite": "relations-throughput",
                "family": name,
                "bound": args.bound,
                "size": budget,
                "module_count": certs.len(),
                "oracle_count": window_primes,
                "module_ms": round(module_ms),
                "oracle_ms": round(oracle_ms),
                "module_primes_per_sec": round(rate(certs.len(), module_ms)),
                "oracle_primes_per_sec": round(rate(window_primes, oracle_ms)),
            });
            csv_line(p, row, &mut first)?;
            if certs.len() > window_primes {
                return Err(Failure::Invariant(format!(
                    "{name} certified more values than there are primes in its window"
                )));
            }
        }
    }
    Ok(())
}

fn bigsearch_scaling(args: &Args, ctx: &Context, p: &mut Printer) -> Result<(), Failure> {
    let mut first = true;
    for seed in ladder(args, &[13, 31, 101]) {
        let t = Instant::now();
        let state = SearchState::with_digit_cap(seed, ctx.seed_cap_digits)?;
        let build_ms = ms(t);
        let max_n = state.product().bits() + 64;
        let t = Instant::now();
        let hits = state.search(max_n, None)?;
        let search_ms = ms(t);
        for h in &hits {
            check_certificate(&h.certificate)?;
        }
        let t = Instant::now();
        let high = seed
            .checked_mul(seed)
            .ok_or_else(|| Failure::Validation(format!("seed {seed} is too large")))?;
        let window_primes = SieveConfig {
            segment_len: ctx.segment_len,
        }
        .primes_below(high)?
        .into_iter()
        .filter(|&q| q > seed)
        .count();
        let oracle_ms = ms(t);
        let row = json!({
            "suite": "bigsearch-scaling",
            "size": seed,
            "c_digits": state.product_digits(),
            "max_n": max_n,
            "module_count": hits.len(),
            "oracle_count": window_primes,
            "build_ms": round(build_ms),
            "module_ms": round(search_ms),
            "oracle_ms": round(oracle_ms),
            "module_primes_per_sec": round(rate(hits.len(), build_ms + search_ms)),
            "oracle_primes_per_sec": round(rate(window_primes, oracle_ms)),
        });
        csv_line(p, row, &mut first)?;
    }
    Ok(())
}
