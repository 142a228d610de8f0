use std::time::Instant;

use primerel::search::{SearchState, MAX_EXACT_SEED};
use serde_json::json;

use super::{check_certificate, status_name};
use crate::output::Printer;
use crate::record::ResultRecord;
use crate::{Context, Failure};

/// Exponents searched between progress flushes.
const STRIDE: u64 = 64;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Prime seed `a >= 5`.
    #[arg(long)]
    pub seed: u64,
    /// Largest exponent `n` to try.
    #[arg(long)]
    pub max_n: u64,
    /// Stop after this many hits.
    #[arg(long)]
    pub max_hits: Option<usize>,
}

pub fn run(args: &Args, ctx: &Context, p: &mut Printer) -> Result<(), Failure> {
    let started = Instant::now();
    let state = SearchState::with_digit_cap(args.seed, ctx.seed_cap_digits)?;
    p.text(format!(
        "seed {}: c = {} ({} digits), window ({}, {}]",
        state.seed(),
        state.product(),
        state.product_digits(),
        state.window().low,
        state.window().high
    ))?;
    if state.seed() <= MAX_EXACT_SEED {
        match state.min_exponent()? {
            Some(m) => p.text(format!(
                "min exponent {}{}",
                m.n,
                if m.via_unit_k { " (k = 1)" } else { "" }
            ))?,
            None => p.text("no exponent admits an odd multiplier: this seed has no hits")?,
        }
    }

    let limit = args.max_hits.unwrap_or(usize::MAX);
    let mut emitted = 0;
    let mut start = 1;
    while start <= args.max_n && emitted < limit {
        let end = args.max_n.min(start.saturating_add(STRIDE - 1));
        for hit in state.search_range(start..=end, Some(limit - emitted))? {
            let value = hit.value();
            p.row(
                format!(
                    "k = {}, n = {} -> R = {}  {}",
                    hit.k,
                    hit.n,
                    value,
                    status_name(hit.certificate.verdict.status)
                ),
                json!({
                    "seed": state.seed().to_string(),
                    "k": hit.k.to_string(),
                    "n": hit.n,
                    "value": value.to_string(),
                    "digits": value.to_string().len(),
                    "verdict": status_name(hit.certificate.verdict.status),
                    "elapsed_ms": started.elapsed().as_millis() as u64,
                }),
            )?;
            p.record(ResultRecord::new(
                "big-search",
                serde_json::to_value(&hit.certificate.params)?,
                value,
                hit.certificate.verdict.status,
            ))?;
            check_certificate(&hit.certificate)?;
            emitted += 1;
        }
        if end == u64::MAX {
            break;
        }
        start = end + 1;
    }
    p.text(format!("{emitted} hits"))?;
    Ok(())
}
