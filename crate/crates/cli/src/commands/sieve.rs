use primerel::exclusion::{ExclusionSieve, DEFAULT_MAX_DENSE_BOUND};
use serde_json::json;

use crate::output::Printer;
use crate::record::ResultRecord;
use crate::{Context, Failure};
use primerel::PrimalityStatus;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Exclusive upper bound `a`.
    #[arg(long)]
    pub bound: u64,
    /// Keep 2 in the output even in paper-faithful mode.
    #[arg(long)]
    pub include_two: bool,
    /// Reproduce the worked example: odd primes only, with the K exclusion lists.
    #[arg(long)]
    pub paper_faithful: bool,
    /// Print the K exclusion list of every basis prime.
    #[arg(long)]
    pub exclusions: bool,
}

pub fn run(args: &Args, _ctx: &Context, p: &mut Printer) -> Result<(), Failure> {
    if args.bound > DEFAULT_MAX_DENSE_BOUND {
        return Err(Failure::Resource(format!(
            "bound {} exceeds the dense sieve cap {DEFAULT_MAX_DENSE_BOUND}",
            args.bound
        )));
    }
    let sieve = ExclusionSieve::new(args.bound)?;
    let include_two = args.include_two || !args.paper_faithful;
    let set = sieve.k_set();
    p.extra("bound", json!(args.bound));
    p.extra("include_two", json!(include_two));

    if args.exclusions || args.paper_faithful {
        p.text(format!("K < {}", set.k_max_exclusive))?;
        for list in &set.excluded {
            let ks: Vec<String> = list.k.iter().map(u64::to_string).collect();
            p.text(format!(
                "C={}: m in [{}, {}) K = {}",
                list.prime,
                list.m_low,
                list.m_high,
                ks.join(", ")
            ))?;
        }
        p.extra("k_max_exclusive", json!(set.k_max_exclusive));
        p.extra("exclusions", serde_json::to_value(&set.excluded)?);
    }

    let two = (include_two && args.bound > 2).then_some((2u64, None));
    let odd = set.admissible.iter().map(|&k| (2 * k + 1, Some(k)));
    for (prime, k) in two.into_iter().chain(odd) {
        p.row(prime, json!({ "prime": prime, "k": k }))?;
        let params = json!({ "kind": "exclusion-sieve", "bound": args.bound.to_string(), "k": k });
        p.record(ResultRecord::new(
            "exclusion-sieve",
            params,
            &prime.into(),
            PrimalityStatus::ProvenPrime,
        ))?;
    }
    Ok(())
}
