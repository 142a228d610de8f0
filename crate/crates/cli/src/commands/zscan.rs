use primerel::mersenne::{scan_prime_zn, ScanMode, ZnResult};
use serde_json::json;

use super::{parse_range, status_name};
use crate::output::Printer;
use crate::record::ResultRecord;
use crate::Failure;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Base range `LO..HI`.
    #[arg(long = "a", value_parser = parse_range)]
    pub bases: (u64, u64),
    /// Step range `LO..HI`.
    #[arg(long = "c", value_parser = parse_range)]
    pub steps: (u64, u64),
    /// Exponent range `LO..HI`.
    #[arg(long = "n", value_parser = parse_range)]
    pub exponents: (u64, u64),
    /// Evaluate tuples the composite rules would skip and report any prime among them.
    #[arg(long)]
    pub no_skip: bool,
}

fn row(z: &ZnResult) -> serde_json::Value {
    json!({
        "base": z.params.base().to_string(),
        "step": z.params.step().to_string(),
        "n": z.params.exponent(),
        "value": z.value.to_string(),
        "digits": z.value.to_string().len(),
        "verdict": status_name(z.verdict.status),
    })
}

pub fn run(args: &Args, p: &mut Printer) -> Result<(), Failure> {
    let exp = |x: u64| {
        u32::try_from(x).map_err(|_| Failure::Validation(format!("exponent {x} is too large")))
    };
    let mode = if args.no_skip { ScanMode::NoSkip } else { ScanMode::Skip };
    let outcome = scan_prime_zn(
        args.bases.0..=args.bases.1,
        args.steps.0..=args.steps.1,
        exp(args.exponents.0)?..=exp(args.exponents.1)?,
        mode,
    )?;
    for z in &outcome.primes {
        p.row(
            format!(
                "Z(a={}, C={}, n={}) = {}  {}",
                z.params.base(),
                z.params.step(),
                z.params.exponent(),
                z.value,
                status_name(z.verdict.status)
            ),
            row(z),
        )?;
        p.record(ResultRecord::new(
            "general-mersenne",
            serde_json::to_value(&z.params)?,
            &z.value,
            z.verdict.status,
        ))?;
    }
    p.text(format!(
        "{} prime, {} evaluated, {} skipped, {} skip violations",
        outcome.primes.len(),
        outcome.evaluated,
        outcome.skipped,
        outcome.skip_violations.len()
    ))?;
    p.extra("evaluated", json!(outcome.evaluated));
    p.extra("skipped", json!(outcome.skipped));
    p.extra(
        "skip_violations",
        outcome.skip_violations.iter().map(row).collect(),
    );
    if let Some(z) = outcome.skip_violations.first() {
        return Err(Failure::Invariant(format!(
            "Z(a={}, C={}, n={}) is prime although a composite rule covers it",
            z.params.base(),
            z.params.step(),
            z.params.exponent()
        )));
    }
    Ok(())
}
