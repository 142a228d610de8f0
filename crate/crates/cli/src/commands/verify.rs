use num_bigint::BigUint;
use primerel::oracle::Oracle;
use serde_json::json;

use super::status_name;
use crate::output::Printer;
use crate::record::read_log;
use crate::{Context, Failure};

/// The log to re-check is the global `--log`.
#[derive(Debug, clap::Args)]
pub struct Args {}

pub fn run(_args: &Args, ctx: &Context, p: &mut Printer) -> Result<(), Failure> {
    let path = ctx
        .log_path
        .as_deref()
        .ok_or_else(|| Failure::Validation("verify needs --log PATH".into()))?;
    let records = read_log(path)?;
    let oracle = Oracle::default();
    let mut mismatches = 0;
    for (i, r) in records.iter().enumerate() {
        let problem = match r.value.parse::<BigUint>() {
            Err(_) => Some(format!("value {:?} is not a natural number", r.value)),
            Ok(v) => {
                let verdict = oracle.check(&v);
                if !verdict.is_prime() {
                    Some(format!("{v} is {}", status_name(verdict.status)))
                } else if verdict.status != r.verdict {
                    Some(format!(
                        "recorded {}, oracle says {}",
                        status_name(r.verdict),
                        status_name(verdict.status)
                    ))
                } else if r.digits != r.value.len() {
                    Some(format!("recorded {} digits for a {}-digit value", r.digits, r.value.len()))
                } else {
                    None
                }
            }
        };
        if let Some(problem) = problem {
            mismatches += 1;
            p.row(
                format!("record {}: {problem}", i + 1),
                json!({ "record": i + 1, "value": r.value, "problem": problem }),
            )?;
        }
    }
    p.text(format!(
        "{} records, {} verified, {mismatches} mismatches",
        records.len(),
        records.len() - mismatches
    ))?;
    p.extra("records", json!(records.len()));
    p.extra("verified", json!(records.len() - mismatches));
    p.extra("mismatches", json!(mismatches));
    if mismatches > 0 {
        return Err(Failure::Invariant(format!(
            "{mismatches} of {} records failed re-verification",
            records.len()
        )));
    }
    Ok(())
}
