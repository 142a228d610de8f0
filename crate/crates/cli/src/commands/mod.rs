pub mod bench;
pub mod bigsearch;
pub mod relations;
pub mod sieve;
pub mod tables;
pub mod verify;
pub mod zscan;

use num_bigint::BigUint;
use primerel::{CandidateCertificate, PrimalityStatus};
use serde_json::Value;

use crate::output::Printer;
use crate::record::ResultRecord;
use crate::Failure;

pub(crate) fn status_name(status: PrimalityStatus) -> &'static str {
    match status {
        PrimalityStatus::ProvenPrime => "proven-prime",
        PrimalityStatus::ProvenComposite => "proven-composite",
        PrimalityStatus::ProbablePrime => "probable-prime",
    }
}

pub(crate) fn certificate_text(c: &CandidateCertificate) -> String {
    let outcome = match &c.rejection {
        None => "accepted".to_string(),
        Some(r) => {
            let reason = serde_json::to_value(r)
                .ok()
                .and_then(|v| v.get("reason").and_then(Value::as_str).map(str::to_string))
                .unwrap_or_default();
            format!("rejected ({reason})")
        }
    };
    format!(
        "R = {}  {}  {}  window ({}, {}]",
        c.value,
        outcome,
        status_name(c.verdict.status),
        c.window.low,
        c.window.high
    )
}

/// Prints a certificate, logs it when accepted, and fails loudly if the
/// oracle refutes an accepted value.
pub(crate) fn emit_certificate(p: &mut Printer, c: &CandidateCertificate) -> Result<(), Failure> {
    p.row(certificate_text(c), serde_json::to_value(c)?)?;
    if c.accepted {
        p.record(ResultRecord::new(
            &c.construction.to_string(),
            serde_json::to_value(&c.params)?,
            c.magnitude(),
            c.verdict.status,
        ))?;
    }
    check_certificate(c)
}

pub(crate) fn check_certificate(c: &CandidateCertificate) -> Result<(), Failure> {
    if c.is_violation() {
        return Err(Failure::Invariant(format!(
            "accepted value {} is composite ({}), params {}",
            c.value,
            c.verdict
                .witness
                .as_ref()
                .map(|w| format!("divisible by {w}"))
                .unwrap_or_else(|| "no witness".into()),
            serde_json::to_string(&c.params).unwrap_or_default()
        )));
    }
    Ok(())
}

pub(crate) fn parse_biguint(s: &str) -> Result<BigUint, String> {
    s.parse::<BigUint>().map_err(|e| format!("{s:?} is not a natural number: {e}"))
}

/// `LO..HI`, both inclusive.
pub(crate) fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected LO..HI, got {s:?}"))?;
    let lo: u64 = lo.trim().parse().map_err(|e| format!("{lo:?}: {e}"))?;
    let hi: u64 = hi.trim().parse().map_err(|e| format!("{hi:?}: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {s}"));
    }
    Ok((lo, hi))
}

/// A plain integer or a power written `B^E`.
pub(crate) fn parse_size(s: &str) -> Result<u64, String> {
    let s = s.trim();
    match s.split_once('^') {
        Some((b, e)) => {
            let b: u64 = b.parse().map_err(|e| format!("{s:?}: {e}"))?;
            let e: u32 = e.parse().map_err(|e| format!("{s:?}: {e}"))?;
            b.checked_pow(e).ok_or_else(|| format!("{s} overflows"))
        }
        None => s.parse().map_err(|e| format!("{s:?}: {e}")),
    }
}
