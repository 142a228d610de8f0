//! Browser bindings. Each export returns a JSON string; the plain functions
//! underneath are what the host tests exercise.

use primerel::exclusion::ExclusionSieve;
use primerel::mersenne::{scan_prime_zn, ScanMode};
use primerel::search::SearchState;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Keeps a page responsive.
pub const MAX_SIEVE_BOUND: u64 = 2_000_000;
pub const MAX_SCAN_POINTS: u64 = 20_000;
pub const MAX_SEARCH_EXPONENT: u64 = 4096;

pub fn sieve_json(bound: u64) -> Result<Value, String> {
    if bound > MAX_SIEVE_BOUND {
        return Err(format!("bound must be at most {MAX_SIEVE_BOUND}"));
    }
    let sieve = ExclusionSieve::new(bound).map_err(|e| e.to_string())?;
    let primes = sieve.primes(true);
    let shown = sieve.exclusion_lists().into_iter().take(8).collect::<Vec<_>>();
    Ok(json!({
        "bound": bound,
        "count": primes.len(),
        "largest": primes.last(),
        "primes": primes.iter().take(200).collect::<Vec<_>>(),
        "exclusions": shown,
    }))
}

pub fn scan_json(max_base: u64, max_step: u64, max_exponent: u32) -> Result<Value, String> {
    let points = max_base * max_step * u64::from(max_exponent.saturating_sub(1));
    if points > MAX_SCAN_POINTS {
        return Err(format!("grid has {points} points, limit {MAX_SCAN_POINTS}"));
    }
    let outcome = scan_prime_zn(1..=max_base, 1..=max_step, 2..=max_exponent, ScanMode::Skip)
        .map_err(|e| e.to_string())?;
    let primes: Vec<Value> = outcome
        .primes
        .iter()
        .map(|r| {
            json!({
                "a": r.params.base().to_string(),
                "c": r.params.step().to_string(),
                "n": r.params.exponent(),
                "value": r.value.to_string(),
            })
        })
        .collect();
    Ok(json!({
        "evaluated": outcome.evaluated,
        "skipped": outcome.skipped,
        "primes": primes,
    }))
}

pub fn search_json(seed: u64, max_n: u64) -> Result<Value, String> {
    if max_n > MAX_SEARCH_EXPONENT {
        return Err(format!("max n must be at most {MAX_SEARCH_EXPONENT}"));
    }
    let state = SearchState::new(seed).map_err(|e| e.to_string())?;
    let min = state.min_exponent().map_err(|e| e.to_string())?;
    let hits: Vec<Value> = state
        .search(max_n, None)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|h| json!({"k": h.k.to_string(), "n": h.n, "value": h.value().to_string()}))
        .collect();
    Ok(json!({
        "seed": seed,
        "c": state.product().to_string(),
        "min_exponent": min.map(|m| m.n),
        "hits": hits,
    }))
}

fn to_js(v: Result<Value, String>) -> Result<String, JsValue> {
    v.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn exclusion_sieve(bound: u32) -> Result<String, JsValue> {
    to_js(sieve_json(bound.into()))
}

#[wasm_bindgen]
pub fn zn_scan(max_base: u32, max_step: u32, max_exponent: u32) -> Result<String, JsValue> {
    to_js(scan_json(max_base.into(), max_step.into(), max_exponent))
}

#[wasm_bindgen]
pub fn big_search(seed: u32, max_n: u32) -> Result<String, JsValue> {
    to_js(search_json(seed.into(), max_n.into()))
}
