//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the lines show up in plain `cargo test` output.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use primerel::exclusion::primes_below;
use primerel::mersenne::{
    check_exponent_contrapositive, check_multiple_step_composite, check_strict_growth,
};
use primerel::oracle::{sieve_primes_below, PrimeBasis};
use primerel::relations::{enumerate_certified, Budget, Family};
use primerel::search::SearchState;
use serde_json::Value;

type Check = Result<String, String>;

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("primerel").chain(args.iter().copied());
    let code = primerel_cli::run_with(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn cli_ok(args: &[&str]) -> Result<String, String> {
    let (code, out, err) = cli(args);
    if code != 0 {
        return Err(format!("`{}` exited {code}: {err}", args.join(" ")));
    }
    Ok(out)
}

fn json(args: &[&str]) -> Result<Value, String> {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    serde_json::from_str(&cli_ok(&full)?).map_err(|e| e.to_string())
}

fn results(doc: &Value) -> &[Value] {
    doc["results"].as_array().map(Vec::as_slice).unwrap_or(&[])
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn trial_division(x: u64) -> bool {
    x >= 2 && (2..).take_while(|d| d * d <= x).all(|d| x % d != 0)
}

fn ac1() -> Check {
    let doc = json(&["sieve", "--bound", "120", "--paper-faithful"])?;
    let primes: Vec<u64> = results(&doc).iter().map(|r| r["prime"].as_u64().unwrap()).collect();
    let expected: Vec<u64> = (3..120).filter(|&x| trial_division(x)).collect();
    ensure(primes == expected, format!("primes {primes:?}"))?;
    ensure(primes.len() == 29, format!("{} primes", primes.len()))?;
    let lists: Vec<(u64, Vec<u64>)> = doc["exclusions"]
        .as_array()
        .ok_or("no exclusion lists")?
        .iter()
        .map(|l| {
            let k = l["k"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
            (l["prime"].as_u64().unwrap(), k)
        })
        .collect();
    let printed = vec![
        (3, (4..=58).step_by(3).collect::<Vec<u64>>()),
        (5, (12..=57).step_by(5).collect()),
        (7, vec![24, 31, 38, 45, 52, 59]),
    ];
    ensure(lists == printed, format!("exclusion lists {lists:?}"))?;
    Ok("29 odd primes 3..113, three K lists verbatim".into())
}

fn ac2() -> Check {
    let mut notes = Vec::new();
    for bound in [100u64, 1_000, 10_000, 1_000_000] {
        let b = bound.to_string();
        let doc = json(&["sieve", "--bound", &b])?;
        let from_cli: Vec<u64> = results(&doc).iter().map(|r| r["prime"].as_u64().unwrap()).collect();
        let oracle = sieve_primes_below(bound).map_err(|e| e.to_string())?;
        ensure(from_cli == oracle, format!("bound {bound}: sets differ"))?;
        ensure(primes_below(bound, true).unwrap() == oracle, format!("bound {bound}: library differs"))?;
        notes.push(format!("{bound}:{}", oracle.len()));
    }
    Ok(format!("equal sets ({})", notes.join(", ")))
}

fn value_of(args: &[&str]) -> Result<i64, String> {
    let doc = json(args)?;
    let row = results(&doc).first().ok_or("no result")?;
    ensure(row["accepted"] == Value::Bool(true), format!("not accepted: {row}"))?;
    row["value"].as_str().ok_or("no value")?.parse().map_err(|e| format!("{e}"))
}

fn ac3() -> Check {
    let columns = [
        ("2", "2", "1", "3", 59),
        ("2", "2", "2", "3", 73),
        ("2", "2", "1", "5", 89),
        ("2", "1", "11", "5", 79),
        ("2", "2", "2", "1", 43),
        ("1", "2", "2", "3", 17),
        ("1", "2", "1", "5", 61),
    ];
    for (b1, b2, k1, k2, printed) in columns {
        let got = value_of(&[
            "rel2", "--bound", "119", "--s1", "2,7", "--s2", "3,5", "--k1", k1, "--k2", k2,
            "--b1", b1, "--b2", b2, "--k3", "0",
        ])?;
        ensure(got == printed, format!("expected {printed}, got {got}"))?;
    }
    Ok("59 73 89 79 43 17 61".into())
}

fn ac4() -> Check {
    let columns = [
        ("2,1,2,2", "1,1,1,1", 107),
        ("2,2,1,1", "1,1,2,1", 61),
        ("2,2,1,1", "1,1,1,1", 103),
        ("2,2,1,1", "1,2,2,2", 101),
    ];
    for (b, k, printed) in columns {
        let got = value_of(&["rel3", "--bound", "119", "--b", b, "--k", k])?;
        ensure(got == printed, format!("expected {printed}, got {got}"))?;
    }
    Ok("107 61 103 101".into())
}

fn ac5() -> Check {
    let doc = json(&["tables"])?;
    let first: Vec<&Value> = results(&doc).iter().filter(|r| r["table"] == 1).collect();
    let status: Vec<(&str, &str)> = first
        .iter()
        .map(|r| (r["computed"].as_str().unwrap(), r["status"].as_str().unwrap()))
        .collect();
    let expected = vec![
        ("89", "reproduced"),
        ("-1139", "erratum"),
        ("67", "reproduced"),
        ("-31", "erratum"),
        ("103", "reproduced"),
    ];
    ensure(status == expected, format!("table 1: {status:?}"))?;
    let errata = doc["errata"].as_array().ok_or("no errata")?;
    let mut reached = Vec::new();
    for e in errata {
        let printed = e["printed"].as_i64().unwrap();
        let nearest = e["nearest"].as_array().unwrap();
        ensure(!nearest.is_empty(), format!("nothing reaches {printed}"))?;
        // re-evaluate the repair through the CLI
        let fix = &nearest[0];
        let m: Vec<String> = fix["m"].as_array().unwrap().iter().map(|v| v.to_string()).collect();
        let got = value_of(&[
            "rel1", "--bound", "119",
            "--b1", &fix["b1"].to_string(),
            "--b2", &fix["b2"].to_string(),
            "--k", &fix["k"].to_string(),
            "--m", &m.join(","),
        ])?;
        ensure(got == printed, format!("repair for {printed} gives {got}"))?;
        reached.push(format!("{printed} at distance {}", fix["distance"]));
    }
    ensure(reached.len() == 2, "expected two errata")?;
    let faithful = json(&["tables", "--paper-faithful"])?;
    let shown: Vec<i64> = results(&faithful)
        .iter()
        .filter(|r| r["table"] == 1)
        .map(|r| r["column"].as_i64().unwrap())
        .collect();
    ensure(shown == [1, 3, 5], format!("paper-faithful shows {shown:?}"))?;
    Ok(format!("columns 1,3,5 reproduce; errata reach {}", reached.join(", ")))
}

fn ac6() -> Check {
    let state = SearchState::new(13).map_err(|e| e.to_string())?;
    ensure(*state.product() == BigUint::from(1155u32), "c != 1155")?;
    let m = state.min_exponent().map_err(|e| e.to_string())?.ok_or("no min exponent")?;
    ensure(m.n == 10 && m.via_unit_k, format!("min exponent {m:?}"))?;
    let out = cli_ok(&["--format", "jsonl", "bigsearch", "--seed", "13", "--max-n", "18"])?;
    let hits: Vec<(String, u64, String)> = out
        .lines()
        .map(|l| {
            let v: Value = serde_json::from_str(l).unwrap();
            (v["k"].as_str().unwrap().to_string(), v["n"].as_u64().unwrap(), v["value"].as_str().unwrap().to_string())
        })
        .collect();
    let expected = vec![("1".to_string(), 10, "131".to_string()), ("227".to_string(), 18, "41".to_string())];
    ensure(hits == expected, format!("hits {hits:?}"))?;
    Ok("c=1155, min n=10, (1,10)->131 then (227,18)->41".into())
}

fn partitions(basis: &PrimeBasis) -> Vec<Vec<u64>> {
    let primes = basis.small_primes();
    let n = primes.len();
    if n < 2 {
        return Vec::new();
    }
    if n <= 5 {
        return (1..(1u32 << n) - 1)
            .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).map(|i| primes[i]).collect())
            .collect();
    }
    vec![
        vec![2],
        primes[..n / 2].to_vec(),
        primes.iter().step_by(2).copied().collect(),
        primes[..n - 1].to_vec(),
    ]
}

fn ac7a() -> Check {
    let budget = Budget::uniform(32);
    let (mut accepted, mut violations, mut bases) = (0usize, 0usize, BTreeSet::new());
    // every basis (and every factorial argument) of a bound up to 10^4
    for root in 2u64..=100 {
        let basis = PrimeBasis::for_bound((root * root).max(5)).map_err(|e| e.to_string())?;
        let mut families = vec![Family::Relation1Factorial];
        if bases.insert(basis.small_primes().to_vec()) {
            families.push(Family::Relation1);
            families.push(Family::Relation3);
            families.extend(partitions(&basis).into_iter().map(|first| Family::Relation2 { first }));
        }
        for family in &families {
            let certs = enumerate_certified(family, &basis, &budget)
                .map_err(|e| format!("root {root}, {family:?}: {e}"))?;
            for c in &certs {
                accepted += 1;
                if !c.verdict.is_proven_prime() {
                    violations += 1;
                }
            }
        }
    }
    ensure(violations == 0, format!("{violations} violations among {accepted}"))?;
    Ok(format!("{} bases, {accepted} certified values, 0 violations", bases.len()))
}

fn ac7b() -> Check {
    let mut notes = Vec::new();
    for seed in [5u64, 7, 13, 31, 101, 997] {
        let state = SearchState::new(seed).map_err(|e| e.to_string())?;
        let max_n = (2 * (seed * seed).ilog2() as u64 + 2).max(state.product().bits() + 64);
        let hits = state.search(max_n, None).map_err(|e| e.to_string())?;
        let (low, high) = (BigUint::from(seed), BigUint::from(seed * seed - 1));
        for h in &hits {
            ensure(h.certificate.verdict.is_proven_prime(), format!("seed {seed}: {} not prime", h.value()))?;
            ensure(*h.value() > low && *h.value() <= high, format!("seed {seed}: {} out of range", h.value()))?;
        }
        notes.push(format!("{seed}:{}", hits.len()));
    }
    Ok(format!("0 violations; hits per seed {} (no seed above 13 has any)", notes.join(" ")))
}

fn ac7c() -> Check {
    let mut cases = 0;
    for base in 1u64..=20 {
        for step in 1u64..=20 {
            let v = check_exponent_contrapositive(&base.into(), &step.into(), 24).map_err(|e| e.to_string())?;
            ensure(v.is_empty(), format!("base {base}, step {step}: {v:?}"))?;
            cases += 1;
        }
    }
    for base in 2u64..=10 {
        for d in 1u64..=5 {
            let r = check_multiple_step_composite(&base.into(), &d.into(), 12).map_err(|e| e.to_string())?;
            ensure(r.violations.is_empty(), format!("base {base}, d {d}: {:?}", r.violations))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} grids, 0 violations"))
}

fn ac7d() -> Check {
    for n in 2..=16 {
        ensure(check_strict_growth(n, 1000).map_err(|e| e.to_string())?, format!("n = {n}"))?;
    }
    Ok("n <= 16, a <= 1000, 0 violations".into())
}

fn ac8() -> Check {
    let out = cli_ok(&["--format", "jsonl", "zscan", "--a", "1..1", "--c", "1..1", "--n", "2..31", "--no-skip"])?;
    let exps: Vec<u64> = out
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap()["n"].as_u64().unwrap())
        .collect();
    ensure(exps == [2, 3, 5, 7, 13, 17, 19, 31], format!("{exps:?}"))?;
    Ok("2 3 5 7 13 17 19 31".into())
}

/// Drops every field that carries a timing.
fn strip_timings(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.retain(|k, _| !k.ends_with("_ms") && !k.ends_with("_per_sec"));
            map.values_mut().for_each(strip_timings);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timings),
        _ => {}
    }
}

/// Bench text and csv output: drops columns whose header names a timing.
fn strip_timing_columns(out: &str) -> String {
    let mut lines = out.lines();
    let header: Vec<&str> = lines.next().unwrap_or_default().split(',').collect();
    let keep = |i: usize| !header[i].ends_with("_ms") && !header[i].ends_with("_per_sec");
    std::iter::once(out.lines().next().unwrap_or_default())
        .chain(lines)
        .map(|l| {
            l.split(',')
                .enumerate()
                .filter(|&(i, _)| i < header.len() && keep(i))
                .map(|(_, f)| f)
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn ac9() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let log = dir.path().join("log.jsonl");
    let log = log.to_str().unwrap();
    cli_ok(&["--log", log, "bigsearch", "--seed", "13", "--max-n", "40"])?;
    let runs: Vec<Vec<&str>> = vec![
        vec!["sieve", "--bound", "100000"],
        vec!["sieve", "--bound", "120", "--paper-faithful"],
        vec!["zscan", "--a", "1..6", "--c", "1..6", "--n", "2..16", "--no-skip"],
        vec!["rel1", "--bound", "400", "--enumerate", "--budget", "8"],
        vec!["rel1f", "--bound", "49", "--enumerate", "--budget", "8"],
        vec!["rel2", "--bound", "1000", "--s1", "2,7,11", "--enumerate", "--budget", "16"],
        vec!["rel3", "--bound", "119", "--enumerate", "--budget", "3", "--verbose"],
        vec!["tables"],
        vec!["bigsearch", "--seed", "13", "--max-n", "200"],
        vec!["bench", "--suite", "sieve-vs-oracle", "--ladder", "10^3,10^4"],
        vec!["bench", "--suite", "relations-throughput", "--ladder", "4"],
        vec!["bench", "--suite", "bigsearch-scaling", "--ladder", "13,31"],
        vec!["--log", log, "verify"],
    ];
    for args in &runs {
        for format in ["json", "jsonl", "csv", "text"] {
            let mut outputs = Vec::new();
            for workers in ["1", "8"] {
                let mut full = vec!["--format", format, "--workers", workers];
                full.extend_from_slice(args);
                let out = cli_ok(&full)?;
                let normalized = match format {
                    "json" => {
                        let mut v: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
                        strip_timings(&mut v);
                        v.to_string()
                    }
                    "jsonl" => out
                        .lines()
                        .map(|l| {
                            let mut v: Value = serde_json::from_str(l).unwrap();
                            strip_timings(&mut v);
                            v.to_string()
                        })
                        .collect::<Vec<_>>()
                        .join("\n"),
                    _ if args[0] == "bench" => strip_timing_columns(&out),
                    _ => out,
                };
                outputs.push(normalized);
            }
            ensure(outputs[0] == outputs[1], format!("`{}` ({format}) differs between 1 and 8 workers", args.join(" ")))?;
        }
    }
    Ok(format!("{} invocations x 4 formats byte-identical", runs.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, &str, u64, fn() -> Check); 12] = [
        ("AC1", "exclusion sieve worked example", 1, ac1),
        ("AC2", "exclusion sieve equals segmented sieve", 30, ac2),
        ("AC3", "table 2 reproduction", 1, ac3),
        ("AC4", "table 3 reproduction", 1, ac4),
        ("AC5", "table 1 partial reproduction and errata", 5, ac5),
        ("AC6", "seeded search worked example", 1, ac6),
        ("AC7a", "relation soundness, bounds <= 10^4, budget 32", 600, ac7a),
        ("AC7b", "seeded search soundness", 300, ac7b),
        ("AC7c", "composite exponent and multiple step grids", 120, ac7c),
        ("AC7d", "strict growth above 2^n - 1", 60, ac7d),
        ("AC8", "classical Mersenne exponents up to 31", 60, ac8),
        ("AC9", "determinism across worker counts", 600, ac9),
    ];
    let mut failed = 0;
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let (tag, detail) = match (&outcome, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("too slow: {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!(
            "[{tag}] {id} {name} ({:.2} s, limit {limit} s): {detail}",
            elapsed.as_secs_f64()
        );
    }
    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
