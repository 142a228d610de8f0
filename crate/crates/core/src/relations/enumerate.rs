//! Bounded enumeration of certified primes for one basis.
//!
//! Relation 1 walks its exponent grid explicitly and solves for the
//! multipliers that land in the window. Relations 2 and 3 have far too many
//! tuples to walk once the basis grows, so they are enumerated by value:
//! for each `r` in the window the residues of `r` fix every signed
//! multiplier modulo its prime, the admissible multipliers form arithmetic
//! progressions, and moving one multiplier one step along its progression
//! moves the full-product coefficient by exactly one. Reachability within
//! the budget is therefore an interval test, and a witness tuple falls out
//! of it. Every witness is re-evaluated through the public `eval_*` path.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use super::factorial::basis_factorial;
use super::relation1::{exponent_map, window_envelope};
use super::relation2::validate_partition;
use super::{
    eval_relation1, eval_relation1_factorial, eval_relation2, eval_relation3, standard_window,
    Parity, Relation1FactorialParams, Relation1Params, Relation2Params, Relation3Params,
};
use crate::certificate::CandidateCertificate;
use crate::error::{Error, Result};
use crate::oracle::PrimeBasis;

/// Default cap on grid points (or window positions) one enumeration may visit.
pub const DEFAULT_CANDIDATE_CAP: usize = 1_000_000;

/// Bounds on every free parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Each multiplier `K`, `k_i` lies in `[1, max_multiplier]`; a trailing
    /// full-product multiplier lies in `[0, max_multiplier]`.
    pub max_multiplier: u64,
    /// Each large-prime exponent lies in `[0, max_exponent]`.
    pub max_exponent: u32,
    /// How many primes `C_{n+1}, C_{n+2}, ...` relation 1 may raise to a power.
    pub large_primes: usize,
    pub candidate_cap: usize,
}

impl Budget {
    pub fn uniform(budget: u32) -> Self {
        Budget {
            max_multiplier: budget as u64,
            max_exponent: budget,
            large_primes: 3,
            candidate_cap: DEFAULT_CANDIDATE_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Relation1,
    Relation1Factorial,
    /// Relation 2 with `S1 = first` and `S2` its complement in the basis.
    Relation2 { first: Vec<u64> },
    Relation3,
}

/// Every accepted value reachable within `budget`, once each, ascending.
pub fn enumerate_certified(
    family: &Family,
    basis: &PrimeBasis,
    budget: &Budget,
) -> Result<Vec<CandidateCertificate>> {
    if budget.max_multiplier == 0 {
        return Ok(Vec::new());
    }
    match family {
        Family::Relation1 => Ok(dedup(relation1_grid(basis, budget, false)?)),
        Family::Relation1Factorial => Ok(dedup(relation1_grid(basis, budget, true)?)),
        Family::Relation2 { first } => relation2_by_value(basis, first, budget),
        Family::Relation3 => relation3_by_value(basis, budget),
    }
}

/// Every accepted parameter tuple in grid order, duplicates included.
pub fn enumerate_multiset(
    family: &Family,
    basis: &PrimeBasis,
    budget: &Budget,
) -> Result<Vec<CandidateCertificate>> {
    if budget.max_multiplier == 0 {
        return Ok(Vec::new());
    }
    match family {
        Family::Relation1 => relation1_grid(basis, budget, false),
        Family::Relation1Factorial => relation1_grid(basis, budget, true),
        Family::Relation2 { first } => relation2_grid(basis, first, budget),
        Family::Relation3 => relation3_grid(basis, budget),
    }
}

fn dedup(mut certs: Vec<CandidateCertificate>) -> Vec<CandidateCertificate> {
    certs.sort_by(|a, b| a.value.cmp(&b.value));
    certs.dedup_by(|a, b| a.value == b.value);
    certs
}

fn over_cap(what: &str, count: Option<usize>, cap: usize) -> Result<usize> {
    match count {
        Some(c) if c <= cap => Ok(c),
        _ => Err(Error::resource(
            "candidate-cap",
            format!("{what} exceeds the candidate cap of {cap}"),
        )),
    }
}

const SIGN_PAIRS: [(Parity, Parity); 4] = [
    (Parity::Even, Parity::Even),
    (Parity::Even, Parity::Odd),
    (Parity::Odd, Parity::Even),
    (Parity::Odd, Parity::Odd),
];

/// Multipliers `K` in `[1, k_max]` with `s1*K*small + s2*large` in `(lo, hi]`.
fn multipliers_in_window(
    s1: Parity,
    s2: Parity,
    small: &BigInt,
    large: &BigInt,
    lo: &BigInt,
    hi: &BigInt,
    k_max: u64,
) -> Option<(u64, u64)> {
    let shifted = |x: &BigInt| match s2 {
        Parity::Even => x - large,
        Parity::Odd => x + large,
    };
    let (first, last) = match s1 {
        // lo - s2*P < K*small <= hi - s2*P
        Parity::Even => (
            shifted(lo).div_floor(small) + 1,
            shifted(hi).div_floor(small),
        ),
        // s2*P - hi <= K*small < s2*P - lo
        Parity::Odd => (
            ceil_div(&-shifted(hi), small),
            ceil_div(&-shifted(lo), small) - 1,
        ),
    };
    let first = first.max(BigInt::one());
    let last = last.min(BigInt::from(k_max));
    if first > last {
        return None;
    }
    Some((first.to_u64().unwrap(), last.to_u64().unwrap()))
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn relation1_grid(basis: &PrimeBasis, budget: &Budget, factorial: bool) -> Result<Vec<CandidateCertificate>> {
    let small = BigInt::from(if factorial {
        basis_factorial(basis)?
    } else {
        basis.product()
    });
    let large_primes = basis.large_primes(budget.large_primes);
    let radix = budget.max_exponent as usize + 1;
    let count = over_cap(
        "exponent grid",
        radix.checked_pow(large_primes.len() as u32),
        budget.candidate_cap,
    )?;
    let powers: Vec<Vec<BigUint>> = large_primes
        .iter()
        .map(|&p| {
            let p = BigUint::from(p);
            (0..radix as u32).map(|e| p.pow(e)).collect()
        })
        .collect();
    let lo = BigInt::from(basis.largest());

    let per_vector: Vec<Result<Vec<CandidateCertificate>>> = (0..count)
        .into_par_iter()
        .map(|index| {
            let mut exps = vec![0u32; large_primes.len()];
            let mut rest = index;
            for slot in exps.iter_mut().rev() {
                *slot = (rest % radix) as u32;
                rest /= radix;
            }
            let large: BigUint = exps.iter().zip(&powers).map(|(&e, pw)| &pw[e as usize]).product();
            let large = BigInt::from(large);
            let map = exponent_map(&exps);
            let hi = BigInt::from(window_envelope(basis, &map).high);

            let mut out = Vec::new();
            for (s1, s2) in SIGN_PAIRS {
                let Some((first, last)) =
                    multipliers_in_window(s1, s2, &small, &large, &lo, &hi, budget.max_multiplier)
                else {
                    continue;
                };
                for k in first..=last {
                    let cert = if factorial {
                        eval_relation1_factorial(&Relation1FactorialParams::new(
                            basis.clone(),
                            s1,
                            s2,
                            k,
                            &exps,
                        ))?
                    } else {
                        eval_relation1(&Relation1Params::new(basis.clone(), s1, s2, k, &exps))?
                    };
                    if cert.accepted {
                        out.push(cert);
                    }
                }
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for chunk in per_vector {
        all.extend(chunk?);
    }
    Ok(all)
}

/// Smallest and largest `x` in `[-bound, bound]` with `x = residue (mod m)`.
fn progression_ends(residue: &BigInt, m: &BigInt, bound: &BigInt) -> Option<(BigInt, BigInt)> {
    let low = -bound + (residue + bound).mod_floor(m);
    let high = bound - (bound - residue).mod_floor(m);
    (low <= high).then_some((low, high))
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    g.gcd.is_one().then(|| g.x.mod_floor(m))
}

fn window_positions(basis: &PrimeBasis, cap: usize) -> Result<(BigInt, usize)> {
    let w = standard_window(basis);
    let width = (&w.high - &w.low).to_usize();
    let width = over_cap("certificate window", width, cap)?;
    Ok((BigInt::from(w.low), width))
}

/// Picks how far to walk each progression so the full-product coefficient
/// drops from `q_max` to a value in `[-bound, bound]` nearest zero.
/// Returns the coefficient and per-term step counts, or `None` if no value
/// in range is reachable.
fn settle(q_max: &BigInt, room: &[BigInt], bound: &BigInt) -> Option<(BigInt, Vec<BigInt>)> {
    let total: BigInt = room.iter().sum();
    let q_min = q_max - &total;
    if q_min > *bound || *q_max < -bound {
        return None;
    }
    let lo = q_min.max(-bound);
    let hi = q_max.clone().min(bound.clone());
    let target = BigInt::zero().max(lo).min(hi);
    let mut left = q_max - &target;
    let steps = room
        .iter()
        .map(|r| {
            let take = left.clone().min(r.clone());
            left -= &take;
            take
        })
        .collect();
    Some((target, steps))
}

fn parity_and_magnitude(x: &BigInt) -> (Parity, BigUint) {
    (Parity::of_sign(x), x.magnitude().clone())
}

fn witness_check(cert: CandidateCertificate, r: &BigInt) -> Result<CandidateCertificate> {
    if !cert.accepted || cert.value != *r {
        return Err(Error::Invariant(format!(
            "witness for {r} evaluated to {} (accepted = {})",
            cert.value, cert.accepted
        )));
    }
    Ok(cert)
}

fn relation2_by_value(
    basis: &PrimeBasis,
    first: &[u64],
    budget: &Budget,
) -> Result<Vec<CandidateCertificate>> {
    let template = Relation2Params::with_complement(basis.clone(), first, [Parity::Even; 3], [1, 1, 0]);
    validate_partition(basis, &template.first, &template.second)?;
    let (a, b) = template.parts();
    let (a, b) = (BigInt::from(a), BigInt::from(b));
    let all = &a * &b;
    let a_inv = mod_inverse(&a.mod_floor(&b), &b).expect("disjoint parts are coprime");
    let b_inv = mod_inverse(&b.mod_floor(&a), &a).expect("disjoint parts are coprime");
    let bound = BigInt::from(budget.max_multiplier);
    let (low, width) = window_positions(basis, budget.candidate_cap)?;

    let found: Vec<Result<Option<CandidateCertificate>>> = (1..=width)
        .into_par_iter()
        .map(|offset| {
            let r = &low + offset;
            if basis.small_primes().iter().any(|&p| (&r % p).is_zero()) {
                return Ok(None);
            }
            let u = (&r * &a_inv).mod_floor(&b);
            let v = (&r * &b_inv).mod_floor(&a);
            let (Some((x1, x1_top)), Some((x2, x2_top))) = (
                progression_ends(&u, &b, &bound),
                progression_ends(&v, &a, &bound),
            ) else {
                return Ok(None);
            };
            let q_max = (&r - &x1 * &a - &x2 * &b) / &all;
            let room = [(&x1_top - &x1) / &b, (&x2_top - &x2) / &a];
            let Some((q, steps)) = settle(&q_max, &room, &bound) else {
                return Ok(None);
            };
            let x1 = x1 + &steps[0] * &b;
            let x2 = x2 + &steps[1] * &a;
            let ((b1, k1), (b2, k2), (b3, k3)) =
                (parity_and_magnitude(&x1), parity_and_magnitude(&x2), parity_and_magnitude(&q));
            let params = Relation2Params {
                signs: [b1, b2, b3],
                k1,
                k2,
                k3,
                ..template.clone()
            };
            witness_check(eval_relation2(&params)?, &r).map(Some)
        })
        .collect();
    found.into_iter().filter_map(Result::transpose).collect()
}

fn relation3_by_value(basis: &PrimeBasis, budget: &Budget) -> Result<Vec<CandidateCertificate>> {
    let primes = basis.small_primes();
    let all = BigInt::from(basis.product());
    let cofactors: Vec<BigInt> = primes.iter().map(|&c| &all / c).collect();
    let inverses: Vec<BigInt> = primes
        .iter()
        .zip(&cofactors)
        .map(|(&c, co)| {
            let c = BigInt::from(c);
            mod_inverse(&co.mod_floor(&c), &c).expect("cofactor is prime to its prime")
        })
        .collect();
    let bound = BigInt::from(budget.max_multiplier);
    let (low, width) = window_positions(basis, budget.candidate_cap)?;

    let found: Vec<Result<Option<CandidateCertificate>>> = (1..=width)
        .into_par_iter()
        .map(|offset| {
            let r = &low + offset;
            let mut starts = Vec::with_capacity(primes.len());
            let mut room = Vec::with_capacity(primes.len());
            for (&c, inv) in primes.iter().zip(&inverses) {
                let c = BigInt::from(c);
                let t = (&r * inv).mod_floor(&c);
                if t.is_zero() {
                    return Ok(None);
                }
                let Some((x, top)) = progression_ends(&t, &c, &bound) else {
                    return Ok(None);
                };
                room.push((&top - &x) / &c);
                starts.push(x);
            }
            let base: BigInt = starts.iter().zip(&cofactors).map(|(x, co)| x * co).sum();
            let q_max = (&r - base) / &all;
            let Some((q, steps)) = settle(&q_max, &room, &bound) else {
                return Ok(None);
            };
            let mut signs = Vec::with_capacity(primes.len() + 1);
            let mut multipliers = Vec::with_capacity(primes.len());
            for ((x, step), &c) in starts.iter().zip(&steps).zip(primes) {
                let (s, k) = parity_and_magnitude(&(x + step * BigInt::from(c)));
                signs.push(s);
                multipliers.push(k);
            }
            let (s, last) = parity_and_magnitude(&q);
            signs.push(s);
            let params = Relation3Params {
                basis: basis.clone(),
                signs,
                multipliers,
                last,
            };
            witness_check(eval_relation3(&params)?, &r).map(Some)
        })
        .collect();
    found.into_iter().filter_map(Result::transpose).collect()
}

fn relation2_grid(basis: &PrimeBasis, first: &[u64], budget: &Budget) -> Result<Vec<CandidateCertificate>> {
    let b = budget.max_multiplier;
    let template = Relation2Params::with_complement(basis.clone(), first, [Parity::Even; 3], [1, 1, 0]);
    template.validate()?;
    let points = (b as usize)
        .checked_mul(b as usize)
        .and_then(|x| x.checked_mul(b as usize + 1))
        .and_then(|x| x.checked_mul(8));
    over_cap("relation 2 grid", points, budget.candidate_cap)?;

    let mut out = Vec::new();
    for signs in sign_vectors(3) {
        for k1 in 1..=b {
            for k2 in 1..=b {
                for k3 in 0..=b {
                    let p = Relation2Params {
                        signs: [signs[0], signs[1], signs[2]],
                        k1: k1.into(),
                        k2: k2.into(),
                        k3: k3.into(),
                        ..template.clone()
                    };
                    let cert = eval_relation2(&p)?;
                    if cert.accepted {
                        out.push(cert);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn relation3_grid(basis: &PrimeBasis, budget: &Budget) -> Result<Vec<CandidateCertificate>> {
    let n = basis.len();
    let b = budget.max_multiplier as usize;
    let points = b
        .checked_pow(n as u32)
        .and_then(|x| x.checked_mul(b + 1))
        .and_then(|x| x.checked_mul(1usize.checked_shl(n as u32 + 1)?));
    over_cap("relation 3 grid", points, budget.candidate_cap)?;

    let mut out = Vec::new();
    for signs in sign_vectors(n + 1) {
        let mut ks = vec![1u64; n];
        loop {
            for last in 0..=budget.max_multiplier {
                let p = Relation3Params::new(basis.clone(), &signs, &ks, last);
                let cert = eval_relation3(&p)?;
                if cert.accepted {
                    out.push(cert);
                }
            }
            // odometer over k_1..k_n in [1, b]
            let Some(i) = ks.iter().rposition(|&k| k < b as u64) else {
                break;
            };
            ks[i] += 1;
            ks[i + 1..].iter_mut().for_each(|k| *k = 1);
        }
    }
    Ok(out)
}

fn sign_vectors(len: usize) -> impl Iterator<Item = Vec<Parity>> {
    (0u64..1 << len).map(move |bits| {
        (0..len)
            .map(|i| {
                if bits >> (len - 1 - i) & 1 == 1 {
                    Parity::Odd
                } else {
                    Parity::Even
                }
            })
            .collect()
    })
}
