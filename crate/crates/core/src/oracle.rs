//! Ground-truth arithmetic: segmented sieving, a primality oracle with an
//! explicit proof method, prime bases, and the odd primorial product.
//!
//! Every construction elsewhere in the crate is checked against this module,
//! and nothing in here depends on those constructions.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decimal;
use crate::error::{Error, Result};

/// Largest limit accepted by [`sieve_primes_below`].
pub const MAX_SIEVE_LIMIT: u64 = 1 << 40;

/// Default number of integers covered by one sieve segment.
pub const DEFAULT_SEGMENT_LEN: usize = 1 << 20;

/// Strong-pseudoprime tests to the first thirteen prime bases are
/// deterministic below this value (Sorenson & Webster, 2015).
pub const DETERMINISTIC_LIMIT: u128 = 3_317_044_064_679_887_385_961_981;

/// Default number of random bases used above [`DETERMINISTIC_LIMIT`].
pub const DEFAULT_ROUNDS: u32 = 64;

/// Default digit cap for [`odd_prime_product`].
pub const DEFAULT_MAX_PRODUCT_DIGITS: u64 = 1_000_000;

const LOOKUP_LIMIT: u64 = 1 << 16;
const TRIAL_LIMIT: u64 = 1000;
// Smallest prime above TRIAL_LIMIT; anything below its square with no
// factor under TRIAL_LIMIT is prime.
const TRIAL_PROVES_BELOW: u64 = 1009 * 1009;

const U64_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
const WIDE_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrimalityStatus {
    ProvenPrime,
    ProvenComposite,
    ProbablePrime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProofMethod {
    SieveLookup,
    TrialDivision,
    DeterministicSpp,
    ProbabilisticSpp,
}

/// Outcome of a primality check.
///
/// `0` and `1` are reported as proven composite without a witness so that
/// downstream checks only ever see two outcomes in the deterministic range.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleVerdict {
    #[serde(with = "decimal::nat")]
    pub value: BigUint,
    pub status: PrimalityStatus,
    pub method: ProofMethod,
    #[serde(with = "decimal::opt_nat", default)]
    pub witness: Option<BigUint>,
}

impl OracleVerdict {
    fn new(value: BigUint, status: PrimalityStatus, method: ProofMethod) -> Self {
        OracleVerdict {
            value,
            status,
            method,
            witness: None,
        }
    }

    fn composite_with(value: BigUint, witness: u64, method: ProofMethod) -> Self {
        OracleVerdict {
            value,
            status: PrimalityStatus::ProvenComposite,
            method,
            witness: Some(BigUint::from(witness)),
        }
    }

    /// True for proven and probable primes.
    pub fn is_prime(&self) -> bool {
        self.status != PrimalityStatus::ProvenComposite
    }

    pub fn is_proven_prime(&self) -> bool {
        self.status == PrimalityStatus::ProvenPrime
    }

    pub fn is_proven(&self) -> bool {
        self.status != PrimalityStatus::ProbablePrime
    }
}

/// Primality oracle. The only tunable is the number of random bases used
/// above the deterministic range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Oracle {
    pub rounds: u32,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            rounds: DEFAULT_ROUNDS,
        }
    }
}

/// Checks `x` with the default oracle.
pub fn is_prime(x: &BigUint) -> OracleVerdict {
    Oracle::default().check(x)
}

/// Fast path for machine words; agrees with [`is_prime`].
pub fn is_prime_u64(x: u64) -> bool {
    if x < LOOKUP_LIMIT {
        return x >= 2 && smallest_factor_table()[x as usize] as u64 == x;
    }
    if trial_factor(x).is_some() {
        return false;
    }
    x < TRIAL_PROVES_BELOW || U64_BASES.iter().all(|&a| sprp_u64(x, a))
}

impl Oracle {
    pub fn check(&self, x: &BigUint) -> OracleVerdict {
        use PrimalityStatus::*;
        use ProofMethod::*;

        if let Some(small) = x.to_u64() {
            if small < LOOKUP_LIMIT {
                let spf = smallest_factor_table()[small as usize] as u64;
                return match small {
                    0 | 1 => OracleVerdict::new(x.clone(), ProvenComposite, SieveLookup),
                    _ if spf == small => OracleVerdict::new(x.clone(), ProvenPrime, SieveLookup),
                    _ => OracleVerdict::composite_with(x.clone(), spf, SieveLookup),
                };
            }
            if let Some(p) = trial_factor(small) {
                return OracleVerdict::composite_with(x.clone(), p, TrialDivision);
            }
            if small < TRIAL_PROVES_BELOW {
                return OracleVerdict::new(x.clone(), ProvenPrime, TrialDivision);
            }
            let prime = U64_BASES.iter().all(|&a| sprp_u64(small, a));
            let status = if prime { ProvenPrime } else { ProvenComposite };
            return OracleVerdict::new(x.clone(), status, DeterministicSpp);
        }

        for &p in small_primes_below_trial_limit() {
            if (x % p).is_zero() {
                return OracleVerdict::composite_with(x.clone(), p, TrialDivision);
            }
        }

        let wide = x.to_u128().is_some_and(|v| v < DETERMINISTIC_LIMIT);
        if wide {
            let prime = WIDE_BASES
                .iter()
                .all(|&a| sprp_big(x, &BigUint::from(a)));
            let status = if prime { ProvenPrime } else { ProvenComposite };
            return OracleVerdict::new(x.clone(), status, DeterministicSpp);
        }

        // Bases drawn from a stream keyed on the value keep verdicts reproducible.
        let mut rng = ChaCha8Rng::seed_from_u64(low_word(x) ^ 0x9e37_79b9_7f4a_7c15);
        let span = x - 3u32;
        for _ in 0..self.rounds.max(1) {
            let base = random_below(&mut rng, &span) + 2u32;
            if !sprp_big(x, &base) {
                return OracleVerdict::new(x.clone(), ProvenComposite, ProbabilisticSpp);
            }
        }
        OracleVerdict::new(x.clone(), ProbablePrime, ProbabilisticSpp)
    }
}

fn low_word(x: &BigUint) -> u64 {
    x.iter_u64_digits().next().unwrap_or(0)
}

fn random_below(rng: &mut ChaCha8Rng, span: &BigUint) -> BigUint {
    let words = span.bits().div_ceil(64) as usize + 1;
    let raw: Vec<u32> = (0..words * 2).map(|_| rng.next_u32()).collect();
    BigUint::new(raw) % span
}

fn smallest_factor_table() -> &'static [u16] {
    static TABLE: OnceLock<Vec<u16>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = LOOKUP_LIMIT as usize;
        let mut spf = vec![0u16; n];
        for i in 2..n {
            if spf[i] == 0 {
                spf[i] = i as u16;
                let mut j = i * i;
                while j < n {
                    if spf[j] == 0 {
                        spf[j] = i as u16;
                    }
                    j += i;
                }
            }
        }
        spf
    })
}

fn small_primes_below_trial_limit() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let table = smallest_factor_table();
        (2..TRIAL_LIMIT)
            .filter(|&i| table[i as usize] as u64 == i)
            .collect()
    })
}

fn trial_factor(x: u64) -> Option<u64> {
    small_primes_below_trial_limit()
        .iter()
        .copied()
        .take_while(|&p| p * p <= x)
        .find(|&p| x % p == 0)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Strong probable-prime test of odd `n > 2` to base `a`.
pub(crate) fn sprp_u64(n: u64, a: u64) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let d_total = n - 1;
    let s = d_total.trailing_zeros();
    let d = d_total >> s;
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

fn sprp_big(n: &BigUint, a: &BigUint) -> bool {
    let a = a % n;
    if a.is_zero() {
        return true;
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut x = a.modpow(&d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Segmented sieve of Eratosthenes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SieveConfig {
    pub segment_len: usize,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            segment_len: DEFAULT_SEGMENT_LEN,
        }
    }
}

/// All primes strictly below `limit`, ascending.
pub fn sieve_primes_below(limit: u64) -> Result<Vec<u64>> {
    SieveConfig::default().primes_below(limit)
}

impl SieveConfig {
    pub fn primes_below(&self, limit: u64) -> Result<Vec<u64>> {
        if !(2..=MAX_SIEVE_LIMIT).contains(&limit) {
            return Err(Error::Range(format!(
                "sieve limit {limit} outside [2, 2^40]"
            )));
        }
        if self.segment_len == 0 {
            return Err(Error::Range("segment length must be positive".into()));
        }
        let root = (limit - 1).sqrt();
        let base = simple_sieve(root + 1);
        let seg = self.segment_len as u64;
        let segments = limit.div_ceil(seg);

        let chunks: Vec<Vec<u64>> = (0..segments)
            .into_par_iter()
            .map(|i| {
                let lo = i * seg;
                let hi = (lo + seg).min(limit);
                sieve_segment(lo, hi, &base)
            })
            .collect();
        Ok(chunks.concat())
    }
}

fn simple_sieve(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n.max(2)];
    let mut out = Vec::new();
    for i in 2..n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j < n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn sieve_segment(lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
    let len = (hi - lo) as usize;
    let mut composite = vec![false; len];
    for &p in base.iter().skip(1) {
        if p * p >= hi {
            break;
        }
        // Odd multiples only, starting no lower than p^2.
        let mut start = lo.div_ceil(p).max(p) * p;
        if start % 2 == 0 {
            start += p;
        }
        let mut j = start;
        while j < hi {
            composite[(j - lo) as usize] = true;
            j += 2 * p;
        }
    }
    let mut out = Vec::new();
    if lo <= 2 && 2 < hi {
        out.push(2);
    }
    let first_odd = (lo.max(3)) | 1;
    let mut n = first_odd;
    while n < hi {
        if !composite[(n - lo) as usize] {
            out.push(n);
        }
        n += 2;
    }
    out
}

/// Smallest prime strictly greater than `x`.
pub fn next_prime_after(x: u64) -> u64 {
    let mut c = x + 1;
    while !is_prime_u64(c) {
        c += 1;
    }
    c
}

/// The primes `2, C_1, ..., C_n` not exceeding `sqrt(bound)`, together with
/// `C_{n+1}`, the first prime above it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeBasis {
    #[serde(with = "decimal::nat")]
    bound: BigUint,
    small_primes: Vec<u64>,
    next_prime: u64,
}

/// Builds the prime basis for `bound`.
pub fn primes_leq_sqrt(bound: &BigUint) -> Result<PrimeBasis> {
    if *bound < BigUint::from(5u32) {
        return Err(Error::Range(format!(
            "basis bound {bound} below 5 has no prime at or under its square root"
        )));
    }
    let root = bound
        .sqrt()
        .to_u64()
        .filter(|&r| r < MAX_SIEVE_LIMIT)
        .ok_or_else(|| Error::Range(format!("square root of {bound} exceeds 2^40")))?;
    let small_primes = sieve_primes_below(root + 1)?;
    Ok(PrimeBasis {
        bound: bound.clone(),
        small_primes,
        next_prime: next_prime_after(root),
    })
}

impl PrimeBasis {
    /// Convenience constructor for word-sized bounds.
    pub fn for_bound(bound: u64) -> Result<Self> {
        primes_leq_sqrt(&BigUint::from(bound))
    }

    pub fn bound(&self) -> &BigUint {
        &self.bound
    }

    /// `2, C_1, ..., C_n` in ascending order.
    pub fn small_primes(&self) -> &[u64] {
        &self.small_primes
    }

    /// `C_{n+1}`.
    pub fn next_prime(&self) -> u64 {
        self.next_prime
    }

    /// `C_n`, the largest prime not exceeding `sqrt(bound)`.
    pub fn largest(&self) -> u64 {
        *self.small_primes.last().expect("basis is never empty")
    }

    pub fn odd_primes(&self) -> &[u64] {
        &self.small_primes[1..]
    }

    pub fn len(&self) -> usize {
        self.small_primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.small_primes.is_empty()
    }

    pub fn contains(&self, p: u64) -> bool {
        self.small_primes.binary_search(&p).is_ok()
    }

    pub fn product(&self) -> BigUint {
        product_tree(self.small_primes.iter().map(|&p| BigUint::from(p)).collect())
    }

    /// `C_{n+1}^2 - 1`, the top of the certificate window.
    pub fn window_high(&self) -> BigUint {
        let p = BigUint::from(self.next_prime);
        &p * &p - 1u32
    }

    /// The first `count` primes above `sqrt(bound)`: `C_{n+1}, C_{n+2}, ...`.
    pub fn large_primes(&self, count: usize) -> Vec<u64> {
        let mut out = Vec::with_capacity(count);
        let mut p = self.next_prime;
        for _ in 0..count {
            out.push(p);
            p = next_prime_after(p);
        }
        out
    }
}

/// Product of all odd primes `p <= limit` under the default digit cap.
pub fn odd_prime_product(limit: u64) -> Result<BigUint> {
    odd_prime_product_capped(limit, DEFAULT_MAX_PRODUCT_DIGITS)
}

pub fn odd_prime_product_capped(limit: u64, max_digits: u64) -> Result<BigUint> {
    if limit < 3 {
        return Err(Error::Range(format!("odd prime product needs limit >= 3, got {limit}")));
    }
    let primes = sieve_primes_below(limit.checked_add(1).ok_or_else(|| {
        Error::Range("limit overflows a machine word".into())
    })?)?;
    let digits: f64 = primes[1..].iter().map(|&p| (p as f64).log10()).sum();
    if digits.floor() as u64 + 1 > max_digits {
        return Err(Error::resource(
            "max-product-digits",
            format!(
                "product of odd primes <= {limit} has about {:.0} digits, cap is {max_digits}",
                digits.ceil()
            ),
        ));
    }
    Ok(product_tree(
        primes[1..].iter().map(|&p| BigUint::from(p)).collect(),
    ))
}

/// Balanced pairwise product. The empty product is one.
pub fn product_tree(mut level: Vec<BigUint>) -> BigUint {
    if level.is_empty() {
        return BigUint::one();
    }
    while level.len() > 1 {
        level = if level.len() > 64 {
            level
                .par_chunks(2)
                .map(|pair| pair.iter().product())
                .collect()
        } else {
            level.chunks(2).map(|pair| pair.iter().product()).collect()
        };
    }
    level.pop().unwrap()
}

/// `gcd(a, b) == 1` for big naturals.
pub fn coprime(a: &BigUint, b: &BigUint) -> bool {
    a.gcd(b).is_one()
}
