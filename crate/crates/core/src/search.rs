//! Seeded search for primes of the form `c*k - 2^n`.
//!
//! For a prime seed `a >= 5`, `c` is the product of the odd primes up to
//! `a - 2`. Any `R = c*k - 2^n` with odd `k` and `a < R <= a^2 - 1` is prime:
//! it is odd, every odd prime below `a` divides `c` but not `2^n`, and its
//! square root is below `a`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::ops::RangeInclusive;
use std::sync::OnceLock;

use crate::certificate::{CandidateCertificate, CertificateParams, Construction, Rejection, Window};
use crate::error::{Error, Result};
use crate::oracle::{is_prime_u64, odd_prime_product_capped, sieve_primes_below, DEFAULT_MAX_PRODUCT_DIGITS};

/// Exponents examined per parallel batch.
const BATCH: u64 = 64;

/// Largest seed for which exponents are solved exactly rather than scanned.
pub const MAX_EXACT_SEED: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchState {
    seed: u64,
    product: BigUint,
    window: Window,
}

/// Inclusive bounds on `k` for one exponent. Empty when `first > last`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KWindow {
    pub first: BigUint,
    pub last: BigUint,
}

impl KWindow {
    pub fn is_empty(&self) -> bool {
        self.first > self.last
    }

    /// Odd values in the window, ascending.
    pub fn odd(&self) -> impl Iterator<Item = BigUint> + '_ {
        let start = if self.first.is_odd() {
            self.first.clone()
        } else {
            &self.first + 1u32
        };
        let last = self.last.clone();
        std::iter::successors(Some(start), |k| Some(k + 2u32)).take_while(move |k| *k <= last)
    }

    pub fn odd_count(&self) -> BigUint {
        if self.is_empty() {
            return BigUint::zero();
        }
        (&self.last + 1u32) / 2u32 - &self.first / 2u32
    }
}

/// The smallest exponent whose window holds an odd multiplier.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MinExponent {
    pub n: u64,
    /// `k = 1` lies in that window, so `n` is also the smallest exponent
    /// with `c - 2^n` inside `(a, a^2 - 1]`.
    pub via_unit_k: bool,
}

/// `n = residue (mod modulus)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentClass {
    pub residue: BigUint,
    pub modulus: BigUint,
}

impl ExponentClass {
    pub fn contains(&self, n: u64) -> bool {
        BigUint::from(n) % &self.modulus == self.residue
    }

    /// The least `n >= 1` in the class (at most a machine word for the
    /// seeds this is computed for).
    fn smallest_positive(&self) -> u64 {
        let n = if self.residue.is_zero() {
            &self.modulus
        } else {
            &self.residue
        };
        u64::try_from(n).unwrap_or(u64::MAX)
    }
}

/// Discrete logarithms of every residue to base 2, per odd prime, built on
/// first use.
struct ExponentSolver {
    primes: Vec<u64>,
    logs: Vec<OnceLock<(u64, Vec<u16>)>>,
}

const NO_LOG: u16 = u16::MAX;

impl ExponentSolver {
    fn new(limit: u64) -> Result<Self> {
        let primes = sieve_primes_below(limit + 1)?[1..].to_vec();
        let logs = primes.iter().map(|_| OnceLock::new()).collect();
        Ok(ExponentSolver { primes, logs })
    }

    /// Order of 2 modulo `primes[i]` and the log table.
    fn table(&self, i: usize) -> &(u64, Vec<u16>) {
        self.logs[i].get_or_init(|| {
            let p = self.primes[i];
            let mut logs = vec![NO_LOG; p as usize];
            let (mut x, mut e) = (1u64, 0u16);
            while logs[x as usize] == NO_LOG {
                logs[x as usize] = e;
                x = x * 2 % p;
                e += 1;
            }
            (e as u64, logs)
        })
    }

    fn class(&self, r: u64) -> Option<ExponentClass> {
        let mut residue = BigUint::zero();
        let mut modulus = BigUint::one();
        for (i, &p) in self.primes.iter().enumerate() {
            let target = (p - r % p) % p;
            if target == 0 {
                return None;
            }
            let (order, logs) = self.table(i);
            let log = logs[target as usize];
            if log == NO_LOG {
                return None;
            }
            (residue, modulus) = merge(&residue, &modulus, log as u64, *order)?;
        }
        Some(ExponentClass { residue, modulus })
    }
}

/// Intersects `x = r1 (mod m1)` with `x = r2 (mod m2)`.
fn merge(r1: &BigUint, m1: &BigUint, r2: u64, m2: u64) -> Option<(BigUint, BigUint)> {
    let m1_small = (m1 % m2).try_into().unwrap_or(0u64);
    let g = m1_small.gcd(&m2);
    let r1_small: u64 = (r1 % m2).try_into().unwrap_or(0);
    let diff = (r2 + m2 - r1_small) % m2;
    if diff % g != 0 {
        return None;
    }
    let step = m2 / g;
    if step == 1 {
        return Some((r1.clone(), m1.clone()));
    }
    // (m1/g) t = diff/g (mod step)
    let a = (m1_small / g) % step;
    let t = (diff / g) as u128 * mod_inverse_u64(a, step) as u128 % step as u128;
    Some((r1 + m1 * BigUint::from(t as u64), m1 * step))
}

fn mod_inverse_u64(a: u64, m: u64) -> u64 {
    let e = (a as i128).extended_gcd(&(m as i128));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m as i128) as u64
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchHit {
    pub k: BigUint,
    pub n: u64,
    pub certificate: CandidateCertificate,
}

impl SearchHit {
    pub fn value(&self) -> &BigUint {
        self.certificate.magnitude()
    }
}

impl SearchState {
    pub fn new(seed: u64) -> Result<Self> {
        Self::with_digit_cap(seed, DEFAULT_MAX_PRODUCT_DIGITS)
    }

    pub fn with_digit_cap(seed: u64, max_digits: u64) -> Result<Self> {
        if seed < 5 || !is_prime_u64(seed) {
            return Err(Error::Validation(format!("seed must be a prime >= 5, got {seed}")));
        }
        let product = odd_prime_product_capped(seed - 2, max_digits)?;
        let high = BigUint::from(seed) * seed - 1u32;
        Ok(SearchState {
            seed,
            product,
            window: Window::new(seed, high),
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `c`.
    pub fn product(&self) -> &BigUint {
        &self.product
    }

    pub fn product_digits(&self) -> usize {
        self.product.to_str_radix(10).len()
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    /// All `k` with `a < c*k - 2^n <= a^2 - 1`.
    pub fn k_window(&self, n: u64) -> KWindow {
        let shift = BigUint::one() << n;
        KWindow {
            first: (&self.window.low + &shift) / &self.product + 1u32,
            last: (&self.window.high + &shift) / &self.product,
        }
    }

    /// `None` means no exponent ever admits an odd multiplier.
    ///
    /// Odd `k` is equivalent to odd `R`, and `R = c*k - 2^n` means
    /// `2^n = -R (mod c)`. For each odd `R` in the window the exponents
    /// solving that congruence form one residue class, found prime by prime
    /// from discrete logarithms and merged by the Chinese remainder theorem.
    pub fn min_exponent(&self) -> Result<Option<MinExponent>> {
        if self.seed > MAX_EXACT_SEED {
            return Err(Error::resource(
                "max-exact-seed",
                format!(
                    "solving for the minimum exponent is limited to seeds up to {MAX_EXACT_SEED}, got {}",
                    self.seed
                ),
            ));
        }
        let solver = ExponentSolver::new(self.seed - 2)?;
        let low = self.seed + 1;
        let high = self.seed * self.seed - 1;
        let n = (low..=high)
            .into_par_iter()
            .filter(|r| r % 2 == 1)
            .filter_map(|r| solver.class(r).map(|class| class.smallest_positive()))
            .min();
        Ok(n.map(|n| {
            let w = self.k_window(n);
            MinExponent {
                n,
                via_unit_k: w.first <= BigUint::one() && w.last >= BigUint::one(),
            }
        }))
    }

    /// Exponents `n` with `2^n = -r (mod c)`, or `None` if there are none.
    pub fn exponents_for(&self, r: u64) -> Result<Option<ExponentClass>> {
        if self.seed > MAX_EXACT_SEED {
            return Err(Error::resource(
                "max-exact-seed",
                format!("exact exponent classes are limited to seeds up to {MAX_EXACT_SEED}"),
            ));
        }
        Ok(ExponentSolver::new(self.seed - 2)?.class(r))
    }

    /// Evaluates one `(k, n)` pair.
    pub fn candidate(&self, k: &BigUint, n: u64) -> Result<CandidateCertificate> {
        if k.is_zero() || n == 0 {
            return Err(Error::Validation("search needs k >= 1 and n >= 1".into()));
        }
        let value = num_bigint::BigInt::from(&self.product * k) - num_bigint::BigInt::from(BigUint::one() << n);
        let params = CertificateParams::BigSearch {
            seed: self.seed.to_string(),
            k: k.to_string(),
            n,
        };
        let constraint = k.is_even().then_some(Rejection::EvenMultiplier);
        Ok(CandidateCertificate::judge(
            value,
            Construction::BigSearch,
            params,
            self.window.clone(),
            constraint,
        ))
    }

    /// Hits for `n` in `1..=max_n`, by `n` then `k`, at most `max_hits` of them.
    pub fn search(&self, max_n: u64, max_hits: Option<usize>) -> Result<Vec<SearchHit>> {
        self.search_range(1..=max_n, max_hits)
    }

    pub fn search_range(
        &self,
        exponents: RangeInclusive<u64>,
        max_hits: Option<usize>,
    ) -> Result<Vec<SearchHit>> {
        let mut hits = Vec::new();
        let limit = max_hits.unwrap_or(usize::MAX);
        let (mut start, max_n) = ((*exponents.start()).max(1), *exponents.end());
        while start <= max_n && hits.len() < limit {
            let end = max_n.min(start.saturating_add(BATCH - 1));
            let batch: Vec<Result<Vec<SearchHit>>> = (start..=end)
                .into_par_iter()
                .map(|n| self.hits_at(n, limit))
                .collect();
            for found in batch {
                hits.extend(found?);
            }
            if end == u64::MAX {
                break;
            }
            start = end + 1;
        }
        hits.truncate(limit);
        Ok(hits)
    }

    fn hits_at(&self, n: u64, limit: usize) -> Result<Vec<SearchHit>> {
        self.k_window(n)
            .odd()
            .take(limit)
            .map(|k| {
                let certificate = self.candidate(&k, n)?;
                if !certificate.accepted {
                    return Err(Error::Invariant(format!(
                        "k = {k}, n = {n} solved into the window but was rejected"
                    )));
                }
                Ok(SearchHit { k, n, certificate })
            })
            .collect()
    }
}

/// Smallest `n` for which `c - 2^n` lands in `(a, a^2 - 1]`, if one exists.
pub fn unit_multiplier_exponent(state: &SearchState) -> Option<u64> {
    let c = &state.product;
    let hi = &state.window.high;
    // c - 2^n > a needs 2^n < c - a
    (1..c.bits() + 1)
        .find(|&n| {
            let shift = BigUint::one() << n;
            shift < *c && {
                let r = c - &shift;
                r > state.window.low && r <= *hi
            }
        })
}
