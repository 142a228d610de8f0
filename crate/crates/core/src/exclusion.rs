//! Odd primes as `R = 2K + 1`, where `K` avoids every progression
//! `K = C*m + (C - 1)/2` with `(C - 1)/2 <= m < (a - C)/(2C)` for the odd
//! basis primes `C <= sqrt(a)`.
//!
//! Each progression is exactly the set of `K` whose `R = C(2m + 1)` is an odd
//! multiple of `C` in `[C^2, a)`, so this is a wheel-style sieve over odd
//! numbers. Exclusions are struck from a bitset over `K`; both fractional
//! bounds are compared in integers (`C(2m+1) < a` and `2K + 1 < a`).

use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::PrimeBasis;

/// Largest bound the dense bitset will accept by default.
pub const DEFAULT_MAX_DENSE_BOUND: u64 = 1 << 32;

const CHUNK_K: u64 = 1 << 18;

/// The `m`-window attached to one odd basis prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgressionWindow {
    pub prime: u64,
    /// `(C - 1)/2`, inclusive.
    pub m_low: u64,
    /// `(a - C)/(2C)` kept as an unreduced fraction; exclusive.
    pub m_high_numer: u64,
    pub m_high_denom: u64,
}

impl ProgressionWindow {
    fn new(prime: u64, bound: u64) -> Self {
        ProgressionWindow {
            prime,
            m_low: (prime - 1) / 2,
            m_high_numer: bound.saturating_sub(prime),
            m_high_denom: 2 * prime,
        }
    }

    /// Integer `m` with `m_low <= m < m_high`.
    pub fn m_range(&self) -> Range<u64> {
        let end = self.m_high_numer.div_ceil(self.m_high_denom);
        self.m_low..end.max(self.m_low)
    }

    fn k_of(&self, m: u64) -> u64 {
        self.prime * m + (self.prime - 1) / 2
    }

    /// The excluded `K`, ascending.
    pub fn excluded(&self) -> impl Iterator<Item = u64> + '_ {
        self.m_range().map(|m| self.k_of(m))
    }

    /// Strikes this progression from `words`, which covers `K` in
    /// `[start, start + 64 * words.len())`.
    fn strike(&self, start: u64, words: &mut [u64]) {
        let end = start + 64 * words.len() as u64;
        let range = self.m_range();
        if range.is_empty() {
            return;
        }
        let first = self.k_of(range.start);
        let mut m = if first >= start {
            range.start
        } else {
            range.start + (start - first).div_ceil(self.prime)
        };
        while m < range.end {
            let k = self.k_of(m);
            if k >= end {
                break;
            }
            let off = k - start;
            words[(off / 64) as usize] |= 1 << (off % 64);
            m += 1;
        }
    }
}

/// Exclusion list for one prime, for debugging output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExclusionList {
    pub prime: u64,
    pub m_low: u64,
    /// Exclusive upper bound on `m`, as `numer/denom`.
    pub m_high: String,
    pub k: Vec<u64>,
}

/// Admissible and excluded `K`, materialised.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KSet {
    /// `K < (a - 1)/2`, as `numer/denom`.
    pub k_max_exclusive: String,
    pub admissible: Vec<u64>,
    pub excluded: Vec<ExclusionList>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExclusionSieve {
    bound: u64,
    basis: PrimeBasis,
    windows: Vec<ProgressionWindow>,
}

impl ExclusionSieve {
    /// Sieve for all primes below `bound`, with the basis of `bound` itself.
    pub fn new(bound: u64) -> Result<Self> {
        let basis = PrimeBasis::for_bound(bound)?;
        Self::with_basis(basis, bound)
    }

    /// Uses `basis` for `bound`; valid as long as `bound < C_{n+1}^2`.
    pub fn with_basis(basis: PrimeBasis, bound: u64) -> Result<Self> {
        let next = basis.next_prime() as u128;
        if bound as u128 >= next * next {
            return Err(Error::Validation(format!(
                "basis ending below {} cannot certify numbers up to {bound}",
                basis.next_prime()
            )));
        }
        let windows = basis
            .odd_primes()
            .iter()
            .map(|&p| ProgressionWindow::new(p, bound))
            .collect();
        Ok(ExclusionSieve {
            bound,
            basis,
            windows,
        })
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn basis(&self) -> &PrimeBasis {
        &self.basis
    }

    pub fn windows(&self) -> &[ProgressionWindow] {
        &self.windows
    }

    /// Largest candidate `K`, i.e. the largest `K` with `2K + 1 < a`.
    pub fn k_max(&self) -> u64 {
        self.bound.saturating_sub(2) / 2
    }

    /// Excluded `K` for the `index`-th odd basis prime (`0` is `C_1 = 3`).
    pub fn excluded_k(&self, index: usize) -> Result<Vec<u64>> {
        let w = self.windows.get(index).ok_or_else(|| {
            Error::Range(format!(
                "prime index {index} out of range for {} odd basis primes",
                self.windows.len()
            ))
        })?;
        Ok(w.excluded().collect())
    }

    pub fn exclusion_lists(&self) -> Vec<ExclusionList> {
        self.windows
            .iter()
            .map(|w| ExclusionList {
                prime: w.prime,
                m_low: w.m_low,
                m_high: format!("{}/{}", w.m_high_numer, w.m_high_denom),
                k: w.excluded().collect(),
            })
            .collect()
    }

    pub fn k_set(&self) -> KSet {
        let admissible = self.admissible_k();
        KSet {
            k_max_exclusive: format!("{}/2", self.bound.saturating_sub(1)),
            admissible,
            excluded: self.exclusion_lists(),
        }
    }

    /// Admissible `K` in `[1, k_max]`, ascending.
    pub fn admissible_k(&self) -> Vec<u64> {
        let k_max = self.k_max();
        if k_max == 0 {
            return Vec::new();
        }
        let chunks = (k_max + 1).div_ceil(CHUNK_K);
        let parts: Vec<Vec<u64>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let start = c * CHUNK_K;
                let stop = (start + CHUNK_K).min(k_max + 1);
                let mut words = vec![0u64; (stop - start).div_ceil(64) as usize];
                for w in &self.windows {
                    w.strike(start, &mut words);
                }
                (start.max(1)..stop)
                    .filter(|&k| {
                        let off = k - start;
                        words[(off / 64) as usize] & (1 << (off % 64)) == 0
                    })
                    .collect()
            })
            .collect();
        parts.concat()
    }

    /// `R = 2K + 1` for every admissible `K`, optionally preceded by 2.
    pub fn primes(&self, include_two: bool) -> Vec<u64> {
        let mut out = Vec::new();
        if include_two && self.bound > 2 {
            out.push(2);
        }
        out.extend(self.admissible_k().into_iter().map(|k| 2 * k + 1));
        out
    }
}

/// Every prime below `bound` (odd ones only unless `include_two`).
pub fn primes_below(bound: u64, include_two: bool) -> Result<Vec<u64>> {
    primes_below_capped(bound, include_two, DEFAULT_MAX_DENSE_BOUND)
}

pub fn primes_below_capped(bound: u64, include_two: bool, max_bound: u64) -> Result<Vec<u64>> {
    if bound < 9 {
        return Err(Error::Range(format!("exclusion sieve needs bound >= 9, got {bound}")));
    }
    check_dense(bound, max_bound)?;
    Ok(ExclusionSieve::new(bound)?.primes(include_two))
}

/// Primes below `C_{n+1}^2 - 1` using only the given basis.
pub fn primes_below_next_square(basis: &PrimeBasis, include_two: bool) -> Result<Vec<u64>> {
    let next = basis.next_prime();
    let bound = next
        .checked_mul(next)
        .map(|sq| sq - 1)
        .ok_or_else(|| Error::resource("max-dense-bound", "C_{n+1}^2 overflows a machine word"))?;
    check_dense(bound, DEFAULT_MAX_DENSE_BOUND)?;
    Ok(ExclusionSieve::with_basis(basis.clone(), bound)?.primes(include_two))
}

fn check_dense(bound: u64, max_bound: u64) -> Result<()> {
    if bound > max_bound {
        return Err(Error::resource(
            "max-dense-bound",
            format!("bound {bound} exceeds dense cap {max_bound}"),
        ));
    }
    Ok(())
}
