use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use super::{signed, standard_window, Parity};
use crate::certificate::{CandidateCertificate, CertificateParams, Construction, Rejection};
use crate::error::{Error, Result};
use crate::oracle::PrimeBasis;

/// `R = (-1)^b1 * (prod S1) * k1 + (-1)^b2 * (prod S2) * k2 + (-1)^b3 * (prod all) * k3`
/// for a partition `S1 | S2` of the basis, with `k1` prime to `S2` and `k2`
/// prime to `S1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation2Params {
    pub basis: PrimeBasis,
    pub first: Vec<u64>,
    pub second: Vec<u64>,
    pub signs: [Parity; 3],
    pub k1: BigUint,
    pub k2: BigUint,
    pub k3: BigUint,
}

impl Relation2Params {
    /// Builds params with `S2` taken as the complement of `first`.
    pub fn with_complement(
        basis: PrimeBasis,
        first: &[u64],
        signs: [Parity; 3],
        k: [u64; 3],
    ) -> Self {
        let second = basis
            .small_primes()
            .iter()
            .copied()
            .filter(|p| !first.contains(p))
            .collect();
        let mut first = first.to_vec();
        first.sort_unstable();
        Relation2Params {
            basis,
            first,
            second,
            signs,
            k1: k[0].into(),
            k2: k[1].into(),
            k3: k[2].into(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        validate_partition(&self.basis, &self.first, &self.second)?;
        if self.k1.is_zero() || self.k2.is_zero() {
            return Err(Error::Validation("k1 and k2 must be at least 1".into()));
        }
        Ok(())
    }

    pub fn parts(&self) -> (BigUint, BigUint) {
        let a: BigUint = self.first.iter().map(|&p| BigUint::from(p)).product();
        let b: BigUint = self.second.iter().map(|&p| BigUint::from(p)).product();
        (a, b)
    }

    /// `R` with no constraint checks.
    pub fn raw_value(&self) -> BigInt {
        let (a, b) = self.parts();
        let all = &a * &b;
        signed(self.signs[0], &(a * &self.k1))
            + signed(self.signs[1], &(b * &self.k2))
            + signed(self.signs[2], &(all * &self.k3))
    }

    /// First divisibility constraint broken, if any.
    pub fn constraint_violation(&self) -> Option<Rejection> {
        let hit = |k: &BigUint, primes: &[u64]| primes.iter().copied().find(|&p| (k % p).is_zero());
        if let Some(prime) = hit(&self.k1, &self.second) {
            return Some(Rejection::Constraint { term: 1, prime });
        }
        hit(&self.k2, &self.first).map(|prime| Rejection::Constraint { term: 2, prime })
    }

    fn canonical(&self) -> CertificateParams {
        CertificateParams::Relation2 {
            bound: self.basis.bound().to_string(),
            first: self.first.clone(),
            second: self.second.clone(),
            signs: self.signs,
            multipliers: [self.k1.to_string(), self.k2.to_string(), self.k3.to_string()],
        }
    }
}

pub(crate) fn validate_partition(basis: &PrimeBasis, first: &[u64], second: &[u64]) -> Result<()> {
    if first.is_empty() || second.is_empty() {
        return Err(Error::Validation("both parts of the partition must be nonempty".into()));
    }
    let mut all: Vec<u64> = first.iter().chain(second).copied().collect();
    all.sort_unstable();
    if all != basis.small_primes() {
        return Err(Error::Validation(format!(
            "parts {first:?} and {second:?} do not partition the basis {:?}",
            basis.small_primes()
        )));
    }
    Ok(())
}

pub fn eval_relation2(p: &Relation2Params) -> Result<CandidateCertificate> {
    p.validate()?;
    Ok(CandidateCertificate::judge(
        p.raw_value(),
        Construction::Relation2,
        p.canonical(),
        standard_window(&p.basis),
        p.constraint_violation(),
    ))
}
