use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use super::relation1::{exponent_map, large_product, window_for};
use super::{signed, Parity};
use crate::certificate::{CandidateCertificate, CertificateParams, Construction};
use crate::error::{Error, Result};
use crate::oracle::{product_tree, PrimeBasis};

const MAX_FACTORIAL_ARG: u64 = 1 << 16;

/// Relation 1 with the basis product replaced by `d!`, `d = floor(sqrt(a))`.
///
/// `d!` has exactly the basis primes as prime factors, so the same window
/// applies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation1FactorialParams {
    pub basis: PrimeBasis,
    pub sign_small: Parity,
    pub sign_large: Parity,
    pub k1: BigUint,
    pub large_exponents: BTreeMap<u32, u32>,
}

impl Relation1FactorialParams {
    pub fn new(
        basis: PrimeBasis,
        sign_small: Parity,
        sign_large: Parity,
        k1: impl Into<BigUint>,
        exponents: &[u32],
    ) -> Self {
        Relation1FactorialParams {
            basis,
            sign_small,
            sign_large,
            k1: k1.into(),
            large_exponents: exponent_map(exponents),
        }
    }

    pub fn raw_value(&self) -> Result<BigInt> {
        let large = large_product(&self.basis, &self.large_exponents)?;
        let fact = basis_factorial(&self.basis)?;
        Ok(signed(self.sign_small, &(&self.k1 * fact)) + signed(self.sign_large, &large))
    }
}

/// `floor(sqrt(bound))!`.
pub(crate) fn basis_factorial(basis: &PrimeBasis) -> Result<BigUint> {
    let d = basis
        .bound()
        .sqrt()
        .to_u64()
        .filter(|&d| d <= MAX_FACTORIAL_ARG)
        .ok_or_else(|| {
            Error::resource("max-factorial", format!("sqrt of {} is too large", basis.bound()))
        })?;
    Ok(product_tree((2..=d).map(BigUint::from).collect()))
}

pub fn eval_relation1_factorial(p: &Relation1FactorialParams) -> Result<CandidateCertificate> {
    if p.k1.is_zero() {
        return Err(Error::Validation("k1 must be at least 1".into()));
    }
    let value = p.raw_value()?;
    let window = window_for(&p.basis, &p.large_exponents, &p.k1);
    let params = CertificateParams::Relation1Factorial {
        bound: p.basis.bound().to_string(),
        b1: p.sign_small,
        b2: p.sign_large,
        k1: p.k1.to_string(),
        exponents: p.large_exponents.clone(),
    };
    Ok(CandidateCertificate::judge(
        value,
        Construction::Relation1Factorial,
        params,
        window,
        None,
    ))
}
