use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::{signed, standard_window, Parity};
use crate::certificate::{CandidateCertificate, CertificateParams, Construction, Window};
use crate::error::{Error, Result};
use crate::oracle::PrimeBasis;

/// Largest large-prime offset `j` accepted in an exponent map.
pub(crate) const MAX_LARGE_OFFSET: u32 = 4096;

/// `R = (-1)^b1 * K * C_1 * ... * C_n + (-1)^b2 * C_{n+1}^m1 * C_{n+2}^m2 * ...`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation1Params {
    pub basis: PrimeBasis,
    pub sign_small: Parity,
    pub sign_large: Parity,
    pub multiplier: BigUint,
    /// Offset `j >= 1` of `C_{n+j}` mapped to its exponent; absent means zero.
    pub large_exponents: BTreeMap<u32, u32>,
}

impl Relation1Params {
    /// `exponents[i]` is the exponent of `C_{n+1+i}`.
    pub fn new(
        basis: PrimeBasis,
        sign_small: Parity,
        sign_large: Parity,
        multiplier: impl Into<BigUint>,
        exponents: &[u32],
    ) -> Self {
        Relation1Params {
            basis,
            sign_small,
            sign_large,
            multiplier: multiplier.into(),
            large_exponents: exponent_map(exponents),
        }
    }

    pub fn raw_value(&self) -> Result<BigInt> {
        let large = large_product(&self.basis, &self.large_exponents)?;
        Ok(signed(self.sign_small, &(&self.multiplier * self.basis.product()))
            + signed(self.sign_large, &large))
    }

    fn canonical(&self) -> CertificateParams {
        CertificateParams::Relation1 {
            bound: self.basis.bound().to_string(),
            b1: self.sign_small,
            b2: self.sign_large,
            multiplier: self.multiplier.to_string(),
            exponents: self.large_exponents.clone(),
        }
    }
}

pub(crate) fn exponent_map(exponents: &[u32]) -> BTreeMap<u32, u32> {
    exponents
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| (i as u32 + 1, e))
        .collect()
}

pub(crate) fn validate_offsets(exponents: &BTreeMap<u32, u32>) -> Result<()> {
    match exponents.keys().next_back() {
        Some(&j) if j > MAX_LARGE_OFFSET => Err(Error::Validation(format!(
            "large prime offset {j} exceeds {MAX_LARGE_OFFSET}"
        ))),
        _ if exponents.contains_key(&0) => {
            Err(Error::Validation("large prime offsets start at 1".into()))
        }
        _ => Ok(()),
    }
}

pub(crate) fn large_product(basis: &PrimeBasis, exponents: &BTreeMap<u32, u32>) -> Result<BigUint> {
    validate_offsets(exponents)?;
    let max = exponents.keys().next_back().copied().unwrap_or(0) as usize;
    let primes = basis.large_primes(max);
    Ok(exponents
        .iter()
        .filter(|(_, &e)| e > 0)
        .map(|(&j, &e)| BigUint::from(primes[j as usize - 1]).pow(e))
        .product())
}

/// Length `J` of the run `m_1 >= m_2 >= ... >= m_J >= 1` when the nonzero
/// exponents form exactly such a non-increasing prefix; `None` otherwise.
pub(crate) fn descending_run(exponents: &BTreeMap<u32, u32>) -> Option<u32> {
    let nonzero: Vec<(u32, u32)> = exponents
        .iter()
        .filter(|(_, &e)| e > 0)
        .map(|(&j, &e)| (j, e))
        .collect();
    if nonzero.is_empty() {
        return None;
    }
    let contiguous = nonzero.iter().enumerate().all(|(i, &(j, _))| j == i as u32 + 1);
    let descending = nonzero.windows(2).all(|w| w[0].1 >= w[1].1);
    (contiguous && descending).then_some(nonzero.len() as u32)
}

/// The widest window an exponent map can earn, ignoring the multiplier.
pub(crate) fn window_envelope(basis: &PrimeBasis, exponents: &BTreeMap<u32, u32>) -> Window {
    match descending_run(exponents) {
        Some(run) => {
            let primes = basis.large_primes(run as usize + 1);
            let top = BigUint::from(primes[run as usize]);
            Window::new(basis.largest(), &top * &top - BigUint::one())
        }
        None => standard_window(basis),
    }
}

/// Window for one multiplier: with a non-increasing exponent run of length
/// `J >= 1` and a multiplier prime to `C_{n+1}, ..., C_{n+J}`, no prime below
/// `C_{n+J+1}` divides `R`, so the ceiling rises to `C_{n+J+1}^2 - 1`.
pub(crate) fn window_for(
    basis: &PrimeBasis,
    exponents: &BTreeMap<u32, u32>,
    multiplier: &BigUint,
) -> Window {
    if let Some(run) = descending_run(exponents) {
        let primes = basis.large_primes(run as usize);
        if primes.iter().all(|&p| !(multiplier % p).is_zero()) {
            return window_envelope(basis, exponents);
        }
    }
    standard_window(basis)
}

pub fn eval_relation1(p: &Relation1Params) -> Result<CandidateCertificate> {
    if p.multiplier.is_zero() {
        return Err(Error::Validation("multiplier K must be at least 1".into()));
    }
    let value = p.raw_value()?;
    let window = window_for(&p.basis, &p.large_exponents, &p.multiplier);
    Ok(CandidateCertificate::judge(
        value,
        Construction::Relation1,
        p.canonical(),
        window,
        None,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::Rejection;
    use Parity::{Even, Odd};

    fn basis119() -> PrimeBasis {
        PrimeBasis::for_bound(119).unwrap()
    }

    fn eval(b1: Parity, b2: Parity, k: u32, m: &[u32]) -> CandidateCertificate {
        eval_relation1(&Relation1Params::new(basis119(), b1, b2, k, m)).unwrap()
    }

    #[test]
    fn verified_table_columns() {
        let c = eval(Even, Odd, 1, &[2]);
        assert_eq!(c.value, BigInt::from(89));
        assert!(c.accepted && c.verdict.is_proven_prime());

        let c = eval(Even, Odd, 1, &[1, 1]);
        assert_eq!(c.value, BigInt::from(67));
        assert!(c.accepted);

        let c = eval(Odd, Even, 7, &[2, 1]);
        assert_eq!(c.value, BigInt::from(103));
        assert!(c.accepted && c.verdict.is_proven_prime());
    }

    #[test]
    fn negative_value_is_rejected_not_an_error() {
        let c = eval(Odd, Even, 6, &[2]);
        assert_eq!(c.value, BigInt::from(-1139));
        assert!(!c.accepted);
        assert_eq!(c.rejection, Some(Rejection::NotNatural));
        assert!(!c.verdict.is_prime());
    }

    #[test]
    fn zero_multiplier_is_a_precondition_error() {
        let p = Relation1Params::new(basis119(), Even, Odd, 0u32, &[2]);
        assert!(matches!(eval_relation1(&p), Err(Error::Validation(_))));
    }

    #[test]
    fn descending_exponents_raise_the_ceiling() {
        let b = basis119();
        let m = exponent_map(&[3]);
        assert_eq!(window_for(&b, &m, &BigUint::from(6u32)).high, BigUint::from(168u32));
        // multiplier sharing the large prime keeps the standard window
        assert_eq!(window_for(&b, &m, &BigUint::from(11u32)).high, BigUint::from(120u32));
        // m1 = 1, m2 = 2 is not non-increasing
        let m = exponent_map(&[1, 2]);
        assert_eq!(window_for(&b, &m, &BigUint::one()).high, BigUint::from(120u32));
        let m = exponent_map(&[2, 1]);
        assert_eq!(window_for(&b, &m, &BigUint::one()).high, BigUint::from(288u32));
        assert_eq!(window_for(&b, &BTreeMap::new(), &BigUint::one()).high, BigUint::from(120u32));
        // gap in the run
        let m: BTreeMap<u32, u32> = [(1, 2), (3, 1)].into_iter().collect();
        assert_eq!(descending_run(&m), None);
    }

    #[test]
    fn unbounded_offsets_are_rejected() {
        let mut p = Relation1Params::new(basis119(), Even, Odd, 1u32, &[]);
        p.large_exponents.insert(MAX_LARGE_OFFSET + 1, 1);
        assert!(eval_relation1(&p).is_err());
    }

    #[test]
    fn flipping_both_signs_negates() {
        for (b1, b2, k, m) in [(Even, Odd, 1u32, vec![2u32]), (Odd, Even, 9, vec![1, 2])] {
            let a = Relation1Params::new(basis119(), b1, b2, k, &m).raw_value().unwrap();
            let b = Relation1Params::new(basis119(), b1.flip(), b2.flip(), k, &m)
                .raw_value()
                .unwrap();
            assert_eq!(a, -b);
        }
    }
}
