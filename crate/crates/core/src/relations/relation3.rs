use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use super::{signed, standard_window, Parity};
use crate::certificate::{CandidateCertificate, CertificateParams, Construction, Rejection};
use crate::error::{Error, Result};
use crate::oracle::PrimeBasis;

/// `R = sum_i (-1)^b_i * (prod of basis without C_i) * k_i + (-1)^b_{n+1} * (prod basis) * k_{n+1}`
/// with `C_i` not dividing `k_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation3Params {
    pub basis: PrimeBasis,
    /// `n + 1` signs; the last belongs to the full-product term.
    pub signs: Vec<Parity>,
    /// `k_1, ..., k_n`.
    pub multipliers: Vec<BigUint>,
    /// `k_{n+1}`, may be zero.
    pub last: BigUint,
}

impl Relation3Params {
    pub fn new(basis: PrimeBasis, signs: &[Parity], multipliers: &[u64], last: u64) -> Self {
        Relation3Params {
            basis,
            signs: signs.to_vec(),
            multipliers: multipliers.iter().map(|&k| BigUint::from(k)).collect(),
            last: last.into(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.basis.len();
        if self.multipliers.len() != n || self.signs.len() != n + 1 {
            return Err(Error::Validation(format!(
                "basis of {n} primes needs {n} multipliers and {} signs, got {} and {}",
                n + 1,
                self.multipliers.len(),
                self.signs.len()
            )));
        }
        if self.multipliers.iter().any(Zero::is_zero) {
            return Err(Error::Validation("k_1..k_n must be at least 1".into()));
        }
        Ok(())
    }

    /// `R` with no constraint checks. Callers must have validated lengths.
    pub fn raw_value(&self) -> BigInt {
        let all = self.basis.product();
        let mut r = signed(self.signs[self.basis.len()], &(&all * &self.last));
        for (i, (&c, k)) in self.basis.small_primes().iter().zip(&self.multipliers).enumerate() {
            r += signed(self.signs[i], &(&all / c * k));
        }
        r
    }

    pub fn constraint_violation(&self) -> Option<Rejection> {
        self.basis
            .small_primes()
            .iter()
            .zip(&self.multipliers)
            .enumerate()
            .find(|(_, (&c, k))| (*k % c).is_zero())
            .map(|(i, (&c, _))| Rejection::Constraint {
                term: i + 1,
                prime: c,
            })
    }

    fn canonical(&self) -> CertificateParams {
        CertificateParams::Relation3 {
            bound: self.basis.bound().to_string(),
            signs: self.signs.clone(),
            multipliers: self
                .multipliers
                .iter()
                .chain(std::iter::once(&self.last))
                .map(ToString::to_string)
                .collect(),
        }
    }
}

pub fn eval_relation3(p: &Relation3Params) -> Result<CandidateCertificate> {
    p.validate()?;
    Ok(CandidateCertificate::judge(
        p.raw_value(),
        Construction::Relation3,
        p.canonical(),
        standard_window(&p.basis),
        p.constraint_violation(),
    ))
}
