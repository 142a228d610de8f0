//! Generalized Mersenne numbers `Z_n = ((a + C)^n - a^n) / C`.
//!
//! With `a = C = 1` this is `2^n - 1`. Composite `n` always gives a
//! composite `Z_n`, and so does any step that is a multiple of `a >= 2`;
//! both facts are checked here against the oracle rather than assumed.

use std::ops::RangeInclusive;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decimal;
use crate::error::{Error, Result};
use crate::oracle::{is_prime, is_prime_u64, OracleVerdict};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralMersenneParams {
    #[serde(with = "decimal::nat")]
    base: BigUint,
    #[serde(with = "decimal::nat")]
    step: BigUint,
    exponent: u32,
}

impl GeneralMersenneParams {
    pub fn new(base: impl Into<BigUint>, step: impl Into<BigUint>, exponent: u32) -> Result<Self> {
        let (base, step) = (base.into(), step.into());
        if base.is_zero() || step.is_zero() {
            return Err(Error::Validation("base and step must be at least 1".into()));
        }
        if exponent < 2 {
            return Err(Error::Validation(format!(
                "exponent must be greater than 1, got {exponent}"
            )));
        }
        Ok(GeneralMersenneParams {
            base,
            step,
            exponent,
        })
    }

    pub fn base(&self) -> &BigUint {
        &self.base
    }

    pub fn step(&self) -> &BigUint {
        &self.step
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZnResult {
    pub params: GeneralMersenneParams,
    #[serde(with = "decimal::nat")]
    pub value: BigUint,
    pub divisibility_exact: bool,
    pub verdict: OracleVerdict,
}

/// Exact quotient and whether the division left no remainder.
fn zn_parts(base: &BigUint, step: &BigUint, n: u32) -> (BigUint, bool) {
    let numerator = (base + step).pow(n) - base.pow(n);
    let (q, r) = numerator.div_rem(step);
    (q, r.is_zero())
}

pub fn compute_zn(params: &GeneralMersenneParams) -> ZnResult {
    let (value, exact) = zn_parts(&params.base, &params.step, params.exponent);
    ZnResult {
        params: params.clone(),
        verdict: is_prime(&value),
        value,
        divisibility_exact: exact,
    }
}

/// A parameter tuple where a proven composite case came out otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub params: GeneralMersenneParams,
    #[serde(with = "decimal::nat")]
    pub value: BigUint,
    pub reason: String,
}

fn smallest_divisor(n: u32) -> u32 {
    (2..=n).find(|d| n % d == 0).unwrap_or(n)
}

/// For every composite `n` in `[4, max_exponent]`, `Z_n` must be composite.
///
/// Each case is also checked structurally: `Z_r` divides `Z_n` for the
/// smallest divisor `r` of `n`.
pub fn check_exponent_contrapositive(
    base: &BigUint,
    step: &BigUint,
    max_exponent: u32,
) -> Result<Vec<Violation>> {
    if max_exponent < 4 {
        return Err(Error::Range(format!(
            "max exponent must be at least 4, got {max_exponent}"
        )));
    }
    let mut violations = Vec::new();
    for n in 4..=max_exponent {
        if is_prime_u64(n as u64) {
            continue;
        }
        let params = GeneralMersenneParams::new(base.clone(), step.clone(), n)?;
        let z = compute_zn(&params);
        if z.verdict.is_prime() {
            violations.push(Violation {
                params,
                value: z.value,
                reason: "prime value at composite exponent".into(),
            });
            continue;
        }
        let (factor, _) = zn_parts(base, step, smallest_divisor(n));
        if !(&z.value % &factor).is_zero() {
            violations.push(Violation {
                params,
                value: z.value,
                reason: format!("Z_{} does not divide Z_{n}", smallest_divisor(n)),
            });
        }
    }
    Ok(violations)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultipleStepReport {
    pub violations: Vec<Violation>,
    /// `(n, a^(n-1))` for every exponent checked.
    pub predicted_factors: Vec<(u32, String)>,
}

/// With `C = a*d` and `a >= 2`, `Z_n = a^(n-1) * ((d+1)^n - 1)/d` is composite.
pub fn check_multiple_step_composite(
    base: &BigUint,
    multiplier: &BigUint,
    max_exponent: u32,
) -> Result<MultipleStepReport> {
    if *base < BigUint::from(2u32) {
        return Err(Error::Range("base must be at least 2".into()));
    }
    if multiplier.is_zero() {
        return Err(Error::Range("multiplier must be at least 1".into()));
    }
    let step = base * multiplier;
    let mut report = MultipleStepReport {
        violations: Vec::new(),
        predicted_factors: Vec::new(),
    };
    for n in 2..=max_exponent {
        let params = GeneralMersenneParams::new(base.clone(), step.clone(), n)?;
        let z = compute_zn(&params);
        let factor = base.pow(n - 1);
        if z.verdict.is_prime() {
            report.violations.push(Violation {
                params: params.clone(),
                value: z.value.clone(),
                reason: "prime value with step a multiple of base".into(),
            });
        }
        if !(&z.value % &factor).is_zero() {
            report.violations.push(Violation {
                params,
                value: z.value.clone(),
                reason: format!("{factor} does not divide the value"),
            });
        }
        report.predicted_factors.push((n, factor.to_string()));
    }
    Ok(report)
}

/// Checks that `(a+1)^n - a^n` strictly increases in `a` on `[2, max_base]`
/// and stays above `2^n - 1`.
pub fn check_strict_growth(exponent: u32, max_base: u64) -> Result<bool> {
    if exponent < 2 || max_base < 2 {
        return Err(Error::Range(
            "exponent and max base must both be at least 2".into(),
        ));
    }
    let mersenne = (BigUint::one() << exponent) - 1u32;
    let mut here = BigUint::from(2u32).pow(exponent);
    let mut previous_gap = mersenne.clone();
    for a in 2..=max_base {
        let above = BigUint::from(a + 1).pow(exponent);
        let gap = &above - &here;
        if gap <= previous_gap || gap <= mersenne {
            return Ok(false);
        }
        here = above;
        previous_gap = gap;
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ScanMode {
    /// Skip composite exponents and steps divisible by a base `>= 2`.
    #[default]
    Skip,
    /// Evaluate every tuple and report any skipped tuple that was prime.
    NoSkip,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanOutcome {
    /// Prime results in lexicographic `(base, step, exponent)` order.
    pub primes: Vec<ZnResult>,
    pub evaluated: usize,
    pub skipped: usize,
    /// Tuples the skip rules would drop that nonetheless came out prime.
    pub skip_violations: Vec<ZnResult>,
}

fn skip_rule_applies(base: u64, step: u64, exponent: u32) -> bool {
    !is_prime_u64(exponent as u64) || (base >= 2 && step % base == 0)
}

pub fn scan_prime_zn(
    bases: RangeInclusive<u64>,
    steps: RangeInclusive<u64>,
    exponents: RangeInclusive<u32>,
    mode: ScanMode,
) -> Result<ScanOutcome> {
    if *bases.start() == 0 || *steps.start() == 0 {
        return Err(Error::Range("base and step ranges must start at 1 or more".into()));
    }
    if *exponents.start() < 2 {
        return Err(Error::Range("exponents must be at least 2".into()));
    }
    let mut grid = Vec::new();
    for a in bases {
        for c in steps.clone() {
            for n in exponents.clone() {
                grid.push((a, c, n));
            }
        }
    }
    let results: Vec<Option<(bool, ZnResult)>> = grid
        .par_iter()
        .map(|&(a, c, n)| {
            let skippable = skip_rule_applies(a, c, n);
            if skippable && mode == ScanMode::Skip {
                return None;
            }
            let params = GeneralMersenneParams::new(a, c, n).expect("validated ranges");
            Some((skippable, compute_zn(&params)))
        })
        .collect();

    let mut out = ScanOutcome {
        primes: Vec::new(),
        evaluated: 0,
        skipped: 0,
        skip_violations: Vec::new(),
    };
    for r in results {
        match r {
            None => out.skipped += 1,
            Some((skippable, z)) => {
                out.evaluated += 1;
                if z.verdict.is_prime() {
                    if skippable {
                        out.skip_violations.push(z.clone());
                    }
                    out.primes.push(z);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::PrimalityStatus;

    fn n(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn compute_examples() {
        let z = compute_zn(&GeneralMersenneParams::new(1u32, 1u32, 2).unwrap());
        assert_eq!(z.value, n(3));
        assert!(z.verdict.is_proven_prime());

        let z = compute_zn(&GeneralMersenneParams::new(1u32, 1u32, 11).unwrap());
        assert_eq!(z.value, n(2047));
        assert_eq!(z.verdict.status, PrimalityStatus::ProvenComposite);
        assert_eq!(z.verdict.witness, Some(n(23)));

        let z = compute_zn(&GeneralMersenneParams::new(2u32, 2u32, 2).unwrap());
        assert_eq!(z.value, n(6));
        assert!(z.divisibility_exact);
        assert!(!z.verdict.is_prime());
    }

    #[test]
    fn params_are_validated() {
        assert!(GeneralMersenneParams::new(0u32, 1u32, 2).is_err());
        assert!(GeneralMersenneParams::new(1u32, 0u32, 2).is_err());
        assert!(GeneralMersenneParams::new(1u32, 1u32, 1).is_err());
    }

    #[test]
    fn contrapositive_examples() {
        assert!(check_exponent_contrapositive(&n(1), &n(1), 12).unwrap().is_empty());
        assert!(check_exponent_contrapositive(&n(3), &n(4), 10).unwrap().is_empty());
        assert!(check_exponent_contrapositive(&n(2), &n(6), 8).unwrap().is_empty());
        assert!(check_exponent_contrapositive(&n(1), &n(1), 3).is_err());
    }

    #[test]
    fn multiple_step_examples() {
        let r = check_multiple_step_composite(&n(2), &n(1), 6).unwrap();
        assert!(r.violations.is_empty());
        assert_eq!(r.predicted_factors.len(), 5);
        assert!(check_multiple_step_composite(&n(3), &n(2), 5).unwrap().violations.is_empty());

        let z = compute_zn(&GeneralMersenneParams::new(2u32, 6u32, 2).unwrap());
        assert_eq!(z.value, n(10));
        let r = check_multiple_step_composite(&n(2), &n(3), 2).unwrap();
        assert_eq!(r.predicted_factors, vec![(2, "2".to_string())]);
        assert!(check_multiple_step_composite(&n(1), &n(3), 4).is_err());
    }

    #[test]
    fn growth_examples() {
        assert!(check_strict_growth(2, 100).unwrap());
        assert!(check_strict_growth(5, 50).unwrap());
        // n = 3: Z at a = 2 is 19, at a = 1 it is 7 = 2^3 - 1.
        let z2 = compute_zn(&GeneralMersenneParams::new(2u32, 1u32, 3).unwrap()).value;
        let z1 = compute_zn(&GeneralMersenneParams::new(1u32, 1u32, 3).unwrap()).value;
        assert_eq!((z2.clone(), z1.clone()), (n(19), n(7)));
        assert!(z2 > z1);
        assert!(check_strict_growth(1, 10).is_err());
    }

    #[test]
    fn scan_examples() {
        let out = scan_prime_zn(1..=1, 1..=1, 2..=13, ScanMode::Skip).unwrap();
        let exps: Vec<u32> = out.primes.iter().map(|z| z.params.exponent()).collect();
        assert_eq!(exps, vec![2, 3, 5, 7, 13]);

        let out = scan_prime_zn(2..=2, 1..=1, 2..=2, ScanMode::Skip).unwrap();
        assert_eq!(out.primes[0].value, n(5));

        let out = scan_prime_zn(1..=3, 1..=3, 2..=2, ScanMode::Skip).unwrap();
        assert_eq!(out.skipped, 2);
        assert_eq!(out.evaluated, 7);
        let hits: Vec<(u64, u64, u64)> = out
            .primes
            .iter()
            .map(|z| {
                let p = &z.params;
                (
                    p.base().try_into().unwrap(),
                    p.step().try_into().unwrap(),
                    (&z.value).try_into().unwrap(),
                )
            })
            .collect();
        assert_eq!(hits, vec![(1, 1, 3), (1, 3, 5), (2, 1, 5), (2, 3, 7), (3, 1, 7)]);

        let full = scan_prime_zn(1..=3, 1..=3, 2..=2, ScanMode::NoSkip).unwrap();
        assert_eq!(full.evaluated, 9);
        assert!(full.skip_violations.is_empty());
        assert_eq!(full.primes, out.primes);
    }
}
