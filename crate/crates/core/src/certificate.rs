use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use serde::{Deserialize, Serialize};

use crate::decimal;
use crate::oracle::{Oracle, OracleVerdict};

/// Which construction produced a candidate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    Relation1,
    Relation1Factorial,
    Relation2,
    Relation3,
    ExclusionSieve,
    BigSearch,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Construction::Relation1 => "relation1",
            Construction::Relation1Factorial => "relation1-factorial",
            Construction::Relation2 => "relation2",
            Construction::Relation3 => "relation3",
            Construction::ExclusionSieve => "exclusion-sieve",
            Construction::BigSearch => "big-search",
        };
        f.write_str(name)
    }
}

/// `(-1)^b` only depends on the parity of `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub const BOTH: [Parity; 2] = [Parity::Even, Parity::Odd];

    /// Parity of a raw exponent as written in a table (`1` is odd, `2` even).
    pub fn of(b: u64) -> Self {
        if b % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    /// Parity giving the sign of `x` (zero counts as positive).
    pub fn of_sign(x: &BigInt) -> Self {
        if x.sign() == Sign::Minus {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    /// `(-1)^b * magnitude`.
    pub fn apply(self, magnitude: BigUint) -> BigInt {
        match self {
            Parity::Even => BigInt::from(magnitude),
            Parity::Odd => -BigInt::from(magnitude),
        }
    }

    /// Representative exponent used when printing (`2` for even, `1` for odd).
    pub fn exponent(self) -> u64 {
        match self {
            Parity::Even => 2,
            Parity::Odd => 1,
        }
    }
}

/// Certificate window `(low, high]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    #[serde(with = "decimal::nat")]
    pub low: BigUint,
    #[serde(with = "decimal::nat")]
    pub high: BigUint,
}

impl Window {
    pub fn new(low: impl Into<BigUint>, high: impl Into<BigUint>) -> Self {
        Window {
            low: low.into(),
            high: high.into(),
        }
    }

    pub fn contains(&self, x: &BigInt) -> bool {
        match x.to_biguint() {
            Some(v) => v > self.low && v <= self.high,
            None => false,
        }
    }
}

/// Why a candidate was not accepted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum Rejection {
    /// `R <= 0`.
    NotNatural,
    /// `R` is a natural number at or below the window floor.
    BelowWindow,
    AboveWindow,
    /// A multiplier is divisible by a prime it must avoid.
    Constraint { term: usize, prime: u64 },
    /// An even multiplier in the seeded search.
    EvenMultiplier,
}

/// Parameters in canonical, lossless form. Big values are decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CertificateParams {
    Relation1 {
        bound: String,
        b1: Parity,
        b2: Parity,
        multiplier: String,
        /// Offset `j` of the large prime `C_{n+j}` mapped to its exponent.
        exponents: BTreeMap<u32, u32>,
    },
    Relation1Factorial {
        bound: String,
        b1: Parity,
        b2: Parity,
        k1: String,
        exponents: BTreeMap<u32, u32>,
    },
    Relation2 {
        bound: String,
        first: Vec<u64>,
        second: Vec<u64>,
        signs: [Parity; 3],
        multipliers: [String; 3],
    },
    Relation3 {
        bound: String,
        signs: Vec<Parity>,
        multipliers: Vec<String>,
    },
    ExclusionSieve {
        bound: String,
        k: u64,
    },
    BigSearch {
        seed: String,
        k: String,
        n: u64,
    },
}

/// A generated value together with everything needed to re-check it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateCertificate {
    /// Signed value as computed; equals `|R|` whenever accepted.
    #[serde(with = "decimal::int")]
    pub value: BigInt,
    pub construction: Construction,
    pub params: CertificateParams,
    pub window: Window,
    pub accepted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rejection: Option<Rejection>,
    /// Oracle verdict on `|value|`.
    pub verdict: OracleVerdict,
}

impl CandidateCertificate {
    /// Decides acceptance from the window alone (after any parameter
    /// constraints already failed with `constraint`) and attaches a verdict.
    pub(crate) fn judge(
        value: BigInt,
        construction: Construction,
        params: CertificateParams,
        window: Window,
        constraint: Option<Rejection>,
    ) -> Self {
        let rejection = constraint.or_else(|| {
            if value.sign() != Sign::Plus {
                Some(Rejection::NotNatural)
            } else if !window.contains(&value) {
                let v = value.magnitude();
                Some(if *v <= window.low {
                    Rejection::BelowWindow
                } else {
                    Rejection::AboveWindow
                })
            } else {
                None
            }
        });
        let verdict = Oracle::default().check(value.magnitude());
        CandidateCertificate {
            value,
            construction,
            params,
            window,
            accepted: rejection.is_none(),
            rejection,
            verdict,
        }
    }

    /// Accepted but refuted by a proven verdict: a certificate that lied.
    pub fn is_violation(&self) -> bool {
        self.accepted && self.verdict.is_proven() && !self.verdict.is_prime()
    }

    pub fn magnitude(&self) -> &BigUint {
        self.value.magnitude()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_of_table_exponents() {
        assert_eq!(Parity::of(1), Parity::Odd);
        assert_eq!(Parity::of(2), Parity::Even);
        assert_eq!(Parity::Odd.apply(BigUint::from(5u32)), BigInt::from(-5));
        assert_eq!(Parity::of_sign(&BigInt::from(0)), Parity::Even);
    }

    #[test]
    fn window_is_half_open() {
        let w = Window::new(7u32, 120u32);
        assert!(!w.contains(&BigInt::from(7)));
        assert!(w.contains(&BigInt::from(8)));
        assert!(w.contains(&BigInt::from(120)));
        assert!(!w.contains(&BigInt::from(121)));
        assert!(!w.contains(&BigInt::from(-89)));
    }

    #[test]
    fn params_serialize_with_a_kind_tag() {
        let p = CertificateParams::ExclusionSieve {
            bound: "120".into(),
            k: 56,
        };
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"kind":"exclusion-sieve","bound":"120","k":56}"#);
        let back: CertificateParams = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }
}
