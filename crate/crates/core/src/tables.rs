//! The three worked tables for bound 119 (basis 2, 3, 5, 7), re-evaluated.
//!
//! Two columns of the first table print a value their own parameters do not
//! produce. Those columns are reported as errata together with nearby
//! parameter tuples that do reach the printed value.

use num_bigint::BigInt;
use serde::Serialize;

use crate::certificate::{CandidateCertificate, Parity};
use crate::error::Result;
use crate::oracle::PrimeBasis;
use crate::relations::{
    eval_relation1, eval_relation2, eval_relation3, Relation1Params, Relation2Params, Relation3Params,
};

pub const TABLE_BOUND: u64 = 119;

/// One printed column of the relation 1 table. `b1`, `b2` are the printed
/// exponents of `-1`; `exponents[i]` belongs to `C_{n+1+i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relation1Column {
    pub b1: u64,
    pub b2: u64,
    pub k: u64,
    pub exponents: Vec<u32>,
    pub printed: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relation2Column {
    pub b1: u64,
    pub b2: u64,
    pub k1: u64,
    pub k2: u64,
    pub printed: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relation3Column {
    pub b: [u64; 4],
    pub k: [u64; 4],
    pub printed: i64,
}

pub fn relation1_columns() -> Vec<Relation1Column> {
    let col = |b1, b2, k, exponents: &[u32], printed| Relation1Column {
        b1,
        b2,
        k,
        exponents: exponents.to_vec(),
        printed,
    };
    vec![
        col(2, 1, 1, &[2], 89),
        col(1, 2, 6, &[2], 71),
        col(2, 1, 1, &[1, 1], 67),
        col(1, 2, 9, &[1, 2], 31),
        col(1, 2, 7, &[2, 1], 103),
    ]
}

/// `S1 = {2, 7}`, `S2 = {3, 5}`, `k3 = 0` throughout.
pub fn relation2_columns() -> Vec<Relation2Column> {
    [
        (2, 2, 1, 3, 59),
        (2, 2, 2, 3, 73),
        (2, 2, 1, 5, 89),
        (2, 1, 11, 5, 79),
        (2, 2, 2, 1, 43),
        (1, 2, 2, 3, 17),
        (1, 2, 1, 5, 61),
    ]
    .into_iter()
    .map(|(b1, b2, k1, k2, printed)| Relation2Column {
        b1,
        b2,
        k1,
        k2,
        printed,
    })
    .collect()
}

/// Terms `105 k1, 70 k2, 42 k3, 30 k4` and `k5 = 0` throughout.
pub fn relation3_columns() -> Vec<Relation3Column> {
    vec![
        Relation3Column {
            b: [2, 1, 2, 2],
            k: [1, 1, 1, 1],
            printed: 107,
        },
        Relation3Column {
            b: [2, 2, 1, 1],
            k: [1, 1, 2, 1],
            printed: 61,
        },
        Relation3Column {
            b: [2, 2, 1, 1],
            k: [1, 1, 1, 1],
            printed: 103,
        },
        Relation3Column {
            b: [2, 2, 1, 1],
            k: [1, 2, 2, 2],
            printed: 101,
        },
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColumnCheck {
    /// 1-based.
    pub column: usize,
    pub printed: i64,
    pub certificate: CandidateCertificate,
}

impl ColumnCheck {
    pub fn reproduced(&self) -> bool {
        self.certificate.accepted && self.certificate.value == BigInt::from(self.printed)
    }
}

/// Parameters reaching a printed value, ranked by how many fields differ
/// from the printed ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Repair {
    pub column: Relation1Column,
    pub distance: usize,
    pub certificate: CandidateCertificate,
}

fn basis() -> PrimeBasis {
    PrimeBasis::for_bound(TABLE_BOUND).expect("119 is a valid bound")
}

fn relation1_params(basis: &PrimeBasis, c: &Relation1Column) -> Relation1Params {
    Relation1Params::new(basis.clone(), Parity::of(c.b1), Parity::of(c.b2), c.k, &c.exponents)
}

pub fn check_relation1() -> Result<Vec<ColumnCheck>> {
    let basis = basis();
    relation1_columns()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            Ok(ColumnCheck {
                column: i + 1,
                printed: c.printed,
                certificate: eval_relation1(&relation1_params(&basis, c))?,
            })
        })
        .collect()
}

pub fn check_relation2() -> Result<Vec<ColumnCheck>> {
    let basis = basis();
    relation2_columns()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let p = Relation2Params::with_complement(
                basis.clone(),
                &[2, 7],
                [Parity::of(c.b1), Parity::of(c.b2), Parity::Even],
                [c.k1, c.k2, 0],
            );
            Ok(ColumnCheck {
                column: i + 1,
                printed: c.printed,
                certificate: eval_relation2(&p)?,
            })
        })
        .collect()
}

pub fn check_relation3() -> Result<Vec<ColumnCheck>> {
    let basis = basis();
    relation3_columns()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut signs: Vec<Parity> = c.b.iter().map(|&b| Parity::of(b)).collect();
            signs.push(Parity::Even);
            let p = Relation3Params::new(basis.clone(), &signs, &c.k, 0);
            Ok(ColumnCheck {
                column: i + 1,
                printed: c.printed,
                certificate: eval_relation3(&p)?,
            })
        })
        .collect()
}

/// Limits of the repair search: `K <= max_k`, exponents of the first
/// `large_primes` primes above the basis each at most `max_exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RepairGrid {
    pub max_k: u64,
    pub max_exponent: u32,
    pub large_primes: usize,
}

impl Default for RepairGrid {
    fn default() -> Self {
        RepairGrid {
            max_k: 32,
            max_exponent: 4,
            large_primes: 3,
        }
    }
}

fn distance(a: &Relation1Column, b: &Relation1Column) -> usize {
    let width = a.exponents.len().max(b.exponents.len());
    let exp = |c: &Relation1Column, i: usize| c.exponents.get(i).copied().unwrap_or(0);
    usize::from(Parity::of(a.b1) != Parity::of(b.b1))
        + usize::from(Parity::of(a.b2) != Parity::of(b.b2))
        + usize::from(a.k != b.k)
        + (0..width).filter(|&i| exp(a, i) != exp(b, i)).count()
}

/// Every accepted tuple in `grid` whose value is `printed`, nearest first.
pub fn repairs(printed: &Relation1Column, grid: RepairGrid) -> Result<Vec<Repair>> {
    let basis = basis();
    let target = BigInt::from(printed.printed);
    let radix = grid.max_exponent + 1;
    let vectors = (radix as usize).pow(grid.large_primes as u32);
    let mut found = Vec::new();
    for index in 0..vectors {
        let mut exponents = vec![0u32; grid.large_primes];
        let mut rest = index;
        for slot in exponents.iter_mut().rev() {
            *slot = (rest % radix as usize) as u32;
            rest /= radix as usize;
        }
        while exponents.last() == Some(&0) {
            exponents.pop();
        }
        for b1 in [2, 1] {
            for b2 in [2, 1] {
                for k in 1..=grid.max_k {
                    let column = Relation1Column {
                        b1,
                        b2,
                        k,
                        exponents: exponents.clone(),
                        printed: printed.printed,
                    };
                    let certificate = eval_relation1(&relation1_params(&basis, &column))?;
                    if certificate.accepted && certificate.value == target {
                        found.push(Repair {
                            distance: distance(printed, &column),
                            column,
                            certificate,
                        });
                    }
                }
            }
        }
    }
    found.sort_by_key(|r| r.distance);
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation1_has_two_errata() {
        let checks = check_relation1().unwrap();
        let ok: Vec<usize> = checks.iter().filter(|c| c.reproduced()).map(|c| c.column).collect();
        assert_eq!(ok, vec![1, 3, 5]);
        assert_eq!(checks[1].certificate.value, BigInt::from(-1139));
        assert_eq!(checks[3].certificate.value, BigInt::from(-31));
    }

    #[test]
    fn relation2_and_3_reproduce() {
        assert!(check_relation2().unwrap().iter().all(ColumnCheck::reproduced));
        assert!(check_relation3().unwrap().iter().all(ColumnCheck::reproduced));
    }

    #[test]
    fn nearest_repairs() {
        let cols = relation1_columns();
        let r71 = repairs(&cols[1], RepairGrid::default()).unwrap();
        assert_eq!(r71[0].distance, 1);
        assert_eq!(r71[0].column.exponents, vec![3]);
        assert_eq!(r71[0].column.k, 6);

        let r31 = repairs(&cols[3], RepairGrid::default()).unwrap();
        assert_eq!(r31[0].distance, 2);
        assert_eq!((r31[0].column.b1, r31[0].column.b2), (2, 1));
        assert_eq!(r31[0].column.k, 9);
        assert_eq!(r31[0].column.exponents, vec![1, 2]);
    }
}
