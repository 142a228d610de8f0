//! The three certificate relations over a prime basis `2 = C_1 < ... < C_n`.
//!
//! Each relation builds `R` as a signed sum of terms arranged so that no
//! basis prime divides `R`. Any such `R` with `C_n < R <= C_{n+1}^2 - 1` has
//! no prime factor below its square root, hence is prime. Values outside the
//! window, zero or negative are rejected, never treated as errors.

mod enumerate;
mod factorial;
mod relation1;
mod relation2;
mod relation3;

use num_bigint::{BigInt, BigUint};

pub use crate::certificate::Parity;
pub use enumerate::{enumerate_certified, enumerate_multiset, Budget, Family, DEFAULT_CANDIDATE_CAP};
pub use factorial::{eval_relation1_factorial, Relation1FactorialParams};
pub use relation1::{eval_relation1, Relation1Params};
pub use relation2::{eval_relation2, Relation2Params};
pub use relation3::{eval_relation3, Relation3Params};

use crate::certificate::Window;
use crate::oracle::PrimeBasis;

/// `(C_n, C_{n+1}^2 - 1]`.
pub fn standard_window(basis: &PrimeBasis) -> Window {
    Window::new(basis.largest(), basis.window_high())
}

fn signed(parity: Parity, magnitude: &BigUint) -> BigInt {
    parity.apply(magnitude.clone())
}
