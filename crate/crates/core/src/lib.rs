//! Prime generation through coprimality certificates.
//!
//! The crate is organised bottom-up:
//!
//! * [`oracle`] holds the exact arithmetic helpers and the independent
//!   primality oracle every other module is checked against.
//! * [`mersenne`] evaluates generalized Mersenne numbers
//!   `Z_n = ((a + C)^n - a^n) / C` and machine-checks their composite cases.
//! * [`exclusion`] generates odd primes as `2K + 1` by striking the
//!   progressions `K = C*m + (C - 1)/2` from a bitset.
//! * [`relations`] evaluates the three certificate relations built from a
//!   prime basis and enumerates every certified prime inside a window.
//! * [`search`] runs the seeded search `R = c*k - 2^n` above a known prime.
//!
//! All candidate arithmetic is exact; nothing is ever rounded through `f64`.

pub mod certificate;
pub mod decimal;
pub mod error;
pub mod exclusion;
pub mod mersenne;
pub mod oracle;
pub mod relations;
pub mod search;
pub mod tables;

pub use certificate::{CandidateCertificate, CertificateParams, Construction, Rejection, Window};
pub use error::{Error, Result};
pub use oracle::{is_prime, OracleVerdict, PrimalityStatus, PrimeBasis, ProofMethod};

pub use num_bigint::{BigInt, BigUint};
