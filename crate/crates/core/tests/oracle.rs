use num_bigint::BigUint;
use num_integer::Integer;
use primerel::oracle::{
    is_prime, odd_prime_product, sieve_primes_below, PrimeBasis, PrimalityStatus, SieveConfig,
};
use proptest::prelude::*;
use std::sync::OnceLock;

fn large_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| sieve_primes_below(3_000_000).unwrap())
}

fn trial_division(x: u64) -> bool {
    x >= 2 && (2..).take_while(|d| d * d <= x).all(|d| x % d != 0)
}

#[test]
fn sieve_matches_trial_division_at_a_million() {
    let limit = 1_000_000;
    let sieve = sieve_primes_below(limit).unwrap();
    let mut is = vec![false; limit as usize];
    for &p in &sieve {
        is[p as usize] = true;
    }
    for x in 0..limit {
        assert_eq!(is[x as usize], trial_division(x), "{x}");
    }
}

#[test]
fn small_segments_agree_with_default() {
    let small = SieveConfig { segment_len: 4096 }.primes_below(300_007).unwrap();
    assert_eq!(small, sieve_primes_below(300_007).unwrap());
}

#[test]
fn is_prime_agrees_with_the_sieve_below_a_million() {
    let sieve = sieve_primes_below(1_000_000).unwrap();
    let mut next = sieve.iter().peekable();
    for x in 0u64..1_000_000 {
        let expected = next.peek() == Some(&&x);
        if expected {
            next.next();
        }
        let v = is_prime(&BigUint::from(x));
        assert_eq!(v.is_prime(), expected, "{x}");
        assert!(v.is_proven(), "{x}");
    }
}

#[test]
fn composite_verdicts_carry_a_real_witness() {
    for x in (4u64..20_000).filter(|&x| !trial_division(x)) {
        let v = is_prime(&BigUint::from(x));
        assert_eq!(v.status, PrimalityStatus::ProvenComposite);
        if let Some(w) = v.witness {
            let w: u64 = w.try_into().unwrap();
            assert!(w > 1 && w < x && x % w == 0, "{x} witness {w}");
        }
    }
}

#[test]
fn basis_gap_is_composite() {
    // every bound up to 10^6 has sqrt at most 1000
    for root in 2u64..=1000 {
        let basis = PrimeBasis::for_bound((root * root).max(5)).unwrap();
        for x in basis.largest() + 1..basis.next_prime() {
            assert!(!is_prime(&BigUint::from(x)).is_prime(), "{x} in gap of {root}");
        }
        assert!(trial_division(basis.next_prime()));
        assert!(basis.largest() <= root && basis.next_prime() > root);
    }
}

#[test]
fn odd_prime_product_is_exactly_the_odd_primes() {
    for limit in [3u64, 4, 10, 11, 29, 100, 541] {
        let c = odd_prime_product(limit).unwrap();
        assert!(c.is_odd());
        for p in 2..=limit.max(600) {
            if !trial_division(p) {
                continue;
            }
            let divides = (&c % p) == BigUint::from(0u32);
            assert_eq!(divides, p != 2 && p <= limit, "p = {p}, limit = {limit}");
            let square = BigUint::from(p * p);
            assert_ne!(&c % &square, BigUint::from(0u32), "{p}^2 divides");
        }
    }
}

proptest! {
    #[test]
    fn sieve_matches_trial_division(limit in 2u64..20_000) {
        let expected: Vec<u64> = (2..limit).filter(|&x| trial_division(x)).collect();
        prop_assert_eq!(sieve_primes_below(limit).unwrap(), expected);
    }

    #[test]
    fn products_of_two_large_primes_are_composite(i in 0usize..5000, j in 0usize..5000) {
        let primes = large_primes();
        let (p, q) = (primes[primes.len() - 1 - i], primes[primes.len() - 1 - j]);
        let n = BigUint::from(p) * q;
        let v = is_prime(&n);
        prop_assert!(!v.is_prime());
        prop_assert!(v.is_proven());
    }
}
