use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use primerel::search::SearchState;
use proptest::prelude::*;

fn trial_division(x: u64) -> bool {
    x >= 2 && (2..).take_while(|d| d * d <= x).all(|d| x % d != 0)
}

#[test]
fn hits_are_prime_odd_in_range_and_coprime() {
    for seed in [5u64, 7, 13, 31, 101, 997] {
        let state = SearchState::new(seed).unwrap();
        let max_n = (2 * (seed * seed).ilog2() as u64 + 2).max(state.product().bits() + 64);
        let hits = state.search(max_n, None).unwrap();
        assert_eq!(hits.is_empty(), seed > 13, "seed {seed}");
        for h in &hits {
            let v: u64 = h.value().try_into().unwrap();
            assert!(trial_division(v), "seed {seed}: {v}");
            assert!(h.certificate.verdict.is_proven_prime());
            assert!(v % 2 == 1);
            assert!(seed < v && v < seed * seed);
            assert!(h.k.is_odd());
            assert!(h.value().gcd(state.product()).is_one());
        }
        let order: Vec<(u64, &BigUint)> = hits.iter().map(|h| (h.n, &h.k)).collect();
        assert!(order.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn min_exponent_window_is_nonempty() {
    for (seed, expected) in [(5u64, 1), (7, 1), (11, 1), (13, 10)] {
        let state = SearchState::new(seed).unwrap();
        let m = state.min_exponent().unwrap().unwrap();
        assert_eq!(m.n, expected, "seed {seed}");
        assert!(state.k_window(m.n).odd().next().is_some());
        for n in 1..m.n {
            assert!(state.k_window(n).odd().next().is_none(), "seed {seed}, n {n}");
        }
    }
}

/// From 17 on, the product outgrows the window so fast that no power of
/// two lands on a window value modulo it.
#[test]
fn larger_seeds_never_hit() {
    for seed in [17u64, 19, 23, 29, 31, 37, 41, 43, 101, 997] {
        let state = SearchState::new(seed).unwrap();
        assert_eq!(state.min_exponent().unwrap(), None, "seed {seed}");
    }
    // the period of 2 modulo c is small enough to confirm directly here
    for seed in [17u64, 19, 23, 29, 31] {
        let state = SearchState::new(seed).unwrap();
        let c: u64 = state.product().try_into().unwrap();
        let (mut x, mut n) = (1u64, 0u64);
        loop {
            x = (x as u128 * 2 % c as u128) as u64;
            n += 1;
            let r = c - x;
            let in_window = |r: u64| r > seed && r < seed * seed && r % 2 == 1;
            assert!(!in_window(r), "seed {seed}, n {n}");
            if x == 1 {
                break;
            }
        }
    }
}

#[test]
fn exponent_classes_match_direct_powers() {
    let state = SearchState::new(13).unwrap();
    for r in (15u64..168).step_by(2) {
        let class = state.exponents_for(r).unwrap();
        for n in 1..200u64 {
            let direct = ((BigUint::one() << n) + r) % state.product() == BigUint::from(0u32);
            let solved = class.as_ref().is_some_and(|c| c.contains(n));
            assert_eq!(direct, solved, "r {r}, n {n}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn window_matches_brute_force(seed_index in 0usize..12, n in 1u64..48) {
        let seeds = [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43];
        let seed = seeds[seed_index];
        let state = SearchState::new(seed).unwrap();
        let c: u128 = state.product().try_into().unwrap();
        let w = state.k_window(n);
        let first: u128 = (&w.first).try_into().unwrap();
        let last: u128 = (&w.last).try_into().unwrap();
        let shift = 1u128 << n;
        let (lo, hi) = (seed as u128, (seed * seed - 1) as u128);
        // k below first, inside, and just past last
        let top = last + 3;
        for k in first.saturating_sub(3).max(1)..=top {
            let r = (c * k) as i128 - shift as i128;
            let inside = r > lo as i128 && r <= hi as i128;
            prop_assert_eq!(inside, k >= first && k <= last, "k = {}", k);
        }
    }
}
