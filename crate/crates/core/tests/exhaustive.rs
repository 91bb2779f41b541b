mod common;

use common::{energy, is_skew, skew_from_half};
use merit_core::skew::{MAX_FULL_EXHAUSTIVE, MAX_SKEW_EXHAUSTIVE};
use merit_core::{exhaustive_best, is_skew_symmetric, Correlation, Error, MeritFactor};

fn brute_min(n: usize) -> i64 {
    (0u32..1 << n)
        .map(|m| {
            energy(
                &(0..n)
                    .map(|i| if m >> i & 1 == 1 { 1 } else { -1 })
                    .collect::<Vec<_>>(),
            )
        })
        .min()
        .unwrap()
}

fn brute_skew_min(n: usize) -> i64 {
    let l = n / 2;
    (0u32..1 << (l + 1))
        .map(|m| {
            let half: Vec<i64> = (0..=l)
                .map(|i| if m >> i & 1 == 1 { 1 } else { -1 })
                .collect();
            let s = skew_from_half(&half);
            assert!(is_skew(&s));
            energy(&s)
        })
        .min()
        .unwrap()
}

#[test]
fn known_optima() {
    let r = exhaustive_best(5, false).unwrap();
    assert_eq!(r.merit_factor.value(), 6.25);
    let r = exhaustive_best(11, false).unwrap();
    assert_eq!(r.energy, 5);
    assert_eq!(r.merit_factor.value(), 12.1);
    let r = exhaustive_best(13, false).unwrap();
    assert_eq!(r.merit_factor, MeritFactor::new(13, 6));
    assert_eq!(
        (r.merit_factor.numerator, r.merit_factor.denominator),
        (169, 12)
    );
    let s = exhaustive_best(13, true).unwrap();
    assert_eq!(s.merit_factor, r.merit_factor);
}

#[test]
fn full_search_matches_brute_force() {
    for n in 2..=14 {
        let r = exhaustive_best(n, false).unwrap();
        assert_eq!(r.energy, brute_min(n), "n={n}");
        assert_eq!(r.witness.len(), n);
        assert_eq!(r.witness.energy().unwrap(), r.energy);
    }
}

#[test]
fn skew_search_matches_brute_force() {
    for n in (3..=25).step_by(2) {
        let r = exhaustive_best(n, true).unwrap();
        assert_eq!(r.energy, brute_skew_min(n), "n={n}");
        assert!(is_skew_symmetric(&r.witness));
        assert_eq!(r.witness.energy().unwrap(), r.energy);
        // b_0 is pinned by complement symmetry
        assert_eq!(r.evaluated, 1 << (n / 2));
    }
}

#[test]
fn caps_are_enforced() {
    assert!(matches!(
        exhaustive_best(MAX_FULL_EXHAUSTIVE + 1, false),
        Err(Error::Domain(_))
    ));
    assert!(matches!(
        exhaustive_best(MAX_SKEW_EXHAUSTIVE + 2, true),
        Err(Error::Domain(_))
    ));
    assert!(matches!(exhaustive_best(12, true), Err(Error::Domain(_))));
    assert!(exhaustive_best(1, false).is_err());
}
