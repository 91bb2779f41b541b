mod common;

use common::{partition_count, partition_ternary, potentials, sidelobes};
use merit_core::partitions::{write_scan_table, Flavor, Objective, RestrictionClass};
use merit_core::{
    best_partition, enumerate_partitions, evaluation_length, is_skew_symmetric, potential,
    potential_at, project_partition, sample_member, scan_partitions, Correlation, Error, Partition,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn p(parts: &[u32]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}

#[test]
fn worked_example_1_1_2_2() {
    let part = p(&[1, 1, 2, 2]);
    let proj = project_partition(&part, 21, 1).unwrap();
    let z = proj.zeroed();
    let want = [
        1, -1, 1, 1, -1, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, -1, -1, 1, 1, 1,
    ];
    assert_eq!(z.elements(), &want);
    let lobes = z.sidelobes().unwrap();
    assert_eq!(
        lobes.values(),
        &[1, 0, 1, 0, 1, 0, -5, 0, 3, 0, -1, 0, 0, 0, 0, 0, 0, 0, -4, 0]
    );
    assert_eq!(z.energy().unwrap(), 54);
    assert_eq!(potential_at(&part, 21).unwrap().potential, 54);

    let scalar: Vec<i64> = want.iter().map(|&x| x as i64).collect();
    assert_eq!(partition_ternary(&[1, 1, 2, 2], 21), scalar);
    assert_eq!(sidelobes(&scalar), lobes.values());
    assert_eq!(potentials(&[1, 1, 2, 2], 21), (54, 42));
}

#[test]
fn partition_counts() {
    for k in 1..=30usize {
        let mut total = 0;
        for m in 1..=k {
            let got = enumerate_partitions(k, Some(m), true).count() as u64;
            assert_eq!(got, partition_count(k, m), "k={k} m={m}");
            total += got;
        }
        assert_eq!(enumerate_partitions(k, None, true).count() as u64, total);
    }
    // p(30)
    assert_eq!(enumerate_partitions(30, None, true).count(), 5604);
    for k in 1..=16usize {
        assert_eq!(enumerate_partitions(k, None, false).count(), 1 << (k - 1));
    }
}

#[test]
fn enumeration_is_well_formed() {
    let all: Vec<_> = enumerate_partitions(12, None, true).collect();
    for part in &all {
        assert!(part.is_non_increasing());
        assert_eq!(part.order(), 12);
    }
    let mut sorted = all.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), all.len());
    assert_eq!(enumerate_partitions(0, None, true).count(), 0);
}

#[test]
fn partition_parsing() {
    assert_eq!(Partition::parse("18,11,6,4").unwrap(), p(&[18, 11, 6, 4]));
    assert_eq!(p(&[18, 11, 6, 4]).to_string(), "18,11,6,4");
    match Partition::parse("3,x") {
        Err(Error::Parse { position, .. }) => assert_eq!(position, 2),
        other => panic!("{other:?}"),
    }
    assert!(Partition::parse("3,0").is_err());
    assert!(Partition::new(vec![]).is_err());
}

#[test]
fn potentials_match_oracle_and_are_length_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..50 {
        let k = rng.gen_range(1..=30);
        // a random composition of k, sorted into a partition
        let mut parts = Vec::new();
        let mut left = k as u32;
        while left > 0 {
            let x = rng.gen_range(1..=left);
            parts.push(x);
            left -= x;
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let part = p(&parts);
        let n0 = evaluation_length(k);
        assert!(n0 % 2 == 1 && n0 >= 3 * k + 2 && n0 <= 3 * k + 3);
        let base = potential(&part);
        assert_eq!(base.n, n0);
        assert_eq!((base.potential, base.normalized), potentials(&parts, n0));
        for n in [n0 + 2, n0 + 10] {
            let r = potential_at(&part, n).unwrap();
            assert_eq!(
                (r.potential, r.normalized),
                (base.potential, base.normalized),
                "{part} n={n}"
            );
            assert_eq!(potentials(&parts, n), (base.potential, base.normalized));
        }
    }
}

/// `(k, parts, U-optimal partition, U, U*-optimal partition, U*)`
type TableRow = (usize, usize, &'static [u32], i64, &'static [u32], i64);

#[test]
fn table_rows() {
    let rows: [TableRow; 4] = [
        (39, 4, &[18, 11, 6, 4], 3731, &[18, 11, 6, 4], 1082),
        (41, 6, &[17, 9, 6, 4, 3, 2], 2217, &[17, 9, 6, 4, 3, 2], 813),
        (56, 4, &[27, 14, 9, 6], 12856, &[27, 14, 9, 6], 3472),
        (
            68,
            7,
            &[25, 11, 10, 7, 5, 5, 5],
            9596,
            &[25, 12, 9, 8, 6, 4, 4],
            3040,
        ),
    ];
    for (k, m, up, u, sp, us) in rows {
        let best_u = best_partition(k, m, Objective::Potential).unwrap();
        assert_eq!(
            (best_u.partition.parts(), best_u.potential),
            (up, u),
            "k={k}"
        );
        let best_s = best_partition(k, m, Objective::Normalized).unwrap();
        assert_eq!(
            (best_s.partition.parts(), best_s.normalized),
            (sp, us),
            "k={k}"
        );
        assert_eq!(potentials(up, evaluation_length(k)).0, u);
        assert_eq!(potentials(sp, evaluation_length(k)).1, us);
    }
}

#[test]
fn normalized_tie_at_41_6_goes_to_smaller_partition() {
    let scan = scan_partitions(41, 6).unwrap();
    let tied: Vec<_> = scan
        .iter()
        .filter(|r| r.normalized == 813)
        .map(|r| r.partition.to_string())
        .collect();
    assert_eq!(tied.len(), 2);
    assert!(tied.contains(&"18,9,6,4,2,2".to_string()));
    assert!(tied.contains(&"17,9,6,4,3,2".to_string()));
}

#[test]
fn scan_errors_and_table() {
    assert!(matches!(scan_partitions(2, 5), Err(Error::Domain(_))));
    assert!(matches!(
        best_partition(5, 0, Objective::Potential),
        Err(Error::Domain(_))
    ));
    let scan = scan_partitions(6, 2).unwrap();
    assert_eq!(scan.len(), 3);
    let mut out = Vec::new();
    write_scan_table(&mut out, &scan).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert_eq!(text.lines().next(), Some("partition|U|Ustar"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn restriction_cardinalities() {
    let general = RestrictionClass {
        n: 21,
        k: 6,
        partition: None,
        flavor: Flavor::General,
    };
    assert_eq!(general.cardinality().unwrap(), 1 << 15);
    let skew = RestrictionClass {
        n: 21,
        k: 6,
        partition: None,
        flavor: Flavor::Skew,
    };
    assert_eq!(skew.cardinality().unwrap(), 1 << 5);
    let even = RestrictionClass {
        n: 20,
        k: 6,
        partition: None,
        flavor: Flavor::Skew,
    };
    assert!(even.cardinality().is_err());
}

#[test]
fn sampled_members_respect_the_partition() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for parts in [&[1u32, 1, 2, 2][..], &[18, 11, 6, 4], &[3], &[2, 1, 1]] {
        let part = p(parts);
        let k = part.order();
        for n in [2 * k + 1, 2 * k + 3, (3 * k + 7) | 1] {
            for _ in 0..20 {
                let half = sample_member(&part, n, &mut rng).unwrap();
                let seq = half.expand();
                assert_eq!(seq.len(), n);
                assert!(is_skew_symmetric(&seq));
                let prefix: Vec<i8> = seq.iter().take(k).collect();
                assert_eq!(prefix, part.prefix(1));
                // run lengths inside the prefix are the parts
                let scalar = partition_ternary(parts, n);
                for i in (0..k).chain(n - k..n) {
                    assert_eq!(seq.get(i) as i64, scalar[i], "{part} n={n} i={i}");
                }
            }
        }
        assert!(sample_member(&part, 2 * k - 1, &mut rng).is_err());
    }
}
