//! Integer partitions as restriction classes of skew-symmetric sequences.
//!
//! A partition `t_0, …, t_g` of `k` fixes the first `k` elements of a
//! skew-symmetric sequence to alternating runs `a…a ā…ā a…a …` of those
//! lengths; skew symmetry then forces the last `k` elements. Zeroing the free
//! middle gives a ternary sequence whose energy is the partition's potential.
//! The normalized potential halves the last `k` Ĉ entries (shifts `1..=k`,
//! always even) before squaring.

use std::fmt;
use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sequence::{BinarySequence, TernarySequence};
use crate::skew::SkewHalf;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::Domain(format!(
                "partition parts must be positive and non-empty, got {parts:?}"
            )));
        }
        Ok(Self(parts))
    }

    /// Parses a comma-separated list such as `18,11,6,4`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut parts = Vec::new();
        let mut offset = 0;
        for tok in text.split(',') {
            let t = tok.trim();
            let v = t
                .parse::<u32>()
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| Error::parse(offset, format!("bad partition part {t:?}")))?;
            parts.push(v);
            offset += tok.len() + 1;
        }
        Self::new(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Restriction order `k = Σ t_i`.
    pub fn order(&self) -> usize {
        self.0.iter().map(|&t| t as usize).sum()
    }

    pub fn is_non_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }

    /// Alternating run prefix of length `k` starting with `a`.
    pub fn prefix(&self, a: i8) -> Vec<i8> {
        let mut out = Vec::with_capacity(self.order());
        let mut s = a;
        for &t in &self.0 {
            out.extend(std::iter::repeat_n(s, t as usize));
            s = -s;
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// Restriction class flavour: all sequences, or skew-symmetric ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Flavor {
    General,
    Skew,
}

/// Sequences of length `n` whose first `k` elements are fixed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RestrictionClass {
    pub n: usize,
    pub k: usize,
    pub partition: Option<Partition>,
    pub flavor: Flavor,
}

impl RestrictionClass {
    /// `2^{n-k}` for the general class, `2^{l-k+1}` for the skew class.
    pub fn cardinality(&self) -> Result<u128> {
        let exp = match self.flavor {
            Flavor::General => self.n.checked_sub(self.k),
            Flavor::Skew => {
                if self.n.is_multiple_of(2) {
                    return Err(Error::Domain("skew class needs odd n".into()));
                }
                (self.n / 2 + 1).checked_sub(self.k)
            }
        }
        .ok_or_else(|| Error::Size(format!("k = {} too large for n = {}", self.k, self.n)))?;
        if exp >= 128 {
            return Err(Error::Size(format!("2^{exp} does not fit in 128 bits")));
        }
        Ok(1u128 << exp)
    }
}

/// Streams the partitions of `k`, either as non-increasing partitions or as
/// ordered compositions, optionally with an exact part count.
///
/// Order: by part count, then lexicographically decreasing.
pub fn enumerate_partitions(
    k: usize,
    parts: Option<usize>,
    non_increasing: bool,
) -> impl Iterator<Item = Partition> {
    let counts = match parts {
        Some(m) => m..=m,
        None => 1..=k,
    };
    counts.flat_map(move |m| PartitionIter::new(k, m, non_increasing))
}

struct PartitionIter {
    current: Option<Vec<u32>>,
    capped: bool,
}

impl PartitionIter {
    fn new(k: usize, m: usize, capped: bool) -> Self {
        let current = (m >= 1 && m <= k).then(|| {
            let mut v = vec![1u32; m];
            v[0] = (k - m + 1) as u32;
            v
        });
        Self { current, capped }
    }

    fn successor(&self, a: &[u32]) -> Option<Vec<u32>> {
        let m = a.len();
        let mut suffix: u32 = a[m - 1];
        for i in (0..m.saturating_sub(1)).rev() {
            suffix += a[i];
            let head = a[i] - 1;
            let slots = (m - 1 - i) as u32;
            let rest = suffix - head;
            if head == 0 || rest < slots || (self.capped && rest > slots * head) {
                continue;
            }
            let mut next = a[..i].to_vec();
            next.push(head);
            let mut remaining = rest;
            for s in (0..slots).rev() {
                let cap = if self.capped { head } else { u32::MAX };
                let take = cap.min(remaining - s);
                next.push(take);
                remaining -= take;
            }
            return Some(next);
        }
        None
    }
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let cur = self.current.take()?;
        self.current = self.successor(&cur);
        Some(Partition(cur))
    }
}

/// Number of orbits of length-`k` sequences under the order-8 symmetry group:
/// `2^{k-3} + 2^{⌊k/2⌋ - 2 + (k mod 2)}`.
pub fn symmetry_class_count(k: usize) -> Result<u64> {
    if k < 3 {
        return Err(Error::Domain(format!("class count needs k >= 3, got {k}")));
    }
    if k > 60 {
        return Err(Error::Size(format!(
            "class count for k = {k} overflows u64"
        )));
    }
    Ok((1u64 << (k - 3)) + (1u64 << (k / 2 + k % 2 - 2)))
}

/// Fixed prefix, forced suffix and free count of a partition projected onto
/// a skew-symmetric sequence of length `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Projection {
    pub n: usize,
    pub prefix: Vec<i8>,
    pub suffix: Vec<i8>,
    pub free: usize,
}

impl Projection {
    /// The ternary sequence with the free middle zeroed.
    pub fn zeroed(&self) -> TernarySequence {
        let mut v = self.prefix.clone();
        v.extend(std::iter::repeat_n(0, self.free));
        v.extend_from_slice(&self.suffix);
        TernarySequence::new(v).expect("values in {-1,0,1}")
    }
}

fn check_length(k: usize, n: usize) -> Result<()> {
    if n.is_multiple_of(2) {
        return Err(Error::Domain(format!("length must be odd, got {n}")));
    }
    if n < 2 * k + 1 {
        return Err(Error::Size(format!(
            "length {n} too short for restriction order {k} (need n >= {})",
            2 * k + 1
        )));
    }
    Ok(())
}

pub fn project_partition(partition: &Partition, n: usize, a: i8) -> Result<Projection> {
    if a != 1 && a != -1 {
        return Err(Error::Domain(format!("leading sign must be ±1, got {a}")));
    }
    let k = partition.order();
    check_length(k, n)?;
    let l = n / 2;
    let prefix = partition.prefix(a);
    // position n-k+j is l+i with i = l-k+1+j, mirrored from l-i = k-1-j
    let suffix = (0..k)
        .map(|j| {
            let i = l - k + 1 + j;
            let s = prefix[l - i];
            if i % 2 == 1 {
                -s
            } else {
                s
            }
        })
        .collect();
    Ok(Projection {
        n,
        prefix,
        suffix,
        free: n - 2 * k,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Objective {
    /// Potential 𝒰.
    Potential,
    /// Normalized potential 𝒰*.
    Normalized,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PotentialReport {
    pub partition: Partition,
    pub potential: i64,
    pub normalized: i64,
    /// Length the ternary sequence was evaluated at.
    pub n: usize,
}

impl PotentialReport {
    pub fn value(&self, objective: Objective) -> i64 {
        match objective {
            Objective::Potential => self.potential,
            Objective::Normalized => self.normalized,
        }
    }
}

/// Smallest odd `n >= 3k + 2`.
pub fn evaluation_length(k: usize) -> usize {
    (3 * k + 2) | 1
}

pub fn potential(partition: &Partition) -> PotentialReport {
    let n = evaluation_length(partition.order());
    potential_at(partition, n).expect("evaluation length is always valid")
}

/// Potential and normalized potential at an explicit length `n`.
///
/// Only the `2k` non-zero positions contribute, so correlations are
/// accumulated pairwise in O(k²) rather than O(n²).
pub fn potential_at(partition: &Partition, n: usize) -> Result<PotentialReport> {
    let proj = project_partition(partition, n, 1)?;
    let k = partition.order();
    let mut pos: Vec<(usize, i64)> = proj
        .prefix
        .iter()
        .enumerate()
        .map(|(i, &s)| (i, s as i64))
        .collect();
    pos.extend(
        proj.suffix
            .iter()
            .enumerate()
            .map(|(j, &s)| (n - k + j, s as i64)),
    );
    let mut corr = vec![0i64; n];
    for (x, &(i, si)) in pos.iter().enumerate() {
        for &(j, sj) in &pos[x + 1..] {
            corr[j - i] += si * sj;
        }
    }
    let mut potential = 0;
    let mut normalized = 0;
    for (u, &c) in corr.iter().enumerate().skip(1) {
        potential += c * c;
        if u <= k {
            debug_assert!(c % 2 == 0, "tail sidelobe C_{u} = {c} is odd");
            normalized += (c / 2) * (c / 2);
        } else {
            normalized += c * c;
        }
    }
    Ok(PotentialReport {
        partition: partition.clone(),
        potential,
        normalized,
        n,
    })
}

/// Every non-increasing partition of `k` into exactly `parts` parts with its
/// potentials, in enumeration order.
pub fn scan_partitions(k: usize, parts: usize) -> Result<Vec<PotentialReport>> {
    if parts == 0 || parts > k {
        return Err(Error::Domain(format!(
            "cannot split k = {k} into {parts} positive parts"
        )));
    }
    let all: Vec<Partition> = enumerate_partitions(k, Some(parts), true).collect();
    Ok(all.par_iter().map(potential).collect())
}

/// Minimum of `objective` over non-increasing partitions of `k` into exactly
/// `parts` parts. Ties go to the lexicographically smallest partition.
pub fn best_partition(k: usize, parts: usize, objective: Objective) -> Result<PotentialReport> {
    let scan = scan_partitions(k, parts)?;
    Ok(scan
        .into_iter()
        .min_by(|a, b| {
            a.value(objective)
                .cmp(&b.value(objective))
                .then_with(|| a.partition.cmp(&b.partition))
        })
        .expect("at least one partition exists"))
}

/// Writes `partition|U|Ustar` rows, one per line, after a header.
pub fn write_scan_table(out: &mut impl Write, reports: &[PotentialReport]) -> Result<()> {
    writeln!(out, "partition|U|Ustar")?;
    for r in reports {
        writeln!(out, "{}|{}|{}", r.partition, r.potential, r.normalized)?;
    }
    Ok(())
}

/// Uniformly random member of `𝔹_n^{t_0..t_g}` with leading sign `+1`.
pub fn sample_member(partition: &Partition, n: usize, rng: &mut impl Rng) -> Result<SkewHalf> {
    let k = partition.order();
    check_length(k, n)?;
    let l = n / 2;
    let prefix = partition.prefix(1);
    let half = BinarySequence::from_fn(l + 1, |i| if i < k { prefix[i] == 1 } else { rng.gen() })?;
    SkewHalf::new(half)
}
