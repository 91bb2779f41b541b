//! Plain scalar reference implementations. Nothing here calls into the
//! library's correlation, symmetry or partition code.
#![allow(dead_code)]

use merit_core::BinarySequence;
use rand::Rng;

pub fn corr(s: &[i64], u: usize) -> i64 {
    (0..s.len() - u).map(|j| s[j] * s[j + u]).sum()
}

pub fn energy(s: &[i64]) -> i64 {
    (1..s.len()).map(|u| corr(s, u).pow(2)).sum()
}

/// `[C_{n-1}, ..., C_1]`
pub fn sidelobes(s: &[i64]) -> Vec<i64> {
    (1..s.len()).rev().map(|u| corr(s, u)).collect()
}

pub fn signs(seq: &BinarySequence) -> Vec<i64> {
    seq.iter().map(i64::from).collect()
}

pub fn to_seq(s: &[i64]) -> BinarySequence {
    let v: Vec<i8> = s.iter().map(|&x| x as i8).collect();
    BinarySequence::from_signs(&v).unwrap()
}

pub fn random_signs(rng: &mut impl Rng, n: usize) -> Vec<i64> {
    (0..n).map(|_| if rng.gen() { 1 } else { -1 }).collect()
}

/// `b_{l+i} = (-1)^i b_{l-i}` filled in from `b_0..=b_l`.
pub fn skew_from_half(half: &[i64]) -> Vec<i64> {
    let l = half.len() - 1;
    let mut s = vec![0; 2 * l + 1];
    s[..=l].copy_from_slice(half);
    for i in 1..=l {
        s[l + i] = if i % 2 == 0 { s[l - i] } else { -s[l - i] };
    }
    s
}

pub fn is_skew(s: &[i64]) -> bool {
    if s.len().is_multiple_of(2) {
        return false;
    }
    let l = s.len() / 2;
    (1..=l).all(|i| s[l + i] == if i % 2 == 0 { s[l - i] } else { -s[l - i] })
}

pub fn random_skew(rng: &mut impl Rng, n: usize) -> Vec<i64> {
    skew_from_half(&random_signs(rng, n / 2 + 1))
}

pub fn reverse(s: &[i64]) -> Vec<i64> {
    s.iter().rev().copied().collect()
}

pub fn complement(s: &[i64]) -> Vec<i64> {
    s.iter().map(|x| -x).collect()
}

/// Negates every second element, starting at index 0.
pub fn alternate(s: &[i64]) -> Vec<i64> {
    s.iter()
        .enumerate()
        .map(|(i, x)| if i % 2 == 0 { -x } else { *x })
        .collect()
}

/// Closure of `s` under reverse, complement and alternate.
pub fn orbit_closure(s: &[i64]) -> Vec<Vec<i64>> {
    let mut seen = vec![s.to_vec()];
    let mut i = 0;
    while i < seen.len() {
        let cur = seen[i].clone();
        for img in [reverse(&cur), complement(&cur), alternate(&cur)] {
            if !seen.contains(&img) {
                seen.push(img);
            }
        }
        i += 1;
    }
    seen
}

/// Number of integer partitions of `k` into exactly `m` parts.
pub fn partition_count(k: usize, m: usize) -> u64 {
    // p(k, m) = p(k - 1, m - 1) + p(k - m, m)
    let mut t = vec![vec![0u64; m + 1]; k + 1];
    t[0][0] = 1;
    for i in 1..=k {
        for j in 1..=m.min(i) {
            t[i][j] = t[i - 1][j - 1] + t[i - j][j];
        }
    }
    t[k][m]
}

/// The ternary sequence behind a partition's potential: runs starting at
/// `+1`, a zero middle, and the suffix the skew rule forces on it.
pub fn partition_ternary(parts: &[u32], n: usize) -> Vec<i64> {
    let mut s = vec![0i64; n];
    let mut pos = 0;
    let mut sign = 1;
    for &p in parts {
        for _ in 0..p {
            s[pos] = sign;
            pos += 1;
        }
        sign = -sign;
    }
    let l = n / 2;
    for i in 0..pos {
        // b_{n-1-i} = b_{l + (l - i)} = (-1)^{l-i} b_i
        let j = l - i;
        s[n - 1 - i] = if j.is_multiple_of(2) { s[i] } else { -s[i] };
    }
    s
}

/// `(U, U*)`: `U*` halves `C_1..C_k` before squaring.
pub fn potentials(parts: &[u32], n: usize) -> (i64, i64) {
    let k: usize = parts.iter().map(|&p| p as usize).sum();
    let s = partition_ternary(parts, n);
    let mut u = 0;
    let mut u_star_x4 = 0;
    for shift in 1..n {
        let c = corr(&s, shift);
        u += c * c;
        u_star_x4 += if shift <= k { c * c } else { 4 * c * c };
    }
    assert_eq!(u_star_x4 % 4, 0, "halved potential is not an integer");
    (u, u_star_x4 / 4)
}
