//! Binary and ternary sequences with exact aperiodic autocorrelation,
//! sidelobe arrays, energy and merit factor.
//!
//! A [`BinarySequence`] is stored one bit per element (bit set for `+1`) and
//! correlations are evaluated a word at a time: for a shift `u` the number of
//! sign disagreements between `b_j` and `b_{j+u}` is a popcount of the XOR of
//! the sequence with itself shifted by `u`, and
//! `C_u = (n - u) - 2 * disagreements`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard cap on sequence length. For `n <= 10^6` every energy fits an `i64`.
pub const MAX_LEN: usize = 1_000_000;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinarySequence {
    len: usize,
    // bits past `len` in the last word are always zero
    words: Vec<u64>,
}

impl BinarySequence {
    pub fn from_fn(len: usize, mut plus: impl FnMut(usize) -> bool) -> Result<Self> {
        check_len(len)?;
        let mut words = vec![0u64; len.div_ceil(64)];
        for i in 0..len {
            if plus(i) {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        Ok(Self { len, words })
    }

    /// Builds a sequence from `±1` values.
    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        if let Some(pos) = signs.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::Domain(format!(
                "element {pos} is {}, expected -1 or +1",
                signs[pos]
            )));
        }
        Self::from_fn(signs.len(), |i| signs[i] == 1)
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        Self::from_fn(bits.len(), |i| bits[i])
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Packed representation, bit `i % 64` of word `i / 64` is element `i`.
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn bit(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn get(&self, i: usize) -> i8 {
        if self.bit(i) {
            1
        } else {
            -1
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = i8> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_signs(&self) -> Vec<i8> {
        self.iter().collect()
    }

    /// Copy with element `i` negated.
    pub fn flipped(&self, i: usize) -> Self {
        let mut out = self.clone();
        out.words[i / 64] ^= 1 << (i % 64);
        out
    }

    /// Parses `±1` text: either a compact run of `+`/`-` characters
    /// (`"++-+"`) or tokens `1`, `+1`, `-1`, `+`, `-` separated by whitespace
    /// or commas. Errors carry the byte offset of the offending token.
    pub fn parse_signs(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Err(Error::parse(0, "empty sequence"));
        }
        let compact = trimmed.chars().all(|c| c == '+' || c == '-');
        let mut signs = Vec::new();
        if compact {
            signs.extend(trimmed.chars().map(|c| if c == '+' { 1 } else { -1 }));
        } else {
            let base = text.len() - text.trim_start().len();
            let mut offset = base;
            for piece in trimmed.split_inclusive(|c: char| c.is_whitespace() || c == ',') {
                let token = piece.trim_end_matches(|c: char| c.is_whitespace() || c == ',');
                if !token.is_empty() {
                    let value = match token {
                        "1" | "+1" | "+" => 1,
                        "-1" | "-" => -1,
                        other => {
                            let bad = other.find(|c: char| !"+-1".contains(c)).unwrap_or(0);
                            return Err(Error::parse(
                                offset + bad,
                                format!("unexpected token {other:?}, expected +1 or -1"),
                            ));
                        }
                    };
                    signs.push(value);
                }
                offset += piece.len();
            }
        }
        Self::from_signs(&signs)
    }

    #[inline]
    fn bits_from(&self, start: usize) -> u64 {
        let w = start / 64;
        let s = start % 64;
        let lo = self.words.get(w).copied().unwrap_or(0) >> s;
        if s == 0 {
            lo
        } else {
            lo | self.words.get(w + 1).copied().unwrap_or(0) << (64 - s)
        }
    }
}

fn check_len(len: usize) -> Result<()> {
    if len > MAX_LEN {
        return Err(Error::Size(format!(
            "sequence length {len} exceeds the cap of {MAX_LEN}"
        )));
    }
    Ok(())
}

impl fmt::Debug for BinarySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinarySequence({self})")
    }
}

impl fmt::Display for BinarySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.iter() {
            f.write_str(if s == 1 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

/// A sequence over `{-1, 0, +1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TernarySequence {
    elements: Vec<i8>,
}

impl TernarySequence {
    pub fn new(elements: Vec<i8>) -> Result<Self> {
        if let Some(pos) = elements.iter().position(|s| !(-1..=1).contains(s)) {
            return Err(Error::Domain(format!(
                "element {pos} is {}, expected -1, 0 or +1",
                elements[pos]
            )));
        }
        check_len(elements.len())?;
        Ok(Self { elements })
    }

    pub fn elements(&self) -> &[i8] {
        &self.elements
    }
}

impl From<&BinarySequence> for TernarySequence {
    fn from(seq: &BinarySequence) -> Self {
        Self {
            elements: seq.to_signs(),
        }
    }
}

/// Sidelobes in reversed order: `values[i] = Ĉ_i = C_{n-1-i}` for
/// `i in 0..n-1`. The mainlobe `C_0` is not stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SidelobeArray {
    values: Vec<i64>,
}

impl SidelobeArray {
    pub fn from_values(values: Vec<i64>) -> Self {
        Self { values }
    }

    /// Length of the source sequence.
    pub fn source_len(&self) -> usize {
        self.values.len() + 1
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn get(&self, i: usize) -> i64 {
        self.values[i]
    }

    /// `C_u` for `1 <= u <= n-1`.
    pub fn shift(&self, u: usize) -> i64 {
        self.values[self.values.len() - u]
    }

    pub fn energy(&self) -> i64 {
        self.values.iter().map(|v| v * v).sum()
    }
}

/// Exact aperiodic autocorrelation over a sequence.
pub trait Correlation {
    fn seq_len(&self) -> usize;

    /// `C_u` without range checking; `u < seq_len()`.
    fn correlation_at(&self, u: usize) -> i64;

    fn autocorrelation(&self, u: usize) -> Result<i64> {
        let n = self.seq_len();
        if u >= n {
            return Err(Error::Range {
                index: u,
                min: 0,
                max: n.saturating_sub(1),
            });
        }
        Ok(self.correlation_at(u))
    }

    fn sidelobes(&self) -> Result<SidelobeArray> {
        let n = need_two(self.seq_len())?;
        Ok(SidelobeArray {
            values: (0..n - 1).map(|i| self.correlation_at(n - 1 - i)).collect(),
        })
    }

    fn energy(&self) -> Result<i64> {
        let n = need_two(self.seq_len())?;
        Ok((1..n)
            .map(|u| {
                let c = self.correlation_at(u);
                c * c
            })
            .sum())
    }
}

fn need_two(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::Size(format!("need at least 2 elements, got {n}")));
    }
    Ok(n)
}

impl Correlation for BinarySequence {
    fn seq_len(&self) -> usize {
        self.len
    }

    fn correlation_at(&self, u: usize) -> i64 {
        let m = self.len - u;
        let full = m / 64;
        let mut disagree = 0u32;
        for w in 0..full {
            disagree += (self.words[w] ^ self.bits_from(u + 64 * w)).count_ones();
        }
        let rem = m % 64;
        if rem > 0 {
            let mask = (1u64 << rem) - 1;
            disagree += ((self.words[full] ^ self.bits_from(u + 64 * full)) & mask).count_ones();
        }
        m as i64 - 2 * disagree as i64
    }
}

impl Correlation for TernarySequence {
    fn seq_len(&self) -> usize {
        self.elements.len()
    }

    fn correlation_at(&self, u: usize) -> i64 {
        self.elements
            .iter()
            .zip(&self.elements[u..])
            .map(|(&a, &b)| (a * b) as i64)
            .sum()
    }
}

pub fn autocorrelation(seq: &impl Correlation, u: usize) -> Result<i64> {
    seq.autocorrelation(u)
}

pub fn sidelobes(seq: &impl Correlation) -> Result<SidelobeArray> {
    seq.sidelobes()
}

pub fn energy(seq: &impl Correlation) -> Result<i64> {
    seq.energy()
}

pub fn merit_factor(seq: &BinarySequence) -> Result<MeritFactor> {
    let e = seq.energy()?;
    Ok(MeritFactor::new(seq.len(), e))
}

/// Merit factor `n² / (2E)` held as the exact pair `(n², 2E)`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MeritFactor {
    pub numerator: u64,
    pub denominator: u64,
}

impl MeritFactor {
    pub fn new(n: usize, energy: i64) -> Self {
        assert!(energy > 0, "energy must be positive, got {energy}");
        Self {
            numerator: (n as u64) * (n as u64),
            denominator: 2 * energy as u64,
        }
    }

    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    pub fn energy(&self) -> u64 {
        self.denominator / 2
    }
}

impl PartialEq for MeritFactor {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for MeritFactor {}

impl PartialOrd for MeritFactor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MeritFactor {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.numerator as u128 * other.denominator as u128;
        let rhs = other.numerator as u128 * self.denominator as u128;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for MeritFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}
