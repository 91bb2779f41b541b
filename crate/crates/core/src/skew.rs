//! Skew-symmetric sequences: compact half representation, validation,
//! paired-flip moves with O(n) energy updates, and small-n exhaustive optima.
//!
//! A skew-symmetric sequence has odd length `n = 2l + 1` and satisfies
//! `b_{l+i} = (-1)^i b_{l-i}` for `i in 1..=l`. All odd-shift correlations
//! vanish, so only the `l` even shifts carry energy.
//!
//! Flip index `q < l` negates the symmetric pair `(b_q, b_{n-1-q})`, which keeps
//! the sequence skew-symmetric; `q = l` negates the centre element alone.
//! For an even shift `u`, only products touching exactly one flipped position
//! change sign, so the new `C_u` is `C_u - 2 * s_u` where `s_u` sums at most
//! four such products.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sequence::{BinarySequence, Correlation, MeritFactor, SidelobeArray};
use crate::symmetry::canonical_form;

/// The first `l + 1` elements of a skew-symmetric sequence of length `2l + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewHalf {
    half: BinarySequence,
}

impl SkewHalf {
    pub fn new(half: BinarySequence) -> Result<Self> {
        if half.is_empty() {
            return Err(Error::Size("skew half needs at least one element".into()));
        }
        Ok(Self { half })
    }

    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        Self::new(BinarySequence::from_signs(signs)?)
    }

    /// Takes the half of a skew-symmetric sequence.
    pub fn from_sequence(seq: &BinarySequence) -> Result<Self> {
        if !is_skew_symmetric(seq) {
            return Err(Error::Domain("sequence is not skew-symmetric".into()));
        }
        let l = seq.len() / 2;
        Self::new(BinarySequence::from_fn(l + 1, |i| seq.bit(i))?)
    }

    pub fn l(&self) -> usize {
        self.half.len() - 1
    }

    pub fn full_len(&self) -> usize {
        2 * self.l() + 1
    }

    pub fn bits(&self) -> &BinarySequence {
        &self.half
    }

    pub fn expand(&self) -> BinarySequence {
        expand(self)
    }

    pub(crate) fn toggle(&mut self, q: usize) {
        self.half = self.half.flipped(q);
    }
}

pub fn expand(half: &SkewHalf) -> BinarySequence {
    let l = half.l();
    BinarySequence::from_fn(2 * l + 1, |j| {
        if j <= l {
            half.half.bit(j)
        } else {
            let i = j - l;
            // b_{l+i} = (-1)^i b_{l-i}
            half.half.bit(l - i) ^ (i % 2 == 1)
        }
    })
    .expect("length bounded by the half")
}

pub fn is_skew_symmetric(seq: &BinarySequence) -> bool {
    let n = seq.len();
    if n.is_multiple_of(2) {
        return false;
    }
    let l = n / 2;
    (1..=l).all(|i| seq.bit(l + i) == (seq.bit(l - i) ^ (i % 2 == 1)))
}

/// Mutable local-search state over a skew-symmetric sequence of length at
/// least 3. Only even-shift sidelobes are stored; odd ones are identically 0.
#[derive(Clone, Debug)]
pub struct SkewSearchState {
    half: SkewHalf,
    signs: Vec<i8>,
    // even[m] = Ĉ_{2m} = C_{n-1-2m}
    even: Vec<i64>,
    energy: i64,
    shadow_check: bool,
}

impl SkewSearchState {
    pub fn new(half: SkewHalf) -> Result<Self> {
        if half.l() == 0 {
            return Err(Error::Size("search state needs n >= 3".into()));
        }
        let seq = half.expand();
        let n = seq.len();
        let l = half.l();
        let even: Vec<i64> = (0..l).map(|m| seq.correlation_at(n - 1 - 2 * m)).collect();
        let energy = even.iter().map(|c| c * c).sum();
        Ok(Self {
            signs: seq.to_signs(),
            half,
            even,
            energy,
            shadow_check: false,
        })
    }

    /// Enables a full recompute after every flip in debug builds.
    pub fn with_shadow_check(mut self, on: bool) -> Self {
        self.shadow_check = on;
        self
    }

    pub fn n(&self) -> usize {
        self.signs.len()
    }

    pub fn l(&self) -> usize {
        self.half.l()
    }

    pub fn half(&self) -> &SkewHalf {
        &self.half
    }

    pub fn energy(&self) -> i64 {
        self.energy
    }

    pub fn merit_factor(&self) -> MeritFactor {
        MeritFactor::new(self.n(), self.energy)
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn sequence(&self) -> BinarySequence {
        BinarySequence::from_signs(&self.signs).expect("signs are ±1")
    }

    /// Even-index entries of the Ĉ-ordered sidelobe array: `Ĉ_0, Ĉ_2, …`.
    pub fn even_sidelobes(&self) -> &[i64] {
        &self.even
    }

    /// Full Ĉ-ordered sidelobe array with the zero odd entries filled in.
    pub fn sidelobes(&self) -> SidelobeArray {
        let n = self.n();
        let mut values = vec![0i64; n - 1];
        for (m, &c) in self.even.iter().enumerate() {
            values[2 * m] = c;
        }
        SidelobeArray::from_values(values)
    }

    fn check_index(&self, q: usize) -> Result<()> {
        if q > self.l() {
            return Err(Error::Range {
                index: q,
                min: 0,
                max: self.l(),
            });
        }
        Ok(())
    }

    #[inline]
    fn prod(&self, i: usize, j: usize) -> i64 {
        (self.signs[i] * self.signs[j]) as i64
    }

    /// Sum of the products at shift `u` that touch exactly one flipped
    /// position when flipping index `q`.
    #[inline]
    fn touched(&self, q: usize, u: usize) -> i64 {
        let n = self.n();
        let l = self.l();
        let mut s = 0;
        if q == l {
            if l + u < n {
                s += self.prod(l, l + u);
            }
            if u <= l {
                s += self.prod(l - u, l);
            }
            return s;
        }
        let p = n - 1 - q;
        let both = u == p - q;
        if q + u < n && !both {
            s += self.prod(q, q + u);
        }
        if u <= q {
            s += self.prod(q - u, q);
        }
        if p + u < n {
            s += self.prod(p, p + u);
        }
        if u <= p && !both {
            s += self.prod(p - u, p);
        }
        s
    }

    /// `E(B^q) - E(B)` in O(n) time without modifying the state.
    pub fn flip_delta(&self, q: usize) -> Result<i64> {
        self.check_index(q)?;
        Ok(self.flip_delta_unchecked(q))
    }

    pub(crate) fn flip_delta_unchecked(&self, q: usize) -> i64 {
        let n = self.n();
        let mut delta = 0;
        for (m, &c) in self.even.iter().enumerate() {
            let u = n - 1 - 2 * m;
            let nc = c - 2 * self.touched(q, u);
            delta += nc * nc - c * c;
        }
        delta
    }

    /// Applies flip `q` in place, updating sidelobes and energy in O(n).
    /// Returns the energy delta.
    pub fn apply_flip(&mut self, q: usize) -> Result<i64> {
        self.check_index(q)?;
        let n = self.n();
        let mut delta = 0;
        for m in 0..self.even.len() {
            let u = n - 1 - 2 * m;
            let c = self.even[m];
            let nc = c - 2 * self.touched(q, u);
            delta += nc * nc - c * c;
            self.even[m] = nc;
        }
        self.energy += delta;
        self.signs[q] = -self.signs[q];
        if q < self.l() {
            let p = n - 1 - q;
            self.signs[p] = -self.signs[p];
        }
        self.half.toggle(q);
        #[cfg(debug_assertions)]
        if self.shadow_check {
            let fresh = SkewSearchState::new(self.half.clone()).expect("valid half");
            assert_eq!(fresh.even, self.even, "sidelobes drifted after flip {q}");
            assert_eq!(fresh.energy, self.energy, "energy drifted after flip {q}");
        }
        Ok(delta)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExhaustiveResult {
    pub n: usize,
    pub skew_only: bool,
    pub energy: i64,
    pub merit_factor: MeritFactor,
    /// Canonical representative of the first optimum found.
    #[serde(skip)]
    pub witness: BinarySequence,
    pub evaluated: u64,
}

pub const MAX_SKEW_EXHAUSTIVE: usize = 31;
pub const MAX_FULL_EXHAUSTIVE: usize = 24;

/// Global minimum-energy sequence of length `n`, either over all binary
/// sequences or over the skew-symmetric ones only.
///
/// The full search fixes `b_0 = b_1 = +1`: complement and the complement of
/// the odd positions map any sequence onto that quarter without changing its
/// energy. Both searches walk a Gray code with O(n) incremental updates.
pub fn exhaustive_best(n: usize, skew_only: bool) -> Result<ExhaustiveResult> {
    if skew_only {
        if n.is_multiple_of(2) || !(3..=MAX_SKEW_EXHAUSTIVE).contains(&n) {
            return Err(Error::Domain(format!(
                "skew-symmetric exhaustive search needs odd 3 <= n <= {MAX_SKEW_EXHAUSTIVE}, got {n}"
            )));
        }
        Ok(exhaustive_skew(n))
    } else {
        if !(2..=MAX_FULL_EXHAUSTIVE).contains(&n) {
            return Err(Error::Domain(format!(
                "full exhaustive search needs 2 <= n <= {MAX_FULL_EXHAUSTIVE}, got {n} \
                 (2^n sequences; use the skew-symmetric search or the solver for longer lengths)"
            )));
        }
        Ok(exhaustive_full(n))
    }
}

fn exhaustive_skew(n: usize) -> ExhaustiveResult {
    let l = n / 2;
    let start = SkewHalf::new(BinarySequence::from_fn(l + 1, |_| true).unwrap()).unwrap();
    let mut state = SkewSearchState::new(start).unwrap();
    let mut best_energy = state.energy();
    let mut best = state.sequence();
    let free = l as u32; // b_0 fixed by complement symmetry
    let total = 1u64 << free;
    for step in 1..total {
        let q = 1 + step.trailing_zeros() as usize;
        state.apply_flip(q).unwrap();
        if state.energy() < best_energy {
            best_energy = state.energy();
            best = state.sequence();
        }
    }
    finish(n, true, best_energy, &best, total)
}

fn exhaustive_full(n: usize) -> ExhaustiveResult {
    let mut signs = vec![1i8; n];
    let mut corr: Vec<i64> = (0..n).map(|u| (n - u) as i64).collect();
    let energy = |corr: &[i64]| corr[1..].iter().map(|c| c * c).sum::<i64>();
    let mut best_energy = energy(&corr);
    let mut best = signs.clone();
    let free = n.saturating_sub(2) as u32;
    let total = 1u64 << free;
    for step in 1..total {
        let i = 2 + step.trailing_zeros() as usize;
        for u in 1..n {
            let mut s = 0i64;
            if i + u < n {
                s += (signs[i] * signs[i + u]) as i64;
            }
            if u <= i {
                s += (signs[i - u] * signs[i]) as i64;
            }
            corr[u] -= 2 * s;
        }
        signs[i] = -signs[i];
        let e = energy(&corr);
        if e < best_energy {
            best_energy = e;
            best.copy_from_slice(&signs);
        }
    }
    let best = BinarySequence::from_signs(&best).unwrap();
    finish(n, false, best_energy, &best, total)
}

fn finish(
    n: usize,
    skew_only: bool,
    energy: i64,
    best: &BinarySequence,
    evaluated: u64,
) -> ExhaustiveResult {
    ExhaustiveResult {
        n,
        skew_only,
        energy,
        merit_factor: MeritFactor::new(n, energy),
        witness: canonical_form(best),
        evaluated,
    }
}
