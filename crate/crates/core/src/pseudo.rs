//! Pseudo-skew-symmetric (PSS) sequences: even-length sequences that become
//! skew-symmetric after dropping their first or last element.
//!
//! The energy of a PSS neighbour of a skew-symmetric `B` (one element
//! appended, prepended or dropped) follows from `E(B)` and the even-index
//! sidelobes of `B` in O(n):
//!
//! * append `b`: `E(B||b) = E(B) + n + 2·b·δ`, `δ = Σ_{u even, u <= n-2} Ĉ_u(B)·b_{u+1}`
//! * drop last: `E = E(B) + n - 3 + 2·b_{n-1}·δ`, `δ = Σ_{u even, 2 <= u <= n-2} -Ĉ_u(B)·b_u`
//!
//! Prepend and drop-first are the same formulas on the reversed sequence,
//! which is skew-symmetric with identical sidelobes.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sequence::{BinarySequence, Correlation, MeritFactor};
use crate::skew::{is_skew_symmetric, SkewHalf, SkewSearchState};
use crate::symmetry::{apply_eta, EtaOp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeDirection {
    AppendLast,
    DropLast,
    PrependFirst,
    DropFirst,
}

/// Which end a truncation removes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum End {
    First,
    Last,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PssProbe {
    pub direction: ProbeDirection,
    /// Added element for append/prepend probes.
    pub sign: Option<i8>,
    pub delta_sum: i64,
    pub energy: i64,
    pub length: usize,
    pub merit_factor: MeritFactor,
}

impl PssProbe {
    /// Materialises the probed sequence from its skew-symmetric source.
    pub fn build(&self, source: &BinarySequence) -> BinarySequence {
        let op = match (self.direction, self.sign) {
            (ProbeDirection::AppendLast, Some(1)) => EtaOp::AppendPlus,
            (ProbeDirection::AppendLast, _) => EtaOp::AppendMinus,
            (ProbeDirection::PrependFirst, Some(1)) => EtaOp::PrependPlus,
            (ProbeDirection::PrependFirst, _) => EtaOp::PrependMinus,
            (ProbeDirection::DropLast, _) => EtaOp::StripLast,
            (ProbeDirection::DropFirst, _) => EtaOp::StripFirst,
        };
        apply_eta(op, source).expect("source long enough for the probe")
    }
}

pub fn is_pseudo_skew_symmetric(seq: &BinarySequence) -> bool {
    let n = seq.len();
    if n < 2 || n % 2 == 1 {
        return false;
    }
    let drop_first = BinarySequence::from_fn(n - 1, |i| seq.bit(i + 1)).unwrap();
    let drop_last = BinarySequence::from_fn(n - 1, |i| seq.bit(i)).unwrap();
    is_skew_symmetric(&drop_first) || is_skew_symmetric(&drop_last)
}

/// View of a skew-symmetric sequence used by the probe formulas:
/// signs, the even-index Ĉ entries and the energy.
struct SkewView<'a> {
    signs: &'a [i8],
    even: &'a [i64],
    energy: i64,
}

impl SkewView<'_> {
    fn n(&self) -> usize {
        self.signs.len()
    }

    // element `i` of the sequence, or of its reversal
    fn at(&self, i: usize, reversed: bool) -> i64 {
        let n = self.n();
        (if reversed {
            self.signs[n - 1 - i]
        } else {
            self.signs[i]
        }) as i64
    }

    fn extend(&self, b: i8, reversed: bool) -> PssProbe {
        let n = self.n();
        let delta: i64 = self
            .even
            .iter()
            .enumerate()
            .map(|(m, &c)| c * self.at(2 * m + 1, reversed))
            .sum();
        let energy = self.energy + n as i64 + 2 * b as i64 * delta;
        PssProbe {
            direction: if reversed {
                ProbeDirection::PrependFirst
            } else {
                ProbeDirection::AppendLast
            },
            sign: Some(b),
            delta_sum: delta,
            energy,
            length: n + 1,
            merit_factor: MeritFactor::new(n + 1, energy),
        }
    }

    fn truncate(&self, reversed: bool) -> PssProbe {
        let n = self.n();
        let delta: i64 = self
            .even
            .iter()
            .enumerate()
            .skip(1)
            .map(|(m, &c)| -c * self.at(2 * m, reversed))
            .sum();
        let last = self.at(n - 1, reversed);
        let energy = self.energy + n as i64 - 3 + 2 * last * delta;
        PssProbe {
            direction: if reversed {
                ProbeDirection::DropFirst
            } else {
                ProbeDirection::DropLast
            },
            sign: None,
            delta_sum: delta,
            energy,
            length: n - 1,
            merit_factor: MeritFactor::new(n - 1, energy),
        }
    }
}

fn with_view<T>(seq: &BinarySequence, f: impl FnOnce(&SkewView<'_>) -> T) -> Result<T> {
    if !is_skew_symmetric(seq) {
        return Err(Error::Domain("probe source must be skew-symmetric".into()));
    }
    if seq.len() < 3 {
        return Err(Error::Size("probe source needs n >= 3".into()));
    }
    let n = seq.len();
    let signs = seq.to_signs();
    let even: Vec<i64> = (0..n / 2)
        .map(|m| seq.correlation_at(n - 1 - 2 * m))
        .collect();
    let energy = even.iter().map(|c| c * c).sum();
    Ok(f(&SkewView {
        signs: &signs,
        even: &even,
        energy,
    }))
}

fn state_view(state: &SkewSearchState) -> SkewView<'_> {
    SkewView {
        signs: state.signs(),
        even: state.even_sidelobes(),
        energy: state.energy(),
    }
}

fn check_sign(b: i8) -> Result<()> {
    if b != 1 && b != -1 {
        return Err(Error::Domain(format!(
            "appended element must be ±1, got {b}"
        )));
    }
    Ok(())
}

/// Energy of `B||b` for skew-symmetric `B`.
pub fn append_delta(seq: &BinarySequence, b: i8) -> Result<PssProbe> {
    check_sign(b)?;
    with_view(seq, |v| v.extend(b, false))
}

/// Energy of `a||B` for skew-symmetric `B`.
pub fn prepend_delta(seq: &BinarySequence, a: i8) -> Result<PssProbe> {
    check_sign(a)?;
    with_view(seq, |v| v.extend(a, true))
}

/// Energy of `B` with its first or last element removed.
pub fn truncate_delta(seq: &BinarySequence, end: End) -> Result<PssProbe> {
    with_view(seq, |v| v.truncate(end == End::First))
}

/// The same probes evaluated from a search state in O(n).
pub fn append_probe(state: &SkewSearchState, b: i8) -> PssProbe {
    state_view(state).extend(b, false)
}

pub fn prepend_probe(state: &SkewSearchState, a: i8) -> PssProbe {
    state_view(state).extend(a, true)
}

pub fn truncate_probe(state: &SkewSearchState, end: End) -> PssProbe {
    state_view(state).truncate(end == End::First)
}

/// True iff every even-index entry of the Ĉ-ordered sidelobe array is ±1.
pub fn pss_sidelobe_check(seq: &BinarySequence) -> Result<bool> {
    if !is_pseudo_skew_symmetric(seq) {
        return Err(Error::Domain(
            "sequence is not pseudo-skew-symmetric".into(),
        ));
    }
    let lobes = seq.sidelobes()?;
    Ok(lobes.values().iter().step_by(2).all(|c| c.abs() == 1))
}

/// Skew-symmetric core of a PSS sequence and which end was added.
pub fn skew_core(seq: &BinarySequence) -> Option<(SkewHalf, End)> {
    let n = seq.len();
    if n < 2 || n % 2 == 1 {
        return None;
    }
    let tail = BinarySequence::from_fn(n - 1, |i| seq.bit(i)).unwrap();
    if let Ok(h) = SkewHalf::from_sequence(&tail) {
        return Some((h, End::Last));
    }
    let head = BinarySequence::from_fn(n - 1, |i| seq.bit(i + 1)).unwrap();
    SkewHalf::from_sequence(&head).ok().map(|h| (h, End::First))
}
