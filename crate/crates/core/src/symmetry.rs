//! Energy-preserving symmetries and the structural edit operators used to
//! describe how record sequences were obtained.
//!
//! The symmetry group is generated by reversal, complement and alternating
//! complement (negation of the even-indexed positions). Every element is one
//! of the eight combinations of those three flags.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::BinarySequence;

/// One element of the order-8 symmetry group. Applied as reverse, then
/// complement, then alternating complement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct DeltaOp {
    pub reverse: bool,
    pub complement: bool,
    pub alternate: bool,
}

impl DeltaOp {
    pub const IDENTITY: DeltaOp = DeltaOp::new(false, false, false);
    pub const REVERSE: DeltaOp = DeltaOp::new(true, false, false);
    pub const COMPLEMENT: DeltaOp = DeltaOp::new(false, true, false);
    pub const ALTERNATE: DeltaOp = DeltaOp::new(false, false, true);

    pub const fn new(reverse: bool, complement: bool, alternate: bool) -> Self {
        Self {
            reverse,
            complement,
            alternate,
        }
    }

    pub fn all() -> [DeltaOp; 8] {
        let mut out = [DeltaOp::IDENTITY; 8];
        for (i, op) in out.iter_mut().enumerate() {
            *op = DeltaOp::new(i & 1 != 0, i & 2 != 0, i & 4 != 0);
        }
        out
    }
}

pub fn apply_delta(op: DeltaOp, seq: &BinarySequence) -> BinarySequence {
    let n = seq.len();
    BinarySequence::from_fn(n, |i| {
        let src = if op.reverse { n - 1 - i } else { i };
        let mut bit = seq.bit(src);
        if op.complement {
            bit = !bit;
        }
        if op.alternate && i % 2 == 0 {
            bit = !bit;
        }
        bit
    })
    .expect("same length as input")
}

/// Lexicographically smallest image under the group, with `-1 < +1`
/// compared position by position.
pub fn canonical_form(seq: &BinarySequence) -> BinarySequence {
    DeltaOp::all()
        .iter()
        .map(|&op| apply_delta(op, seq))
        .min_by(|a, b| a.iter().cmp(b.iter()))
        .expect("group is non-empty")
}

/// Distinct images of `seq` under the group.
pub fn orbit(seq: &BinarySequence) -> Vec<BinarySequence> {
    let mut images: Vec<BinarySequence> = Vec::with_capacity(8);
    for op in DeltaOp::all() {
        let img = apply_delta(op, seq);
        if !images.contains(&img) {
            images.push(img);
        }
    }
    images
}

/// Structural edits: strip both ends, append, strip one end, prepend.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EtaOp {
    /// `a||L||b -> L`
    StripBoth,
    /// `L -> L||1`
    AppendPlus,
    /// `L -> L||-1`
    AppendMinus,
    /// `a||L -> L`
    StripFirst,
    /// `L||b -> L`
    StripLast,
    /// `L -> 1||L`
    PrependPlus,
    /// `L -> -1||L`
    PrependMinus,
}

impl EtaOp {
    pub const ALL: [EtaOp; 7] = [
        EtaOp::StripBoth,
        EtaOp::AppendPlus,
        EtaOp::AppendMinus,
        EtaOp::StripFirst,
        EtaOp::StripLast,
        EtaOp::PrependPlus,
        EtaOp::PrependMinus,
    ];

    pub fn index(self) -> usize {
        EtaOp::ALL.iter().position(|&e| e == self).unwrap()
    }

    pub fn from_index(i: usize) -> Option<Self> {
        EtaOp::ALL.get(i).copied()
    }

    /// Change in length caused by the operator.
    pub fn length_change(self) -> isize {
        match self {
            EtaOp::StripBoth => -2,
            EtaOp::StripFirst | EtaOp::StripLast => -1,
            _ => 1,
        }
    }
}

impl fmt::Display for EtaOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.index())
    }
}

pub fn apply_eta(op: EtaOp, seq: &BinarySequence) -> Result<BinarySequence> {
    let n = seq.len();
    let min = match op {
        EtaOp::StripBoth => 3,
        EtaOp::StripFirst | EtaOp::StripLast => 2,
        _ => 0,
    };
    if n < min {
        return Err(Error::Size(format!(
            "operator {op} needs at least {min} elements, got {n}"
        )));
    }
    let signs = seq.to_signs();
    let out: Vec<i8> = match op {
        EtaOp::StripBoth => signs[1..n - 1].to_vec(),
        EtaOp::AppendPlus => [&signs[..], &[1]].concat(),
        EtaOp::AppendMinus => [&signs[..], &[-1]].concat(),
        EtaOp::StripFirst => signs[1..].to_vec(),
        EtaOp::StripLast => signs[..n - 1].to_vec(),
        EtaOp::PrependPlus => [&[1], &signs[..]].concat(),
        EtaOp::PrependMinus => [&[-1], &signs[..]].concat(),
    };
    BinarySequence::from_signs(&out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BaseKind {
    /// Best sequence known from the literature.
    Omega,
    /// Sequence found by search in a partition class.
    Partition,
}

/// The base of a class expression, e.g. `Omega_173` or `B_233^15,11,7`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassBase {
    pub kind: BaseKind,
    /// `None` when the table writes the symbolic length `n`.
    pub length: Option<usize>,
    pub partition: Vec<u32>,
}

/// A parsed class expression: `base ('.' 'n'[0-6])*`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassExpr {
    pub base: ClassBase,
    pub ops: Vec<EtaOp>,
}

impl ClassExpr {
    pub fn parse(text: &str) -> Result<Self> {
        parse_class_expression(text)
    }

    /// Length implied by the base length and the operator chain.
    pub fn implied_length(&self) -> Option<usize> {
        let base = self.base.length? as isize;
        let total = base + self.ops.iter().map(|op| op.length_change()).sum::<isize>();
        usize::try_from(total).ok()
    }
}

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.base.kind {
            BaseKind::Omega => "Omega",
            BaseKind::Partition => "B",
        };
        match self.base.length {
            Some(n) => write!(f, "{name}_{n}")?,
            None => write!(f, "{name}_n")?,
        }
        if !self.base.partition.is_empty() {
            let parts: Vec<String> = self.base.partition.iter().map(|p| p.to_string()).collect();
            write!(f, "^{}", parts.join(","))?;
        }
        for op in &self.ops {
            write!(f, " . {op}")?;
        }
        Ok(())
    }
}

pub fn parse_class_expression(text: &str) -> Result<ClassExpr> {
    let mut tokens = Vec::new();
    let mut offset = 0;
    for piece in text.split('.') {
        let lead = piece.len() - piece.trim_start().len();
        tokens.push((offset + lead, piece.trim()));
        offset += piece.len() + 1;
    }
    let (pos, base_tok) = tokens[0];
    if base_tok.is_empty() {
        return Err(Error::parse(pos, "empty class expression"));
    }
    let base = parse_base(pos, base_tok)?;
    let mut ops = Vec::new();
    for &(pos, tok) in &tokens[1..] {
        let op = tok
            .strip_prefix('n')
            .filter(|d| d.len() == 1)
            .and_then(|d| d.parse::<usize>().ok())
            .and_then(EtaOp::from_index)
            .ok_or_else(|| Error::parse(pos, format!("expected operator n0..n6, found {tok:?}")))?;
        ops.push(op);
    }
    Ok(ClassExpr { base, ops })
}

fn parse_base(pos: usize, tok: &str) -> Result<ClassBase> {
    let bad = |msg: &str| Error::parse(pos, format!("{msg} in base {tok:?}"));
    let (name, rest) = tok.split_once('_').ok_or_else(|| bad("missing '_'"))?;
    let kind = match name {
        "Omega" => BaseKind::Omega,
        "B" => BaseKind::Partition,
        _ => return Err(bad("unknown class name")),
    };
    let (len_part, parts_part) = match rest.split_once('^') {
        Some((l, p)) => (l, Some(p)),
        None => (rest, None),
    };
    let length = match len_part {
        "n" => None,
        digits => Some(digits.parse::<usize>().map_err(|_| bad("bad length"))?),
    };
    let partition = match parts_part {
        None => Vec::new(),
        Some(p) => p
            .split(',')
            .map(|t| t.parse::<u32>().ok().filter(|&v| v > 0))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| bad("bad partition"))?,
    };
    Ok(ClassBase {
        kind,
        length,
        partition,
    })
}
