//! Published record sequences: hex codec, the bundled record table, and a
//! verifier that recomputes every claimed merit factor from scratch.
//!
//! Hex strings carry the sequence as a big-endian integer with leading zero
//! digits omitted. The integer is left-padded with zero bits to exactly `n`
//! bits; the most significant bit is `b_0`, a set bit is `+1`.

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pseudo::is_pseudo_skew_symmetric;
use crate::sequence::{merit_factor, BinarySequence, MeritFactor};
use crate::skew::is_skew_symmetric;
use crate::symmetry::parse_class_expression;

/// Relative tolerance between recomputed and printed merit factors.
pub const RELATIVE_TOLERANCE: f64 = 1e-9;

pub const DATASET_HEADER: &str = "n|class|hex|old_mf|new_mf|source_table";

/// Record tables shipped with the crate.
pub const BUNDLED_DATASET: &str = include_str!("../data/records.psv");

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecordEntry {
    pub n: usize,
    /// ASCII class expression, e.g. `Omega_173 . n4`.
    pub class_expr: String,
    pub hex: String,
    pub old_mf: Option<f64>,
    pub new_mf: f64,
    pub source_table: String,
}

fn digit_value(c: char) -> Option<u8> {
    c.to_digit(16).map(|d| d as u8)
}

/// Decodes a hex string (whitespace ignored) into a length-`n` sequence.
pub fn decode_hex(hex: &str, n: usize) -> Result<BinarySequence> {
    let mut digits = Vec::with_capacity(hex.len());
    for (pos, c) in hex.char_indices() {
        if c.is_whitespace() {
            continue;
        }
        let d = digit_value(c)
            .ok_or_else(|| Error::parse(pos, format!("invalid hex character {c:?}")))?;
        digits.push(d);
    }
    if digits.is_empty() {
        return Err(Error::parse(0, "empty hex string"));
    }
    let significant = match digits.iter().position(|&d| d != 0) {
        None => 0,
        Some(first) => {
            let lead = 8 - digits[first].leading_zeros() as usize;
            4 * (digits.len() - first - 1) + lead
        }
    };
    if significant > n {
        return Err(Error::Length {
            needed: significant,
            n,
        });
    }
    let m = digits.len();
    BinarySequence::from_fn(n, |i| {
        // bit of weight 2^(n-1-i)
        let w = n - 1 - i;
        let d = w / 4;
        d < m && digits[m - 1 - d] >> (w % 4) & 1 == 1
    })
}

/// Lower-case hex without leading zero digits; `"0"` for the zero integer.
pub fn encode_hex(seq: &BinarySequence) -> String {
    let n = seq.len();
    let ndigits = n.div_ceil(4).max(1);
    let mut out = String::with_capacity(ndigits);
    for d in (0..ndigits).rev() {
        let mut v = 0u32;
        for b in 0..4 {
            let w = 4 * d + b;
            if w < n && seq.bit(n - 1 - w) {
                v |= 1 << b;
            }
        }
        if v != 0 || !out.is_empty() {
            out.push(char::from_digit(v, 16).unwrap());
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn parse_dataset(text: &str) -> Result<Vec<RecordEntry>> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == DATASET_HEADER => {}
        Some((i, h)) => {
            return Err(Error::parse(
                i + 1,
                format!("expected header {DATASET_HEADER:?}, found {h:?}"),
            ))
        }
        None => return Err(Error::parse(0, "empty dataset")),
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        let lineno = i + 1;
        let bad = |msg: String| Error::parse(lineno, msg);
        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        if fields.len() != 6 {
            return Err(bad(format!("expected 6 fields, found {}", fields.len())));
        }
        let n = fields[0]
            .parse::<usize>()
            .map_err(|_| bad(format!("bad length {:?}", fields[0])))?;
        let old_mf = match fields[3] {
            "-" => None,
            s => Some(
                s.parse::<f64>()
                    .map_err(|_| bad(format!("bad old_mf {s:?}")))?,
            ),
        };
        let new_mf = fields[4]
            .parse::<f64>()
            .ok()
            .filter(|v| *v > 0.0)
            .ok_or_else(|| bad(format!("bad new_mf {:?}", fields[4])))?;
        out.push(RecordEntry {
            n,
            class_expr: fields[1].to_string(),
            hex: fields[2].split_whitespace().collect(),
            old_mf,
            new_mf,
            source_table: fields[5].to_string(),
        });
    }
    Ok(out)
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<Vec<RecordEntry>> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_dataset(&text)
}

pub fn bundled_dataset() -> Vec<RecordEntry> {
    parse_dataset(BUNDLED_DATASET).expect("bundled dataset is well-formed")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceClass {
    SkewSymmetric,
    PseudoSkewSymmetric,
    Neither,
}

pub fn classify(seq: &BinarySequence) -> SequenceClass {
    if is_skew_symmetric(seq) {
        SequenceClass::SkewSymmetric
    } else if is_pseudo_skew_symmetric(seq) {
        SequenceClass::PseudoSkewSymmetric
    } else {
        SequenceClass::Neither
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub n: usize,
    pub class_expr: String,
    pub source_table: String,
    pub claimed_mf: f64,
    /// Decoded integer fits in `n` bits.
    pub length_ok: bool,
    pub energy: Option<i64>,
    pub computed_mf: Option<f64>,
    pub exact_mf: Option<MeritFactor>,
    pub relative_error: Option<f64>,
    pub matched: bool,
    pub class: Option<SequenceClass>,
    /// Set when the class expression does not parse; informational only.
    pub class_expr_error: Option<String>,
    pub error: Option<String>,
}

pub fn verify_entry(entry: &RecordEntry) -> VerificationReport {
    match decode_hex(&entry.hex, entry.n) {
        Ok(seq) => verify_sequence(entry, &seq),
        Err(e) => VerificationReport {
            length_ok: !matches!(e, Error::Length { .. }),
            error: Some(e.to_string()),
            ..empty_report(entry)
        },
    }
}

/// Verifies an explicitly supplied sequence against the entry's claim.
pub fn verify_sequence(entry: &RecordEntry, seq: &BinarySequence) -> VerificationReport {
    let mut report = empty_report(entry);
    report.length_ok = seq.len() == entry.n;
    match merit_factor(seq) {
        Ok(mf) => {
            let value = mf.value();
            let rel = (value - entry.new_mf).abs() / entry.new_mf;
            report.energy = Some(mf.energy() as i64);
            report.computed_mf = Some(value);
            report.exact_mf = Some(mf);
            report.relative_error = Some(rel);
            report.matched = report.length_ok && rel <= RELATIVE_TOLERANCE;
            report.class = Some(classify(seq));
        }
        Err(e) => report.error = Some(e.to_string()),
    }
    report
}

fn empty_report(entry: &RecordEntry) -> VerificationReport {
    VerificationReport {
        n: entry.n,
        class_expr: entry.class_expr.clone(),
        source_table: entry.source_table.clone(),
        claimed_mf: entry.new_mf,
        length_ok: false,
        energy: None,
        computed_mf: None,
        exact_mf: None,
        relative_error: None,
        matched: false,
        class: None,
        class_expr_error: parse_class_expression(&entry.class_expr)
            .err()
            .map(|e| e.to_string()),
        error: None,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationSummary {
    pub total: usize,
    pub matched: usize,
    pub match_rate: f64,
    /// Lengths of the rows that did not match.
    pub failed: Vec<usize>,
}

pub fn summarize(reports: &[VerificationReport]) -> VerificationSummary {
    let matched = reports.iter().filter(|r| r.matched).count();
    VerificationSummary {
        total: reports.len(),
        matched,
        match_rate: if reports.is_empty() {
            0.0
        } else {
            matched as f64 / reports.len() as f64
        },
        failed: reports.iter().filter(|r| !r.matched).map(|r| r.n).collect(),
    }
}

/// Verifies every row; failing rows are reported, never fatal.
pub fn verify_all(entries: &[RecordEntry]) -> (Vec<VerificationReport>, VerificationSummary) {
    let reports: Vec<_> = entries.par_iter().map(verify_entry).collect();
    let summary = summarize(&reports);
    (reports, summary)
}
