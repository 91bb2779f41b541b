//! Low-autocorrelation binary sequences: exact energy and merit factor,
//! symmetry classes, skew-symmetric and pseudo-skew-symmetric sequences,
//! partition-restricted search spaces and a restart local search.
//!
//! Sequences are `±1` valued and bit-packed (a set bit is `+1`). Energies are
//! exact `i64` values and merit factors are kept as the exact ratio
//! `n² / (2E)`.

pub mod error;
pub mod partitions;
pub mod pseudo;
pub mod records;
pub mod sequence;
pub mod skew;
pub mod solver;
pub mod symmetry;

pub use error::{Error, Result};
pub use partitions::{
    best_partition, enumerate_partitions, evaluation_length, potential, potential_at,
    project_partition, sample_member, scan_partitions, symmetry_class_count, Objective, Partition,
    PotentialReport, RestrictionClass,
};
pub use pseudo::{
    append_delta, is_pseudo_skew_symmetric, prepend_delta, pss_sidelobe_check, truncate_delta, End,
    PssProbe,
};
pub use records::{bundled_dataset, decode_hex, encode_hex, verify_all, RecordEntry};
pub use sequence::{
    autocorrelation, energy, merit_factor, sidelobes, BinarySequence, Correlation, MeritFactor,
    SidelobeArray, TernarySequence,
};
pub use skew::{exhaustive_best, is_skew_symmetric, SkewHalf, SkewSearchState};
pub use solver::{NeighborPolicy, SolverConfig};
pub use symmetry::{
    apply_delta, apply_eta, canonical_form, orbit, parse_class_expression, ClassExpr, DeltaOp,
    EtaOp,
};
