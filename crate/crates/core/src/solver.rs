//! Restart-based local search over a partition-restricted skew-symmetric
//! class, probing the adjacent pseudo-skew-symmetric lengths `n ± 1`.
//!
//! Each restart samples a member of `𝔹_n^{t_0..t_g}`, clears the visited set
//! and walks single flips of the free half positions until no acceptable
//! unvisited neighbour exists or the inner step budget is spent. The run
//! ends after the outer restart budget, on timeout, or when the stop flag
//! is raised.
//!
//! Workers share nothing except the merged best triple, which is updated
//! under a mutex. Worker `w` draws from ChaCha8 seeded with the run seed on
//! stream `w`.

use std::collections::HashSet;
use std::hash::{BuildHasherDefault, Hasher};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::{sample_member, Partition};
use crate::pseudo::{append_probe, prepend_probe, truncate_probe, End, PssProbe};
use crate::sequence::{BinarySequence, MeritFactor};
use crate::skew::{SkewHalf, SkewSearchState};

/// Generator recorded in run metadata.
pub const RNG_DESCRIPTION: &str =
    "ChaCha8Rng (rand_chacha 0.3), seed_from_u64(seed), stream = worker id";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum NeighborPolicy {
    /// Only neighbours with strictly lower energy are acceptable.
    StrictDescent,
    /// The best unvisited neighbour is taken even if it is worse.
    #[default]
    SelfAvoidingBest,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolverConfig {
    pub n: usize,
    pub partition: Partition,
    pub inner_threshold: u64,
    pub outer_threshold: u64,
    /// Merit factor at which `n ± 1` probing switches on.
    pub activator: f64,
    pub workers: usize,
    pub seed: u64,
    pub time_limit: Option<Duration>,
    pub policy: NeighborPolicy,
}

impl SolverConfig {
    pub fn new(n: usize, partition: Partition) -> Self {
        Self {
            n,
            partition,
            inner_threshold: 100_000,
            outer_threshold: 1_000,
            activator: 0.0,
            workers: 1,
            seed: 0,
            time_limit: None,
            policy: NeighborPolicy::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.partition.order();
        let bad = |m: String| Err(Error::Config(m));
        if self.n.is_multiple_of(2) {
            return bad(format!("n must be odd, got {}", self.n));
        }
        if self.n < 2 * k + 1 {
            return bad(format!(
                "n = {} too short for partition {} (need n >= {})",
                self.n,
                self.partition,
                2 * k + 1
            ));
        }
        if self.n < 5 {
            return bad(format!("n must be at least 5, got {}", self.n));
        }
        if self.inner_threshold < 1 || self.outer_threshold < 1 {
            return bad("inner and outer thresholds must be at least 1".into());
        }
        if !self.activator.is_finite() || self.activator < 0.0 {
            return bad(format!(
                "activator must be a finite value >= 0, got {}",
                self.activator
            ));
        }
        if self.workers < 1 {
            return bad("need at least one worker".into());
        }
        Ok(())
    }
}

/// Passes pre-computed 64-bit digests straight through.
#[derive(Default, Clone, Copy)]
pub struct DigestHasher(u64);

impl Hasher for DigestHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = self.0.rotate_left(8) ^ b as u64;
        }
    }

    fn write_u64(&mut self, v: u64) {
        self.0 = v;
    }
}

pub type VisitedSet = HashSet<u64, BuildHasherDefault<DigestHasher>>;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a(mut h: u64, word: u64) -> u64 {
    for b in word.to_le_bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

/// FNV-1a over the half length (as a little-endian `u64`) followed by the
/// packed half words, optionally with bit `flip` toggled.
pub fn hash_half(half: &SkewHalf, flip: Option<usize>) -> u64 {
    let bits = half.bits();
    let mut h = fnv1a(FNV_OFFSET, bits.len() as u64);
    for (w, &word) in bits.words().iter().enumerate() {
        let word = match flip {
            Some(q) if q / 64 == w => word ^ (1 << (q % 64)),
            _ => word,
        };
        h = fnv1a(h, word);
    }
    h
}

pub fn hash_state(state: &SkewSearchState) -> u64 {
    hash_half(state.half(), None)
}

/// Index in `first_free..=l` of the lowest-energy neighbour whose hash is not
/// in `visited`; ties go to the smallest index. Under strict descent the
/// neighbour must also lower the energy.
pub fn pick_better_neighbor(
    state: &SkewSearchState,
    visited: &VisitedSet,
    policy: NeighborPolicy,
    first_free: usize,
) -> Option<usize> {
    let mut best: Option<(i64, usize)> = None;
    for q in first_free..=state.l() {
        if visited.contains(&hash_half(state.half(), Some(q))) {
            continue;
        }
        let d = state.flip_delta(q).expect("q within 0..=l");
        if policy == NeighborPolicy::StrictDescent && d >= 0 {
            continue;
        }
        if best.is_none_or(|(bd, _)| d < bd) {
            best = Some((d, q));
        }
    }
    best.map(|(_, q)| q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Slot {
    /// Pseudo-skew-symmetric, length `n - 1`.
    Shorter,
    /// Skew-symmetric, length `n`.
    Target,
    /// Pseudo-skew-symmetric, length `n + 1`.
    Longer,
}

#[derive(Clone, Debug)]
pub struct BestEntry {
    pub merit_factor: MeritFactor,
    pub sequence: BinarySequence,
    /// Time since the run started.
    pub elapsed: Duration,
    pub worker: usize,
    /// Restarts begun by the finding worker, including the current one.
    pub restarts: u64,
}

#[derive(Clone, Debug, Default)]
pub struct BestTriple {
    pub shorter: Option<BestEntry>,
    pub target: Option<BestEntry>,
    pub longer: Option<BestEntry>,
}

impl BestTriple {
    pub fn get(&self, slot: Slot) -> Option<&BestEntry> {
        match slot {
            Slot::Shorter => self.shorter.as_ref(),
            Slot::Target => self.target.as_ref(),
            Slot::Longer => self.longer.as_ref(),
        }
    }

    fn get_mut(&mut self, slot: Slot) -> &mut Option<BestEntry> {
        match slot {
            Slot::Shorter => &mut self.shorter,
            Slot::Target => &mut self.target,
            Slot::Longer => &mut self.longer,
        }
    }

    /// Keeps the better entry per slot.
    pub fn merge(&mut self, other: BestTriple) {
        for (slot, entry) in [
            (Slot::Shorter, other.shorter),
            (Slot::Target, other.target),
            (Slot::Longer, other.longer),
        ] {
            if let Some(e) = entry {
                let cur = self.get_mut(slot);
                if cur.as_ref().is_none_or(|c| e.merit_factor > c.merit_factor) {
                    *cur = Some(e);
                }
            }
        }
    }
}

/// Emitted whenever the merged best of a slot improves.
#[derive(Clone, Debug)]
pub struct Improvement<'a> {
    pub slot: Slot,
    pub entry: &'a BestEntry,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct WorkerStats {
    pub worker: usize,
    pub restarts: u64,
    pub flips: u64,
    pub probes: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    OuterThreshold,
    TimeLimit,
    Stopped,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub best: BestTriple,
    pub workers: Vec<WorkerStats>,
    pub elapsed: Duration,
    pub termination: Termination,
}

pub fn run(config: &SolverConfig) -> Result<RunReport> {
    run_with(config, &AtomicBool::new(false), |_| {})
}

/// Runs the search, calling `observer` (serialised under the shared lock)
/// on every improvement of the merged best triple.
pub fn run_with<F>(config: &SolverConfig, stop: &AtomicBool, observer: F) -> Result<RunReport>
where
    F: Fn(&Improvement<'_>) + Sync,
{
    config.validate()?;
    let start = Instant::now();
    let shared = Mutex::new(BestTriple::default());
    let outcomes: Vec<(WorkerStats, Termination)> = if config.workers == 1 {
        vec![Worker::new(config, 0, start, stop, &shared, &observer).run()]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..config.workers)
                .map(|w| {
                    let (shared, observer) = (&shared, &observer);
                    scope.spawn(move || Worker::new(config, w, start, stop, shared, observer).run())
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect()
        })
    };
    let termination = if outcomes.iter().any(|(_, t)| *t == Termination::Stopped) {
        Termination::Stopped
    } else if outcomes.iter().any(|(_, t)| *t == Termination::TimeLimit) {
        Termination::TimeLimit
    } else {
        Termination::OuterThreshold
    };
    Ok(RunReport {
        best: shared.into_inner().expect("lock not poisoned"),
        workers: outcomes.into_iter().map(|(s, _)| s).collect(),
        elapsed: start.elapsed(),
        termination,
    })
}

struct Worker<'a, F> {
    config: &'a SolverConfig,
    id: usize,
    start: Instant,
    stop: &'a AtomicBool,
    shared: &'a Mutex<BestTriple>,
    observer: &'a F,
    stats: WorkerStats,
    // worker-local best energies per slot, to avoid locking on every step
    local: [Option<MeritFactor>; 3],
}

fn slot_index(slot: Slot) -> usize {
    match slot {
        Slot::Shorter => 0,
        Slot::Target => 1,
        Slot::Longer => 2,
    }
}

impl<'a, F> Worker<'a, F>
where
    F: Fn(&Improvement<'_>) + Sync,
{
    fn new(
        config: &'a SolverConfig,
        id: usize,
        start: Instant,
        stop: &'a AtomicBool,
        shared: &'a Mutex<BestTriple>,
        observer: &'a F,
    ) -> Self {
        Self {
            config,
            id,
            start,
            stop,
            shared,
            observer,
            stats: WorkerStats {
                worker: id,
                ..Default::default()
            },
            local: [None; 3],
        }
    }

    fn halted(&self) -> Option<Termination> {
        if self.stop.load(Ordering::Relaxed) {
            return Some(Termination::Stopped);
        }
        match self.config.time_limit {
            Some(limit) if self.start.elapsed() >= limit => Some(Termination::TimeLimit),
            _ => None,
        }
    }

    fn run(mut self) -> (WorkerStats, Termination) {
        let cfg = self.config;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(self.id as u64);
        let first_free = cfg.partition.order();
        let mut visited = VisitedSet::default();
        let mut outer = 0u64;
        loop {
            if let Some(t) = self.halted() {
                return (self.stats, t);
            }
            visited.clear();
            let mut inner = 0u64;
            self.stats.restarts += 1;
            let half = sample_member(&cfg.partition, cfg.n, &mut rng).expect("validated config");
            let mut state = SkewSearchState::new(half).expect("validated config");
            visited.insert(hash_state(&state));
            self.record(&state);
            loop {
                if let Some(t) = self.halted() {
                    return (self.stats, t);
                }
                let Some(q) = pick_better_neighbor(&state, &visited, cfg.policy, first_free) else {
                    outer += 1;
                    break;
                };
                state.apply_flip(q).expect("neighbour index in range");
                inner += 1;
                self.stats.flips += 1;
                visited.insert(hash_state(&state));
                self.record(&state);
                if inner > cfg.inner_threshold {
                    outer += 1;
                    break;
                }
            }
            if outer > cfg.outer_threshold {
                return (self.stats, Termination::OuterThreshold);
            }
        }
    }

    fn record(&mut self, state: &SkewSearchState) {
        let mf = state.merit_factor();
        self.offer(Slot::Target, mf, || state.sequence());
        if mf.value() >= self.config.activator {
            let source = || state.sequence();
            let longer = vec![
                append_probe(state, 1),
                append_probe(state, -1),
                prepend_probe(state, 1),
                prepend_probe(state, -1),
            ];
            let shorter = vec![
                truncate_probe(state, End::Last),
                truncate_probe(state, End::First),
            ];
            self.stats.probes += 6;
            for (slot, probes) in [(Slot::Longer, longer), (Slot::Shorter, shorter)] {
                let mut best: PssProbe = probes[0];
                for p in &probes[1..] {
                    if p.merit_factor > best.merit_factor {
                        best = *p;
                    }
                }
                self.offer(slot, best.merit_factor, || best.build(&source()));
            }
        }
    }

    fn offer(&mut self, slot: Slot, mf: MeritFactor, build: impl FnOnce() -> BinarySequence) {
        let i = slot_index(slot);
        if self.local[i].is_some_and(|cur| mf <= cur) {
            return;
        }
        self.local[i] = Some(mf);
        let mut shared = self.shared.lock().expect("lock not poisoned");
        let cur = shared.get_mut(slot);
        if cur.as_ref().is_some_and(|c| mf <= c.merit_factor) {
            return;
        }
        *cur = Some(BestEntry {
            merit_factor: mf,
            sequence: build(),
            elapsed: self.start.elapsed(),
            worker: self.id,
            restarts: self.stats.restarts,
        });
        (self.observer)(&Improvement {
            slot,
            entry: cur.as_ref().unwrap(),
        });
    }
}
