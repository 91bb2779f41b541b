//! `merit`: evaluate, search, verify and tabulate low-autocorrelation binary
//! sequences. Output is one JSON record per line unless `--human` is given.

mod emit;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, SystemTime};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use merit_core::records::{self, classify, load_dataset, verify_all, RecordEntry};
use merit_core::skew::exhaustive_best;
use merit_core::solver::{self, BestEntry, NeighborPolicy, Slot, SolverConfig, Termination};
use merit_core::{
    best_partition, decode_hex, encode_hex, merit_factor, scan_partitions, BinarySequence,
    Correlation, Error, MeritFactor, Objective, Partition,
};

use emit::Emitter;

const EXIT_VERIFY_BUDGET: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_IO: u8 = 4;
const EXIT_INTERRUPT: u8 = 130;

#[derive(Parser)]
#[command(
    name = "merit",
    version,
    about = "Low-autocorrelation binary sequence toolkit"
)]
struct Cli {
    /// Render key=value lines and tables instead of JSON records.
    #[arg(long, global = true)]
    human: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Energy, merit factor and class of one sequence.
    Eval(EvalArgs),
    /// Restart local search over a partition-restricted skew-symmetric class.
    Search(SearchArgs),
    /// Exact optimum by enumeration (small n only).
    Exhaustive(ExhaustiveArgs),
    /// Recompute the merit factor of every dataset row.
    Verify(VerifyArgs),
    /// Best partition of k into a fixed number of parts by potential.
    Potentials(PotentialArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// Sequence as +/- characters or whitespace/comma separated ±1 values.
    #[arg(allow_hyphen_values = true, conflicts_with = "hex")]
    signs: Option<String>,
    /// Hex encoding (most significant bit is b_0, set bit is +1).
    #[arg(long, requires = "n")]
    hex: Option<String>,
    /// Length used to left-pad the hex value.
    #[arg(long)]
    n: Option<usize>,
    /// Include the sidelobe array C_{n-1}, ..., C_1.
    #[arg(long)]
    sidelobes: bool,
}

#[derive(Args)]
struct SearchArgs {
    /// Odd target length.
    #[arg(long)]
    n: usize,
    /// Fixed prefix run lengths, e.g. 18,11,6,4.
    #[arg(long, value_parser = parse_partition)]
    partition: Partition,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Inner threshold: flips per restart.
    #[arg(long, default_value_t = 100_000)]
    ti: u64,
    /// Outer threshold: restarts.
    #[arg(long, default_value_t = 1_000)]
    to: u64,
    /// Activator: merit factor at which n-1 and n+1 probing starts.
    #[arg(long, default_value_t = 0.0)]
    ta: f64,
    #[arg(long, env = "MERIT_WORKERS", default_value_t = 1)]
    workers: usize,
    /// Wall-clock limit, e.g. 5s or 2m.
    #[arg(long, env = "MERIT_TIME_LIMIT", value_parser = parse_duration)]
    budget: Option<Duration>,
    #[arg(long, value_enum, default_value_t = PolicyArg::SelfAvoidingBest)]
    policy: PolicyArg,
    /// Omit timestamps and elapsed times so identical runs print identical bytes.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    StrictDescent,
    SelfAvoidingBest,
}

impl From<PolicyArg> for NeighborPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::StrictDescent => NeighborPolicy::StrictDescent,
            PolicyArg::SelfAvoidingBest => NeighborPolicy::SelfAvoidingBest,
        }
    }
}

#[derive(Args)]
struct ExhaustiveArgs {
    #[arg(long)]
    n: usize,
    /// Enumerate skew-symmetric sequences only (odd n).
    #[arg(long)]
    skew_only: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Dataset file; the bundled table is used when omitted.
    #[arg(long)]
    dataset: Option<PathBuf>,
    /// Only rows with these lengths, e.g. 573,1009.
    #[arg(long, value_delimiter = ',')]
    rows: Vec<usize>,
    /// Largest tolerated fraction of failing rows.
    #[arg(long, default_value_t = 0.05)]
    max_failure_rate: f64,
}

#[derive(Args)]
struct PotentialArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    parts: usize,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::U)]
    objective: ObjectiveArg,
    /// Also print every scanned partition.
    #[arg(long)]
    table: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    #[value(name = "U", alias = "u")]
    U,
    #[value(name = "Ustar", alias = "ustar", alias = "U*")]
    Ustar,
}

fn parse_partition(s: &str) -> Result<Partition, String> {
    Partition::parse(s).map_err(|e| e.to_string())
}

fn parse_duration(s: &str) -> Result<Duration, String> {
    if let Ok(secs) = s.trim().parse::<f64>() {
        if secs.is_finite() && secs >= 0.0 {
            return Ok(Duration::from_secs_f64(secs));
        }
    }
    humantime::parse_duration(s.trim()).map_err(|e| e.to_string())
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::Config(_) => EXIT_USAGE,
            Error::Io(_) => EXIT_IO,
            Error::Range { .. } | Error::Size(_) | Error::Domain(_) | Error::Length { .. } => {
                EXIT_DOMAIN
            }
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let out = Emitter::new(cli.human);
    let result = match cli.command {
        Command::Eval(a) => cmd_eval(&out, a),
        Command::Search(a) => cmd_search(&out, a),
        Command::Exhaustive(a) => cmd_exhaustive(&out, a),
        Command::Verify(a) => cmd_verify(&out, a),
        Command::Potentials(a) => cmd_potentials(&out, a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("merit: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn mf_fields(mf: &MeritFactor) -> Value {
    json!({
        "energy": mf.energy(),
        "mf": mf.value(),
        "mf_exact": format!("{}/{}", mf.numerator, mf.denominator),
    })
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Value::Object(a), Value::Object(b)) = (&mut a, b) {
        a.extend(b);
    }
    a
}

fn cmd_eval(out: &Emitter, a: EvalArgs) -> CmdResult {
    let seq = match (&a.hex, &a.signs) {
        (Some(hex), _) => decode_hex(hex, a.n.expect("clap enforces --n with --hex"))?,
        (None, Some(s)) => BinarySequence::parse_signs(s)?,
        (None, None) => {
            return Err(Failure {
                code: EXIT_USAGE,
                message: "give a sequence as +/- text or --hex with --n".into(),
            })
        }
    };
    let mf = merit_factor(&seq)?;
    let mut fields = merge(
        json!({ "n": seq.len() }),
        merge(
            mf_fields(&mf),
            json!({ "class": classify(&seq), "hex": encode_hex(&seq) }),
        ),
    );
    if a.sidelobes {
        fields = merge(fields, json!({ "sidelobes": seq.sidelobes()?.values() }));
    }
    out.record("eval", fields);
    Ok(0)
}

fn now_rfc3339() -> String {
    humantime::format_rfc3339_millis(SystemTime::now()).to_string()
}

fn slot_length(slot: Slot, n: usize) -> usize {
    match slot {
        Slot::Shorter => n - 1,
        Slot::Target => n,
        Slot::Longer => n + 1,
    }
}

fn entry_fields(slot: Slot, n: usize, e: &BestEntry, timing: bool) -> Value {
    let mut v = merge(
        json!({
            "slot": slot,
            "length": slot_length(slot, n),
        }),
        merge(
            mf_fields(&e.merit_factor),
            json!({
                "hex": encode_hex(&e.sequence),
                "restarts": e.restarts,
                "worker": e.worker,
            }),
        ),
    );
    if timing {
        v = merge(v, json!({ "elapsed_ms": e.elapsed.as_millis() as u64 }));
    }
    v
}

fn cmd_search(out: &Emitter, a: SearchArgs) -> CmdResult {
    let config = SolverConfig {
        n: a.n,
        partition: a.partition,
        inner_threshold: a.ti,
        outer_threshold: a.to,
        activator: a.ta,
        workers: a.workers,
        seed: a.seed,
        time_limit: a.budget,
        policy: a.policy.into(),
    };
    config.validate()?;
    let timing = !a.no_timing;

    let stop = Arc::new(AtomicBool::new(false));
    {
        let stop = Arc::clone(&stop);
        ctrlc::set_handler(move || stop.store(true, Ordering::SeqCst)).map_err(|e| Failure {
            code: EXIT_IO,
            message: format!("cannot install signal handler: {e}"),
        })?;
    }

    let mut start = json!({
        "config": config,
        "rng": solver::RNG_DESCRIPTION,
        "build": concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION")),
    });
    if timing {
        start = merge(start, json!({ "started_at": now_rfc3339() }));
    }
    out.record("start", start);

    let n = config.n;
    let report = solver::run_with(&config, &stop, |imp| {
        out.record("improvement", entry_fields(imp.slot, n, imp.entry, timing));
    })?;

    for slot in [Slot::Shorter, Slot::Target, Slot::Longer] {
        if let Some(e) = report.best.get(slot) {
            out.record("best", entry_fields(slot, n, e, timing));
        }
    }
    let mut end = json!({
        "termination": report.termination,
        "seed": config.seed,
        "workers": report.workers,
    });
    if timing {
        end = merge(
            end,
            json!({
                "elapsed_ms": report.elapsed.as_millis() as u64,
                "finished_at": now_rfc3339(),
            }),
        );
    }
    out.record("end", end);
    Ok(if report.termination == Termination::Stopped {
        EXIT_INTERRUPT
    } else {
        0
    })
}

fn cmd_exhaustive(out: &Emitter, a: ExhaustiveArgs) -> CmdResult {
    let r = exhaustive_best(a.n, a.skew_only)?;
    out.record(
        "exhaustive",
        merge(
            json!({ "n": r.n, "skew_only": r.skew_only }),
            merge(
                mf_fields(&r.merit_factor),
                json!({
                    "evaluated": r.evaluated,
                    "hex": encode_hex(&r.witness),
                    "witness": r.witness.to_string(),
                }),
            ),
        ),
    );
    Ok(0)
}

fn cmd_verify(out: &Emitter, a: VerifyArgs) -> CmdResult {
    let mut entries: Vec<RecordEntry> = match &a.dataset {
        Some(path) => load_dataset(path)?,
        None => records::bundled_dataset(),
    };
    if !a.rows.is_empty() {
        entries.retain(|e| a.rows.contains(&e.n));
        let missing: Vec<_> = a
            .rows
            .iter()
            .filter(|n| !entries.iter().any(|e| e.n == **n))
            .collect();
        if !missing.is_empty() {
            return Err(Error::Domain(format!("no dataset row for n in {missing:?}")).into());
        }
    }
    let (reports, summary) = verify_all(&entries);
    if out.human() {
        out.line("n|table|claimed|computed|exact|class|match");
    }
    for r in &reports {
        if out.human() {
            out.line(&format!(
                "{}|{}|{}|{}|{}|{}|{}",
                r.n,
                r.source_table,
                r.claimed_mf,
                r.computed_mf.map_or("-".into(), |v| v.to_string()),
                r.exact_mf
                    .map_or("-".into(), |m| format!("{}/{}", m.numerator, m.denominator)),
                r.class
                    .map_or("-".into(), |c| json!(c).as_str().unwrap_or("").to_string()),
                if r.matched { "yes" } else { "NO" },
            ));
        } else {
            out.record("row", serde_json::to_value(r).expect("report serialises"));
        }
    }
    let failure_rate = 1.0 - summary.match_rate;
    let within = summary.total > 0 && failure_rate <= a.max_failure_rate;
    out.record(
        "summary",
        merge(
            serde_json::to_value(&summary).expect("summary serialises"),
            json!({ "max_failure_rate": a.max_failure_rate, "within_budget": within }),
        ),
    );
    Ok(if within { 0 } else { EXIT_VERIFY_BUDGET })
}

fn cmd_potentials(out: &Emitter, a: PotentialArgs) -> CmdResult {
    let objective = match a.objective {
        ObjectiveArg::U => Objective::Potential,
        ObjectiveArg::Ustar => Objective::Normalized,
    };
    if a.table {
        let scan = scan_partitions(a.k, a.parts)?;
        if out.human() {
            out.line("partition|U|Ustar");
            for r in &scan {
                out.line(&format!("{}|{}|{}", r.partition, r.potential, r.normalized));
            }
        } else {
            for r in &scan {
                out.record(
                    "partition",
                    json!({
                        "partition": r.partition.to_string(),
                        "U": r.potential,
                        "Ustar": r.normalized,
                    }),
                );
            }
        }
    }
    let best = best_partition(a.k, a.parts, objective)?;
    out.record(
        "potential",
        json!({
            "k": a.k,
            "parts": a.parts,
            "objective": match objective {
                Objective::Potential => "U",
                Objective::Normalized => "Ustar",
            },
            "partition": best.partition.to_string(),
            "value": best.value(objective),
            "U": best.potential,
            "Ustar": best.normalized,
            "n": best.n,
        }),
    );
    Ok(0)
}
