//! `wvg` — enumerate canonical weighted voting games, convert between
//! game representations, compute Banzhaf power, and solve the power-index
//! design problem as an anytime search.
//!
//! Exit codes: 0 success, 1 domain failure (e.g. the input game is not
//! weighted), 2 usage error, 130 interrupted.

mod convert;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::fs;
use std::io::{BufWriter, Read, Write};
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Duration;

use wvg_core::banzhaf::banzhaf;
use wvg_core::encoding::{game_from_json, parse_target_text, GameLine, SummaryLine};
use wvg_core::enumeration::{BfCheckpoint, BreadthFirst, Order};
use wvg_core::game::{rational_to_string, GameRep, Tag};
use wvg_core::solver::{
    sample_canonical_target, solve_pvgd_with, Budget, SolveError, TargetIndex,
};
use wvg_core::{experiments, WeightVector};

static INTERRUPTED: AtomicBool = AtomicBool::new(false);

extern "C" fn on_sigint(_: libc::c_int) {
    INTERRUPTED.store(true, Ordering::SeqCst);
}

fn install_sigint_handler() {
    let handler: extern "C" fn(libc::c_int) = on_sigint;
    unsafe {
        libc::signal(libc::SIGINT, handler as usize as libc::sighandler_t);
    }
}

const EXIT_OK: u8 = 0;
const EXIT_DOMAIN: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INTERRUPTED: u8 = 130;

#[derive(Parser)]
#[command(
    name = "wvg",
    version,
    about = "Weighted voting games: enumeration, synthesis, power indices, and design"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stream every canonical weighted voting game on n players as JSONL.
    Enumerate(EnumerateArgs),
    /// Count canonical weighted voting games per number of MWCs.
    Count(CountArgs),
    /// Convert a game file between representation languages.
    Convert(ConvertArgs),
    /// Compute the raw and normalized Banzhaf index of a game.
    Banzhaf(BanzhafArgs),
    /// Anytime search for the game whose Banzhaf index is closest to a target.
    Solve(SolveArgs),
    /// Sample uniform canonical target indices from the unit simplex.
    Sample(SampleArgs),
    /// Batch experiment runners (timings, histograms, errors, convergence).
    Experiments(ExperimentsArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OrderArg {
    #[value(name = "breadth-first", alias = "bf")]
    BreadthFirst,
    #[value(name = "depth-first", alias = "df")]
    DepthFirst,
}

impl From<OrderArg> for Order {
    fn from(value: OrderArg) -> Order {
        match value {
            OrderArg::BreadthFirst => Order::BreadthFirst,
            OrderArg::DepthFirst => Order::DepthFirst,
        }
    }
}

/// Enumeration past this player count needs --extended; past the extended
/// cap it is refused outright.
const PLAIN_CAP: u8 = 7;
const EXTENDED_CAP: u8 = 9;

#[derive(Args)]
struct EnumerateArgs {
    /// Number of players (1..=7, or up to 9 with --extended).
    #[arg(short, long)]
    n: u8,
    #[arg(long, value_enum, default_value = "breadth-first")]
    order: OrderArg,
    /// Output file (stdout if omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Allow the long n=8 and n=9 runs.
    #[arg(long)]
    extended: bool,
    /// Directory for per-rank checkpoint files (breadth-first only).
    #[arg(long)]
    checkpoint_dir: Option<PathBuf>,
    /// Resume from the latest checkpoint in --checkpoint-dir, emitting
    /// only the remaining ranks.
    #[arg(long, requires = "checkpoint_dir")]
    resume: bool,
}

#[derive(Args)]
struct CountArgs {
    #[arg(short, long)]
    n: u8,
    #[arg(long, value_enum, default_value = "breadth-first")]
    order: OrderArg,
    #[arg(long)]
    extended: bool,
}

#[derive(Args)]
struct ConvertArgs {
    /// Input game JSON file ("-" for stdin).
    #[arg(short, long)]
    input: PathBuf,
    /// Target language: wmin, lmax, roof, ceil, or weights.
    #[arg(long)]
    to: String,
    /// Permit conversions whose output can be exponentially larger than
    /// the input (and the routes with unknown complexity).
    #[arg(long)]
    allow_exponential: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BanzhafArgs {
    /// Weighted form shorthand "q;w1,w2,..." (rationals like 1/2 allowed).
    #[arg(long, conflicts_with = "input")]
    weights: Option<String>,
    /// Input game JSON file.
    #[arg(short, long)]
    input: Option<PathBuf>,
    /// Emit the full record as JSON instead of the normalized list.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SolveArgs {
    /// Target vector file (JSON array or comma/whitespace separated).
    #[arg(long, conflicts_with = "target_inline")]
    target: Option<PathBuf>,
    /// Target vector given directly, e.g. "0.6,0.2,0.2".
    #[arg(long)]
    target_inline: Option<String>,
    /// Sort a non-canonical target (the permutation is reported).
    #[arg(long)]
    sort_target: bool,
    #[arg(long, value_enum, default_value = "breadth-first")]
    order: OrderArg,
    /// Stop after scoring this many games.
    #[arg(long)]
    games_budget: Option<u64>,
    /// Stop after this much wall-clock time.
    #[arg(long)]
    time_budget_secs: Option<f64>,
    /// Where to write the final report JSON (stdout if omitted).
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(short, long)]
    n: u8,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// How many targets to print (seeds seed, seed+1, ...).
    #[arg(long, default_value_t = 1)]
    count: u64,
}

#[derive(Args)]
struct ExperimentsArgs {
    /// Which experiment to run: 1 timings, 2 rank histogram, 3 optimal
    /// error over random targets, 4 bounded convergence traces.
    #[arg(long)]
    exp: u8,
    #[arg(long, default_value_t = 1)]
    n_min: u8,
    /// Largest player count (experiment 4 runs at exactly this n).
    #[arg(short, long)]
    n_max: u8,
    #[arg(long, default_value_t = 100)]
    instances: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Games budget per instance (required for experiment 4).
    #[arg(long)]
    games_budget: Option<u64>,
    #[arg(long, value_enum, default_value = "breadth-first")]
    order: OrderArg,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    install_sigint_handler();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::Count(args) => cmd_count(args),
        Command::Convert(args) => cmd_convert(args),
        Command::Banzhaf(args) => cmd_banzhaf(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Sample(args) => cmd_sample(args),
        Command::Experiments(args) => cmd_experiments(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_DOMAIN)
        }
    }
}

fn usage(message: impl AsRef<str>) -> Result<u8> {
    eprintln!("error: {}", message.as_ref());
    Ok(EXIT_USAGE)
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

fn check_enumeration_cap(n: u8, extended: bool) -> Option<String> {
    if n == 0 {
        return Some("n must be at least 1".to_string());
    }
    if n > EXTENDED_CAP {
        return Some(format!("enumeration is capped at n = {EXTENDED_CAP}"));
    }
    if n > PLAIN_CAP && !extended {
        return Some(format!(
            "n = {n} enumerates millions of games; pass --extended to confirm"
        ));
    }
    None
}

fn checkpoint_path(dir: &Path, rank: usize) -> PathBuf {
    dir.join(format!("checkpoint_rank_{rank:04}.json"))
}

fn latest_checkpoint(dir: &Path) -> Result<Option<BfCheckpoint>> {
    let mut best: Option<(usize, PathBuf)> = None;
    for entry in fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let path = entry?.path();
        let name = match path.file_name().and_then(|s| s.to_str()) {
            Some(name) => name,
            None => continue,
        };
        if let Some(rank) = name
            .strip_prefix("checkpoint_rank_")
            .and_then(|s| s.strip_suffix(".json"))
            .and_then(|s| s.parse::<usize>().ok())
        {
            if best.as_ref().is_none_or(|(r, _)| rank > *r) {
                best = Some((rank, path));
            }
        }
    }
    match best {
        None => Ok(None),
        Some((_, path)) => {
            let text = fs::read_to_string(&path)
                .with_context(|| format!("reading {}", path.display()))?;
            Ok(Some(serde_json::from_str(&text).with_context(|| {
                format!("parsing checkpoint {}", path.display())
            })?))
        }
    }
}

fn write_checkpoint(dir: &Path, ck: &BfCheckpoint) -> Result<()> {
    fs::create_dir_all(dir)?;
    let path = checkpoint_path(dir, ck.rank);
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, serde_json::to_vec(ck)?)?;
    fs::rename(&tmp, &path)?;
    Ok(())
}

fn cmd_enumerate(args: EnumerateArgs) -> Result<u8> {
    if let Some(message) = check_enumeration_cap(args.n, args.extended) {
        return usage(message);
    }
    if args.checkpoint_dir.is_some() && args.order != OrderArg::BreadthFirst {
        return usage("checkpoints are only available in breadth-first order");
    }
    let mut out = open_output(&args.output)?;
    let n = args.n;

    let emit = |out: &mut dyn Write, node: &wvg_core::enumeration::PosetNode| -> Result<()> {
        let line = GameLine {
            rank: node.rank(),
            wmin: node.wmin.clone(),
            weights: node.witness.clone(),
        };
        serde_json::to_writer(&mut *out, &line)?;
        out.write_all(b"\n")?;
        Ok(())
    };

    match Order::from(args.order) {
        Order::BreadthFirst => {
            let mut bf = match (&args.checkpoint_dir, args.resume) {
                (Some(dir), true) => match latest_checkpoint(dir)? {
                    Some(ck) => {
                        if ck.n != n {
                            return usage(format!(
                                "checkpoint in {} is for n = {}, not n = {n}",
                                dir.display(),
                                ck.n
                            ));
                        }
                        eprintln!("resuming after rank {}", ck.rank);
                        BreadthFirst::from_checkpoint(ck)
                    }
                    None => {
                        return usage(format!(
                            "--resume given but no checkpoint files in {}",
                            dir.display()
                        ))
                    }
                },
                _ => BreadthFirst::new(n),
            }
            .with_threads(wvg_core::env_threads());

            if !args.resume {
                for node in bf.frontier() {
                    emit(&mut *out, node)?;
                }
                out.flush()?;
                if let Some(dir) = &args.checkpoint_dir {
                    write_checkpoint(dir, &bf.checkpoint())?;
                }
            }
            loop {
                if INTERRUPTED.load(Ordering::SeqCst) {
                    out.flush()?;
                    return Ok(EXIT_INTERRUPTED);
                }
                if !bf.advance() {
                    break;
                }
                for node in bf.frontier() {
                    emit(&mut *out, node)?;
                }
                out.flush()?;
                if let Some(dir) = &args.checkpoint_dir {
                    write_checkpoint(dir, &bf.checkpoint())?;
                }
            }
            let by_rank = bf.by_rank().to_vec();
            let summary = SummaryLine {
                summary: true,
                n,
                total: by_rank.iter().sum(),
                by_rank,
            };
            serde_json::to_writer(&mut *out, &summary)?;
            out.write_all(b"\n")?;
            out.flush()?;
        }
        Order::DepthFirst => {
            let mut by_rank: Vec<u64> = Vec::new();
            let mut failed: Option<anyhow::Error> = None;
            let completed =
                wvg_core::enumeration::enumerate_cwvg(n, Order::DepthFirst, |node| {
                    if INTERRUPTED.load(Ordering::SeqCst) {
                        return ControlFlow::Break(());
                    }
                    if by_rank.len() <= node.rank() {
                        by_rank.resize(node.rank() + 1, 0);
                    }
                    by_rank[node.rank()] += 1;
                    match emit(&mut *out, node) {
                        Ok(()) => ControlFlow::Continue(()),
                        Err(err) => {
                            failed = Some(err);
                            ControlFlow::Break(())
                        }
                    }
                });
            if let Some(err) = failed {
                return Err(err);
            }
            if !completed {
                out.flush()?;
                return Ok(EXIT_INTERRUPTED);
            }
            let summary = SummaryLine {
                summary: true,
                n,
                total: by_rank.iter().sum(),
                by_rank,
            };
            serde_json::to_writer(&mut *out, &summary)?;
            out.write_all(b"\n")?;
            out.flush()?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_count(args: CountArgs) -> Result<u8> {
    if let Some(message) = check_enumeration_cap(args.n, args.extended) {
        return usage(message);
    }
    let mut by_rank: Vec<u64> = Vec::new();
    let completed = wvg_core::enumeration::enumerate_cwvg(
        args.n,
        args.order.into(),
        |node| {
            if INTERRUPTED.load(Ordering::SeqCst) {
                return ControlFlow::Break(());
            }
            if by_rank.len() <= node.rank() {
                by_rank.resize(node.rank() + 1, 0);
            }
            by_rank[node.rank()] += 1;
            ControlFlow::Continue(())
        },
    );
    if !completed {
        return Ok(EXIT_INTERRUPTED);
    }
    let summary = SummaryLine {
        summary: true,
        n: args.n,
        total: by_rank.iter().sum(),
        by_rank,
    };
    println!("{}", serde_json::to_string(&summary)?);
    Ok(EXIT_OK)
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn load_game(path: &Path) -> Result<GameRep> {
    let text = read_input(path)?;
    let json = serde_json::from_str(&text).context("parsing game JSON")?;
    game_from_json(&json).context("validating game")
}

fn cmd_convert(args: ConvertArgs) -> Result<u8> {
    let Some(to) = Tag::parse(&args.to) else {
        return usage(format!(
            "unknown target {:?}; expected wmin, lmax, roof, ceil, or weights",
            args.to
        ));
    };
    let game = load_game(&args.input)?;
    let outcome = match convert::convert(&game, to, args.allow_exponential) {
        Ok(outcome) => outcome,
        Err(
            err @ (convert::ConvertError::NeedsFlag { .. }
            | convert::ConvertError::NeedsFlagNotLinear { .. }
            | convert::ConvertError::BadTarget
            | convert::ConvertError::BruteForceCap { .. }),
        ) => return usage(err.to_string()),
        Err(err) => return Err(err.into()),
    };
    let mut out = open_output(&args.output)?;
    writeln!(out, "{}", outcome.to_json_line())?;
    out.flush()?;
    Ok(if outcome.is_ok() { EXIT_OK } else { EXIT_DOMAIN })
}

fn cmd_banzhaf(args: BanzhafArgs) -> Result<u8> {
    let game = match (&args.weights, &args.input) {
        (Some(shorthand), None) => {
            GameRep::weighted(WeightVector::parse_shorthand(shorthand)?)
        }
        (None, Some(path)) => load_game(path)?,
        _ => return usage("give exactly one of --weights or --input"),
    };
    let index = banzhaf(&game)?;
    if args.json {
        #[derive(serde::Serialize)]
        struct IndexJson {
            n: u8,
            raw: Vec<u64>,
            normalized: Vec<String>,
            degenerate: bool,
        }
        let json = IndexJson {
            n: index.n(),
            raw: index.raw.clone(),
            normalized: index.normalized.iter().map(rational_to_string).collect(),
            degenerate: index.degenerate,
        };
        println!("{}", serde_json::to_string(&json)?);
    } else {
        let parts: Vec<String> = index.normalized.iter().map(rational_to_string).collect();
        println!("{}", parts.join(","));
    }
    Ok(EXIT_OK)
}

fn cmd_solve(args: SolveArgs) -> Result<u8> {
    let text = match (&args.target, &args.target_inline) {
        (Some(path), None) => read_input(path)?,
        (None, Some(inline)) => inline.clone(),
        _ => return usage("give exactly one of --target or --target-inline"),
    };
    let values = match parse_target_text(&text) {
        Ok(v) => v,
        Err(message) => return usage(message),
    };
    let target = if args.sort_target {
        let (target, permutation) = TargetIndex::from_unsorted(values)?;
        eprintln!(
            "sorted target; player relabeling (old -> new): {:?}",
            permutation
        );
        target
    } else {
        match TargetIndex::new(values) {
            Ok(t) => t,
            Err(err) => return usage(err.to_string()),
        }
    };

    let budget = match (args.games_budget, args.time_budget_secs) {
        (Some(_), Some(_)) => {
            return usage("give at most one of --games-budget and --time-budget-secs")
        }
        (Some(games), None) => Budget::Games(games),
        (None, Some(secs)) => Budget::Time(Duration::from_secs_f64(secs)),
        (None, None) => Budget::Exhaustive,
    };

    let stdout = std::io::stdout();
    let report = match solve_pvgd_with(
        &target,
        args.order.into(),
        budget,
        Some(&INTERRUPTED),
        |improvement| {
            let mut lock = stdout.lock();
            if serde_json::to_writer(&mut lock, improvement).is_ok() {
                let _ = lock.write_all(b"\n");
                let _ = lock.flush();
            }
        },
    ) {
        Ok(report) => report,
        Err(err @ SolveError::ExhaustiveCap { .. }) => return usage(err.to_string()),
        Err(err) => return Err(err.into()),
    };

    match &args.report {
        Some(path) => {
            fs::write(path, serde_json::to_vec_pretty(&report)?)
                .with_context(|| format!("writing {}", path.display()))?;
        }
        None => println!("{}", serde_json::to_string(&report)?),
    }
    if INTERRUPTED.load(Ordering::SeqCst) {
        return Ok(EXIT_INTERRUPTED);
    }
    Ok(EXIT_OK)
}

fn cmd_sample(args: SampleArgs) -> Result<u8> {
    if args.n == 0 || args.n > 64 {
        return usage("n must be between 1 and 64");
    }
    for k in 0..args.count {
        let target = sample_canonical_target(args.n, args.seed.wrapping_add(k));
        let parts: Vec<String> =
            target.values().iter().map(|x| format!("{x}")).collect();
        println!("{}", parts.join(","));
    }
    Ok(EXIT_OK)
}

fn cmd_experiments(args: ExperimentsArgs) -> Result<u8> {
    let cfg = experiments::ExperimentConfig {
        n_min: args.n_min,
        n_max: args.n_max,
        instances: args.instances,
        seed: args.seed,
        games_budget: args.games_budget,
        order: args.order.into(),
    };
    use experiments::ExperimentError;
    let result = match args.exp {
        1 => experiments::run_timings(&cfg).map(|r| experiments::timings_csv(&r)),
        2 => experiments::run_rank_histogram(&cfg).map(|r| experiments::rank_histogram_csv(&r)),
        3 => experiments::run_optimal_error(&cfg).map(|r| experiments::optimal_error_csv(&r)),
        4 => experiments::run_convergence(&cfg).map(|r| experiments::convergence_csv(&r)),
        other => return usage(format!("unknown experiment {other}; expected 1..=4")),
    };
    let csv = match result {
        Ok(csv) => csv,
        Err(
            err @ (ExperimentError::BadRange { .. }
            | ExperimentError::BeyondCap { .. }
            | ExperimentError::MissingBudget
            | ExperimentError::NoInstances),
        ) => return usage(err.to_string()),
        Err(err) => return Err(err.into()),
    };
    let mut out = open_output(&args.output)?;
    out.write_all(csv.as_bytes())?;
    out.flush()?;
    Ok(EXIT_OK)
}
