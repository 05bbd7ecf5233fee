//! Command-line front door: space generation, content estimation runs,
//! dimension fits, and randomized invariant suites.
//!
//! Exit codes: 0 ok, 1 invariant failure, 2 parse/parameter errors,
//! 3 limit violations. The environment variable `HLAB_DP_LIMIT`
//! overrides the exact-DP atom limit (hard-capped at 20). Every JSON
//! report embeds the configuration that produced it.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use hlab_core::intervals::interval_content_with_limit;
use hlab_core::io::{load_space_json, path_to_csv, LoadedSpace};
use hlab_core::SampledPath;
use hlab_core::{
    dimension_estimate, exact_content_with_limit, greedy_content, materialize, suites, AtomicSpace,
    ContentEstimate, Delta, Error, IntervalSet, SequenceSpaceSpec, WeightAssignment, HARD_DP_CAP,
};

#[derive(Parser)]
#[command(name = "hlab", version, about = "metric-geometry laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate spaces, interval sets, clouds, and paths.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Content of a space file (atomic, point, or interval JSON).
    Content(ContentArgs),
    /// Dimension estimate of a point-cloud file.
    Dim(DimArgs),
    /// Run a randomized invariant suite.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum GenKind {
    /// Middle-thirds Cantor construction at a given depth.
    Cantor {
        #[arg(long)]
        depth: u32,
        /// Emit the 2^depth left endpoints as a point cloud instead of
        /// the cell presentation.
        #[arg(long)]
        points: bool,
        #[arg(long)]
        out: Option<String>,
    },
    /// Materialized sequence space (n symbols, ratio rho, depth).
    Seqspace {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        depth: u32,
        #[arg(long)]
        out: Option<String>,
    },
    /// A finite union of closed intervals, e.g. --intervals "0,1;2,3".
    IntervalUnion {
        #[arg(long, allow_hyphen_values = true)]
        intervals: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Unit circle closed by N equal chords (N+1 CSV rows).
    Circle {
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Equally spaced points on a line segment.
    GridCloud {
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0.0)]
        lo: f64,
        #[arg(long, default_value_t = 1.0)]
        hi: f64,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Args)]
struct ContentArgs {
    /// Space file (JSON: points, dist, atomic, or intervals).
    file: String,
    #[arg(long)]
    alpha: f64,
    /// Covering scale: a positive number or "inf".
    #[arg(long, default_value = "inf")]
    delta: String,
    #[arg(long, default_value = "exact")]
    mode: String,
    /// Comma-separated atom indices; all atoms when omitted.
    #[arg(long)]
    target: Option<String>,
    /// Comma-separated weights for --mode lower; uniform when omitted.
    #[arg(long)]
    weights: Option<String>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct DimArgs {
    /// Point-cloud file (JSON with "points").
    file: String,
    /// Comma-separated decreasing scales.
    #[arg(long)]
    scales: String,
    /// Expected range "lo,hi" recorded in the diagnostics.
    #[arg(long, allow_hyphen_values = true)]
    bracket: Option<String>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of: content-laws, transforms, curves, slicing, separation.
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    cases: usize,
    #[arg(long)]
    out: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::TooManyAtoms { .. }
        | Error::TooLarge { .. }
        | Error::TooManySegments { .. }
        | Error::DegenerateGrid(_)
        | Error::TooFewPoints(_) => 3,
        _ => 2,
    }
}

fn dp_limit() -> usize {
    std::env::var("HLAB_DP_LIMIT")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .map(|v| v.clamp(1, HARD_DP_CAP))
        .unwrap_or(hlab_core::DEFAULT_DP_LIMIT)
}

fn emit(out: Option<&str>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Error::BadParams(format!("cannot write {path}: {e}")))
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn parse_delta(s: &str) -> Result<Delta, Error> {
    match s {
        "inf" | "infinity" => Ok(Delta::Infinite),
        _ => {
            let d: f64 = s
                .parse()
                .map_err(|e| Error::BadParams(format!("bad delta {s:?}: {e}")))?;
            Delta::finite(d)
        }
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, Error>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(|f| {
            f.trim()
                .parse::<T>()
                .map_err(|e| Error::BadParams(format!("bad {what} entry {f:?}: {e}")))
        })
        .collect()
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Gen { kind } => run_gen(kind),
        Command::Content(args) => run_content(args),
        Command::Dim(args) => run_dim(args),
        Command::Verify(args) => run_verify(args),
    }
}

fn run_gen(kind: GenKind) -> Result<u8, Error> {
    match kind {
        GenKind::Cantor { depth, points, out } => {
            let spec = SequenceSpaceSpec::new(2, 1.0 / 3.0, depth)?;
            if points {
                if depth > 12 {
                    return Err(Error::TooLarge {
                        cells: 1 << depth,
                        limit: 1 << 12,
                    });
                }
                // Left endpoints of the depth-level middle-thirds intervals.
                let count = 1usize << depth;
                let coords: Vec<Vec<f64>> = (0..count)
                    .map(|word| {
                        let x = (0..depth)
                            .map(|bit| {
                                let digit = (word >> (depth - 1 - bit)) & 1;
                                digit as f64 * 2.0 / 3f64.powi(bit as i32 + 1)
                            })
                            .sum();
                        vec![x]
                    })
                    .collect();
                emit(
                    out.as_deref(),
                    &serde_json::to_string_pretty(&json!({"points": coords}))
                        .expect("serializable"),
                )?;
            } else {
                let m = materialize(&spec)?;
                emit(
                    out.as_deref(),
                    &serde_json::to_string_pretty(&m.atomic).expect("serializable"),
                )?;
            }
            Ok(0)
        }
        GenKind::Seqspace { n, rho, depth, out } => {
            let spec = SequenceSpaceSpec::new(n, rho, depth)?;
            let m = materialize(&spec)?;
            emit(
                out.as_deref(),
                &serde_json::to_string_pretty(&m.atomic).expect("serializable"),
            )?;
            Ok(0)
        }
        GenKind::IntervalUnion { intervals, out } => {
            let pairs = intervals
                .split(';')
                .map(|p| {
                    let nums: Vec<f64> = parse_list(p, "interval")?;
                    match nums.as_slice() {
                        [a, b] => Ok((*a, *b)),
                        _ => Err(Error::BadParams(format!(
                            "interval {p:?} needs two numbers"
                        ))),
                    }
                })
                .collect::<Result<Vec<_>, Error>>()?;
            let set = IntervalSet::new(&pairs)?;
            emit(
                out.as_deref(),
                &serde_json::to_string_pretty(&set).expect("serializable"),
            )?;
            Ok(0)
        }
        GenKind::Circle { samples, out } => {
            if samples < 2 {
                return Err(Error::BadParams("need at least 2 chords".into()));
            }
            let params: Vec<f64> = (0..=samples)
                .map(|j| 2.0 * std::f64::consts::PI * j as f64 / samples as f64)
                .collect();
            let coords: Vec<Vec<f64>> = params.iter().map(|&t| vec![t.cos(), t.sin()]).collect();
            let path = SampledPath::euclidean(params, coords)?;
            emit(out.as_deref(), &path_to_csv(&path)?)?;
            Ok(0)
        }
        GenKind::GridCloud { count, lo, hi, out } => {
            if count < 2 || hi <= lo {
                return Err(Error::BadParams("need count >= 2 and hi > lo".into()));
            }
            let coords: Vec<Vec<f64>> = (0..count)
                .map(|i| vec![lo + (hi - lo) * i as f64 / (count - 1) as f64])
                .collect();
            emit(
                out.as_deref(),
                &serde_json::to_string_pretty(&json!({"points": coords})).expect("serializable"),
            )?;
            Ok(0)
        }
    }
}

fn run_content(args: ContentArgs) -> Result<u8, Error> {
    let text = fs::read_to_string(&args.file)
        .map_err(|e| Error::BadParams(format!("cannot read {}: {e}", args.file)))?;
    let loaded = load_space_json(&text)?;
    let delta = parse_delta(&args.delta)?;
    let limit = dp_limit();
    let config = json!({
        "command": "content",
        "file": args.file,
        "alpha": args.alpha,
        "delta": delta,
        "mode": args.mode,
        "target": args.target,
        "weights": args.weights,
        "dp_limit": limit,
    });

    let estimate: ContentEstimate = match loaded {
        LoadedSpace::Intervals(set) => {
            if args.mode != "exact" {
                return Err(Error::BadParams(format!(
                    "interval sets only support --mode exact, got {}",
                    args.mode
                )));
            }
            if delta.is_finite() {
                return Err(Error::BadParams(
                    "interval sets are evaluated at unrestricted scale; drop --delta".into(),
                ));
            }
            interval_content_with_limit(&set, args.alpha, limit)?
        }
        other => {
            let space = match other {
                LoadedSpace::Atomic(s) => s,
                LoadedSpace::Points(p) => AtomicSpace::from_point_space(&p),
                LoadedSpace::Intervals(_) => unreachable!("handled above"),
            };
            let target: Vec<usize> = match &args.target {
                Some(t) if t.trim().is_empty() => Vec::new(),
                Some(t) => parse_list(t, "target")?,
                None => (0..space.len()).collect(),
            };
            match args.mode.as_str() {
                "exact" => exact_content_with_limit(&space, &target, args.alpha, delta, limit)?,
                "greedy" => greedy_content(&space, &target, args.alpha, delta)?,
                "lower" => {
                    let weights = match &args.weights {
                        Some(w) => WeightAssignment::new(parse_list(w, "weight")?)?,
                        None => {
                            let n = target.len().max(1);
                            WeightAssignment::uniform(target.len(), 1.0 / n as f64)?
                        }
                    };
                    hlab_core::content::mass_lower_bound_with_limit(
                        &space, &target, args.alpha, delta, &weights, limit,
                    )?
                }
                other => return Err(Error::BadParams(format!("unknown mode {other}"))),
            }
        }
    };

    let report = json!({"config": config, "result": estimate});
    emit(
        args.out.as_deref(),
        &serde_json::to_string_pretty(&report).expect("serializable"),
    )?;
    Ok(0)
}

fn run_dim(args: DimArgs) -> Result<u8, Error> {
    let text = fs::read_to_string(&args.file)
        .map_err(|e| Error::BadParams(format!("cannot read {}: {e}", args.file)))?;
    let cloud = match load_space_json(&text)? {
        LoadedSpace::Points(p) => p,
        _ => return Err(Error::BadParams("dim needs a point-cloud file".into())),
    };
    let scales: Vec<f64> = parse_list(&args.scales, "scale")?;
    let bracket = match &args.bracket {
        Some(b) => {
            let nums: Vec<f64> = parse_list(b, "bracket")?;
            match nums.as_slice() {
                [lo, hi] => Some((*lo, *hi)),
                _ => return Err(Error::BadParams("bracket needs two numbers".into())),
            }
        }
        None => None,
    };
    let space = AtomicSpace::from_point_space(&cloud);
    let target: Vec<usize> = (0..space.len()).collect();
    let estimate = dimension_estimate(&space, &target, &scales, bracket)?;
    let config = json!({
        "command": "dim",
        "file": args.file,
        "scales": scales,
        "bracket": args.bracket,
    });
    let report = json!({"config": config, "result": estimate});
    emit(
        args.out.as_deref(),
        &serde_json::to_string_pretty(&report).expect("serializable"),
    )?;
    Ok(0)
}

fn run_verify(args: VerifyArgs) -> Result<u8, Error> {
    let report = suites::run_suite(&args.suite, args.seed, args.cases)?;
    let config = json!({
        "command": "verify",
        "suite": args.suite,
        "seed": args.seed,
        "cases": args.cases,
    });
    let passed = report.passed();
    let doc = json!({"config": config, "result": report});
    emit(
        args.out.as_deref(),
        &serde_json::to_string_pretty(&doc).expect("serializable"),
    )?;
    if passed {
        Ok(0)
    } else {
        Ok(1)
    }
}
