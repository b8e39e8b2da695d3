//! Command line front end for the benchmark harness.
//!
//! ```text
//! phm-bench --rules rules.txt --gen count=100000,seed=7,match=0.1 --repeat 3
//! phm-bench --rules rules.txt --trace trace.pht --engine phm --out report.csv
//! ```
//!
//! Exactly one of `--trace` and `--gen` supplies the packets. The CSV report
//! goes to stdout unless `--out` names a file; the human summary goes to
//! stderr either way.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, ValueEnum};

use crate::baseline::BaselineAlgorithm;
use crate::bench::{
    emit_csv, run_benchmark, BenchConfig, BenchError, BenchReport, CacheMode, EngineSelect,
    TraceSource,
};

/// Clean run.
pub const EXIT_OK: i32 = 0;
/// Usage, input, or output failure.
pub const EXIT_ERROR: i32 = 1;
/// The engines disagreed on some header.
pub const EXIT_DIFFERENTIAL: i32 = 2;

const EXIT_HELP: &str = "Exit codes:
  0  success
  1  usage or input error
  2  engines disagreed on some header";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Phm,
    Baseline,
    Both,
}

impl From<EngineArg> for EngineSelect {
    fn from(arg: EngineArg) -> EngineSelect {
        match arg {
            EngineArg::Phm => EngineSelect::Phm,
            EngineArg::Baseline => EngineSelect::Baseline,
            EngineArg::Both => EngineSelect::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgorithmArg {
    BoyerMoore,
    Horspool,
}

impl From<AlgorithmArg> for BaselineAlgorithm {
    fn from(arg: AlgorithmArg) -> BaselineAlgorithm {
        match arg {
            AlgorithmArg::BoyerMoore => BaselineAlgorithm::BoyerMoore,
            AlgorithmArg::Horspool => BaselineAlgorithm::Horspool,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CacheArg {
    Shared,
    Fresh,
}

impl From<CacheArg> for CacheMode {
    fn from(arg: CacheArg) -> CacheMode {
        match arg {
            CacheArg::Shared => CacheMode::Shared,
            CacheArg::Fresh => CacheMode::Fresh,
        }
    }
}

/// Parsed `--gen` value.
#[derive(Debug, Clone, Copy, PartialEq)]
struct GenSpecArg {
    count: usize,
    seed: u64,
    match_fraction: f64,
}

/// Parses `count=N[,seed=S][,match=F]`. Seed defaults to 0 and the match
/// fraction to 0.1; count is required.
fn parse_gen_spec(text: &str) -> Result<GenSpecArg, String> {
    let mut count: Option<usize> = None;
    let mut seed: u64 = 0;
    let mut match_fraction: f64 = 0.1;
    for part in text.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got {part:?}"))?;
        match key {
            "count" => {
                count = Some(
                    value
                        .parse()
                        .map_err(|_| format!("invalid count {value:?}"))?,
                );
            }
            "seed" => {
                seed = value
                    .parse()
                    .map_err(|_| format!("invalid seed {value:?}"))?;
            }
            "match" => {
                match_fraction = value
                    .parse()
                    .map_err(|_| format!("invalid match fraction {value:?}"))?;
                if !(0.0..=1.0).contains(&match_fraction) {
                    return Err(format!("match fraction {match_fraction} is outside [0, 1]"));
                }
            }
            other => {
                return Err(format!(
                    "unknown key {other:?}, expected count, seed, or match"
                ));
            }
        }
    }
    let count = count.ok_or("generation needs count=<N>")?;
    Ok(GenSpecArg {
        count,
        seed,
        match_fraction,
    })
}

/// Benchmarks an energy-function packet header matcher against exact string
/// matching baselines.
#[derive(Debug, Parser)]
#[command(name = "phm-bench", version, after_help = EXIT_HELP)]
struct Args {
    /// Rule file: one 'id,sa,sp,da,dp,proto' or 'id,B:<104 bits>' per line
    #[arg(long, value_name = "PATH")]
    rules: PathBuf,

    /// Trace file to match, PHT1 binary or CSV (sniffed by magic)
    #[arg(
        long,
        value_name = "PATH",
        conflicts_with = "generate",
        required_unless_present = "generate"
    )]
    trace: Option<PathBuf>,

    /// Generate the trace instead: count=N[,seed=S][,match=F]
    #[arg(long = "gen", value_name = "SPEC", value_parser = parse_gen_spec)]
    generate: Option<GenSpecArg>,

    /// Engines to run
    #[arg(long, value_enum, default_value_t = EngineArg::Both)]
    engine: EngineArg,

    /// Repetitions of each timed matching loop
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    repeat: u64,

    /// Search algorithm backing the baseline
    #[arg(long = "baseline-alg", value_enum, default_value_t = AlgorithmArg::BoyerMoore)]
    baseline_alg: AlgorithmArg,

    /// Learning cache behavior across repetitions
    #[arg(long, value_enum, default_value_t = CacheArg::Shared)]
    cache: CacheArg,

    /// Write the CSV report here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

impl Args {
    fn into_config(self) -> BenchConfig {
        let trace = match (self.trace, self.generate) {
            (Some(path), None) => TraceSource::File(path),
            (None, Some(gen_spec)) => TraceSource::Generate {
                count: gen_spec.count,
                seed: gen_spec.seed,
                match_fraction: gen_spec.match_fraction,
            },
            _ => unreachable!("clap enforces exactly one trace source"),
        };
        BenchConfig {
            rules_path: self.rules,
            trace,
            engines: self.engine.into(),
            repeat: self.repeat as usize,
            baseline_algorithm: self.baseline_alg.into(),
            cache_mode: self.cache.into(),
            out_path: self.out,
        }
    }
}

/// The exit code a benchmark error maps to.
pub fn exit_code_for(error: &BenchError) -> i32 {
    match error {
        BenchError::Differential { .. } => EXIT_DIFFERENTIAL,
        _ => EXIT_ERROR,
    }
}

fn summarize(report: &BenchReport) -> String {
    let mut text = format!(
        "{} packets against {} rules",
        report.packet_count, report.rule_count
    );
    for (name, engine) in [("phm", &report.phm), ("baseline", &report.baseline)] {
        if let Some(engine) = engine {
            text.push_str(&format!(
                "\n{name}: compile {:.6}s, mean match loop {:.6}s over {} repetition(s)",
                engine.compile_seconds,
                engine.mean_elapsed_seconds(),
                engine.reps.len()
            ));
        }
    }
    if let Some(speedup) = report.speedup() {
        text.push_str(&format!(
            "\nspeedup: {speedup:.2}x (baseline mean over phm mean)"
        ));
    }
    text
}

/// Runs the benchmark CLI and returns its exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(args) => args,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_ERROR,
            };
            let _ = err.print();
            return code;
        }
    };
    let config = args.into_config();
    let report = match run_benchmark(&config) {
        Ok(report) => report,
        Err(err) => {
            eprintln!("phm-bench: {err}");
            return exit_code_for(&err);
        }
    };
    if let Some(path) = &config.out_path {
        let mut file = match std::fs::File::create(path) {
            Ok(file) => file,
            Err(err) => {
                eprintln!("phm-bench: cannot write {}: {err}", path.display());
                return EXIT_ERROR;
            }
        };
        if let Err(err) = emit_csv(&report, &mut file) {
            eprintln!("phm-bench: cannot write {}: {err}", path.display());
            return EXIT_ERROR;
        }
    } else {
        let stdout = std::io::stdout();
        if let Err(err) = emit_csv(&report, &mut stdout.lock()) {
            eprintln!("phm-bench: cannot write report: {err}");
            return EXIT_ERROR;
        }
    }
    eprintln!("{}", summarize(&report));
    EXIT_OK
}
