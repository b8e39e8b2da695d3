//! The benchmark harness: runs one or both engines over a trace and reports
//! per-repetition timings as CSV.
//!
//! Timing discipline: rule compilation is timed once, separately, per
//! engine; each repetition times only its matching loop. When both engines
//! run, an untimed differential pass first checks that they agree on every
//! header, so a reported speedup is never a speedup over a different answer.

use std::io;
use std::path::PathBuf;
use std::time::Instant;

use thiserror::Error;

use crate::baseline::{baseline_match, compile_baseline, BaselineAlgorithm, BaselinePatternSet};
use crate::header::{load_rules, FiveTuple, RuleSetError};
use crate::matcher::{match_header, LearningCache, MatchOutcome, RuleGroupTable};
use crate::trace::{generate_trace, read_trace, TraceError, TraceGenError, TraceGenSpec};

/// Where the trace comes from.
#[derive(Debug, Clone)]
pub enum TraceSource {
    /// Read from a file (PHT1 or CSV, sniffed).
    File(PathBuf),
    /// Generate deterministically against the loaded rules.
    Generate {
        count: usize,
        seed: u64,
        match_fraction: f64,
    },
}

/// Which engines to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineSelect {
    Phm,
    Baseline,
    Both,
}

impl EngineSelect {
    fn runs_phm(self) -> bool {
        matches!(self, EngineSelect::Phm | EngineSelect::Both)
    }

    fn runs_baseline(self) -> bool {
        matches!(self, EngineSelect::Baseline | EngineSelect::Both)
    }
}

/// How the learning cache lives across repetitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheMode {
    /// One cache for the whole run; later repetitions start warm.
    Shared,
    /// A new cache per repetition; every repetition pays classification.
    Fresh,
}

/// Everything one benchmark run needs.
#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub rules_path: PathBuf,
    pub trace: TraceSource,
    pub engines: EngineSelect,
    pub repeat: usize,
    pub baseline_algorithm: BaselineAlgorithm,
    pub cache_mode: CacheMode,
    /// CSV destination; stdout when absent. The harness itself never writes,
    /// this rides along for the caller.
    pub out_path: Option<PathBuf>,
}

/// One timed repetition of a matching loop.
#[derive(Debug, Clone, PartialEq)]
pub struct RepStats {
    pub elapsed_seconds: f64,
    /// Headers that matched some rule.
    pub matches: u64,
    /// Total energy evaluations; the baseline reports none.
    pub energy_evals: Option<u64>,
    /// Headers classified from the learning cache; the baseline reports none.
    pub cache_hits: Option<u64>,
}

/// One engine's timings.
#[derive(Debug, Clone, PartialEq)]
pub struct EngineReport {
    pub engine: EngineSelect,
    pub compile_seconds: f64,
    pub reps: Vec<RepStats>,
}

impl EngineReport {
    pub fn mean_elapsed_seconds(&self) -> f64 {
        self.reps.iter().map(|r| r.elapsed_seconds).sum::<f64>() / self.reps.len() as f64
    }
}

/// The full result of a benchmark run.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub packet_count: usize,
    pub rule_count: usize,
    pub phm: Option<EngineReport>,
    pub baseline: Option<EngineReport>,
}

impl BenchReport {
    /// Mean baseline time over mean engine time; >1 means the energy engine
    /// was faster. Present only when both engines ran.
    pub fn speedup(&self) -> Option<f64> {
        match (&self.phm, &self.baseline) {
            (Some(p), Some(b)) => Some(b.mean_elapsed_seconds() / p.mean_elapsed_seconds()),
            _ => None,
        }
    }
}

/// Failure of a benchmark run.
#[derive(Debug, Error)]
pub enum BenchError {
    #[error("rules {path}: {source}")]
    Rules { path: PathBuf, source: RuleSetError },
    #[error("trace {path}: {source}")]
    Trace { path: PathBuf, source: TraceError },
    #[error(transparent)]
    Generate(#[from] TraceGenError),
    #[error("engines disagree on header {index} ({header}): energy engine found {phm}, baseline found {baseline}")]
    Differential {
        index: usize,
        header: String,
        phm: MatchOutcome,
        baseline: MatchOutcome,
    },
}

fn timed<T>(work: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let value = work();
    (value, start.elapsed().as_secs_f64())
}

fn phm_report(
    table: &RuleGroupTable,
    compile_seconds: f64,
    headers: &[FiveTuple],
    repeat: usize,
    cache_mode: CacheMode,
) -> EngineReport {
    let mut shared_cache = LearningCache::new();
    let mut reps = Vec::with_capacity(repeat);
    for _ in 0..repeat {
        let mut fresh_cache;
        let cache = match cache_mode {
            CacheMode::Shared => &mut shared_cache,
            CacheMode::Fresh => {
                fresh_cache = LearningCache::new();
                &mut fresh_cache
            }
        };
        let start = Instant::now();
        let mut matches = 0u64;
        let mut energy_evals = 0u64;
        let mut cache_hits = 0u64;
        for header in headers {
            let result = match_header(header, table, cache);
            matches += u64::from(matches!(result.outcome, MatchOutcome::Matched(_)));
            energy_evals += result.energy_evals;
            cache_hits += u64::from(result.cache_hit);
        }
        let elapsed_seconds = start.elapsed().as_secs_f64();
        reps.push(RepStats {
            elapsed_seconds,
            matches,
            energy_evals: Some(energy_evals),
            cache_hits: Some(cache_hits),
        });
    }
    EngineReport {
        engine: EngineSelect::Phm,
        compile_seconds,
        reps,
    }
}

fn baseline_report(
    patterns: &BaselinePatternSet,
    compile_seconds: f64,
    headers: &[FiveTuple],
    repeat: usize,
) -> EngineReport {
    let mut reps = Vec::with_capacity(repeat);
    for _ in 0..repeat {
        let start = Instant::now();
        let mut matches = 0u64;
        for header in headers {
            let result = baseline_match(header, patterns);
            matches += u64::from(matches!(result.outcome, MatchOutcome::Matched(_)));
        }
        let elapsed_seconds = start.elapsed().as_secs_f64();
        reps.push(RepStats {
            elapsed_seconds,
            matches,
            energy_evals: None,
            cache_hits: None,
        });
    }
    EngineReport {
        engine: EngineSelect::Baseline,
        compile_seconds,
        reps,
    }
}

/// Loads inputs, compiles the selected engines, verifies agreement when both
/// run, then times the matching loops.
pub fn run_benchmark(config: &BenchConfig) -> Result<BenchReport, BenchError> {
    let rules = load_rules(&config.rules_path).map_err(|source| BenchError::Rules {
        path: config.rules_path.clone(),
        source,
    })?;
    let headers = match &config.trace {
        TraceSource::File(path) => {
            read_trace(path)
                .map_err(|source| BenchError::Trace {
                    path: path.clone(),
                    source,
                })?
                .headers
        }
        TraceSource::Generate {
            count,
            seed,
            match_fraction,
        } => generate_trace(&TraceGenSpec {
            count: *count,
            seed: *seed,
            match_fraction: *match_fraction,
            rules: &rules,
        })?,
    };

    let table = config
        .engines
        .runs_phm()
        .then(|| timed(|| RuleGroupTable::compile(&rules)));
    let patterns = config
        .engines
        .runs_baseline()
        .then(|| timed(|| compile_baseline(&rules, config.baseline_algorithm)));

    if let (Some((table, _)), Some((patterns, _))) = (&table, &patterns) {
        let mut cache = LearningCache::new();
        for (index, header) in headers.iter().enumerate() {
            let phm = match_header(header, table, &mut cache).outcome;
            let baseline = baseline_match(header, patterns).outcome;
            if phm != baseline {
                return Err(BenchError::Differential {
                    index,
                    header: header.to_csv_line(),
                    phm,
                    baseline,
                });
            }
        }
    }

    Ok(BenchReport {
        packet_count: headers.len(),
        rule_count: rules.len(),
        phm: table.map(|(table, compile_seconds)| {
            phm_report(
                &table,
                compile_seconds,
                &headers,
                config.repeat,
                config.cache_mode,
            )
        }),
        baseline: patterns.map(|(patterns, compile_seconds)| {
            baseline_report(&patterns, compile_seconds, &headers, config.repeat)
        }),
    })
}

/// Writes the report as CSV: a header line, then one row per repetition,
/// energy engine rows before baseline rows, repetitions numbered from 1.
/// Columns that do not apply stay empty.
pub fn emit_csv<W: io::Write>(report: &BenchReport, writer: &mut W) -> io::Result<()> {
    writeln!(
        writer,
        "engine,packets,rules,repetition,elapsed_seconds,matches,energy_evals,cache_hits"
    )?;
    let sections = [("phm", &report.phm), ("baseline", &report.baseline)];
    for (name, engine) in sections {
        let Some(engine) = engine else { continue };
        for (index, rep) in engine.reps.iter().enumerate() {
            let energy_evals = rep.energy_evals.map(|v| v.to_string()).unwrap_or_default();
            let cache_hits = rep.cache_hits.map(|v| v.to_string()).unwrap_or_default();
            writeln!(
                writer,
                "{},{},{},{},{},{},{},{}",
                name,
                report.packet_count,
                report.rule_count,
                index + 1,
                rep.elapsed_seconds,
                rep.matches,
                energy_evals,
                cache_hits
            )?;
        }
    }
    Ok(())
}
