//! Packet header matching with a Hopfield energy function.
//!
//! An IPv4 5-tuple becomes 104 bits, then a 105-element bipolar sequence
//! split into 35 chunks of 3. Each chunk of a rule trains a tiny Hopfield
//! weight matrix by outer product; a chunk of an incoming header matches when
//! its energy against that matrix bottoms out at -3 and a one-value sign
//! settles which of the two patterns sharing the matrix it is. The first
//! chunk buckets rules into 8 groups, so a header is only ever compared
//! against one bucket, and a small learning cache makes repeat
//! classifications free. An exact string matching engine (Boyer-Moore or
//! Horspool over the same bits rendered as text) provides the reference
//! answers and the performance baseline.
//!
//! # Quick start
//!
//! ```
//! use phm::{parse_rules, match_header, LearningCache, MatchOutcome, RuleGroupTable};
//! use phm::FiveTuple;
//!
//! let rules = parse_rules("1,192.168.1.1,80,10.0.0.1,443,6\n".as_bytes())?;
//! let table = RuleGroupTable::compile(&rules);
//! let mut cache = LearningCache::new();
//!
//! let header = FiveTuple::parse_csv("192.168.1.1,80,10.0.0.1,443,6")?;
//! let result = match_header(&header, &table, &mut cache);
//! assert_eq!(result.outcome, MatchOutcome::Matched(1));
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```
//!
//! # Runnable examples
//!
//! Each major capability has a walkthrough under `examples/`:
//!
//! * `encode_header`: 5-tuple to bits, bipolar sequence, and chunks
//! * `weight_store`: training all 8 matrices and deduplicating to 4
//! * `group_descent`: classification by energy, sign disambiguation, fallback
//! * `learning_cache`: classification cost before and after warm-up
//! * `match_trace`: matching a trace with both engines side by side
//! * `generate_trace`: deterministic trace generation and both file formats
//! * `benchmark`: a small timing run producing the CSV report
//!
//! Run one with `cargo run --release --example <name>`.
//!
//! The `phm-bench` binary exposes the benchmark harness on the command line;
//! see its `--help`.

pub mod baseline;
pub mod bench;
pub mod cli;
pub mod header;
pub mod matcher;
pub mod search;
pub mod trace;
pub mod weights;

pub use baseline::{baseline_match, compile_baseline, BaselineAlgorithm, BaselinePatternSet};
pub use bench::{
    emit_csv, run_benchmark, BenchConfig, BenchReport, CacheMode, EngineSelect, TraceSource,
};
pub use header::{
    load_rules, parse_rule_line, parse_rules, BipolarSequence, Chunk, FiveTuple, Rule, CHUNK_COUNT,
    HEADER_BITS, SEQ_LEN,
};
pub use matcher::{
    classify_first_chunk, match_header, Classification, LearningCache, MatchOutcome, MatchResult,
    RuleGroupTable,
};
pub use trace::{generate_trace, read_trace, write_trace, Trace, TraceFormat, TraceGenSpec};
pub use weights::{
    energy, outer_product, sign_sum, weight_index, WeightIndex, WeightMatrix, WeightStore,
    MATCH_ENERGY,
};
