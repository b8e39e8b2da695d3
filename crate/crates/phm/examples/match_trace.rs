//! Both engines over one small trace, side by side.
//!
//!     cargo run --example match_trace

use phm::baseline::{baseline_match, compile_baseline, BaselineAlgorithm};
use phm::matcher::{match_header, LearningCache, RuleGroupTable};
use phm::trace::TraceGenSpec;
use phm::{generate_trace, parse_rules};

fn main() {
    let rules = parse_rules(
        "1,10.0.0.1,80,10.0.0.2,443,6\n\
         2,192.168.1.1,53,8.8.8.8,53,17\n\
         3,172.16.0.9,22,172.16.0.10,22,6\n"
            .as_bytes(),
    )
    .unwrap();

    let trace = generate_trace(&TraceGenSpec {
        count: 12,
        seed: 2024,
        match_fraction: 0.5,
        rules: &rules,
    })
    .unwrap();

    let table = RuleGroupTable::compile(&rules);
    let patterns = compile_baseline(&rules, BaselineAlgorithm::BoyerMoore);
    let mut cache = LearningCache::new();

    println!("header                                        energy engine  baseline   evals");
    let mut agreements = 0;
    for header in &trace {
        let engine = match_header(header, &table, &mut cache);
        let baseline = baseline_match(header, &patterns);
        agreements += usize::from(engine.outcome == baseline.outcome);
        println!(
            "{:<45} {:<14} {:<10} {:>5}",
            header.to_csv_line(),
            engine.outcome.to_string(),
            baseline.outcome.to_string(),
            engine.energy_evals
        );
    }
    println!(
        "\nengines agreed on {agreements}/{} headers (they always do; the benchmark\n\
         harness re-checks this before timing anything)",
        trace.len()
    );
}
