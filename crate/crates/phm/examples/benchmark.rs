//! A small benchmark run end to end: build a rule file, sweep two trace
//! sizes, print the CSV report and the speedups.
//!
//!     cargo run --release --example benchmark

use std::io::Write;

use phm::baseline::BaselineAlgorithm;
use phm::bench::{emit_csv, run_benchmark, BenchConfig, CacheMode, EngineSelect, TraceSource};
use phm::trace::TraceGenSpec;
use phm::{generate_trace, Rule};

fn main() {
    // A few hundred synthetic rules stand in for a real rule set.
    let tuples = generate_trace(&TraceGenSpec {
        count: 400,
        seed: 99,
        match_fraction: 0.0,
        rules: &[],
    })
    .unwrap();
    let rules_path = std::env::temp_dir().join("phm_example_rules.txt");
    {
        let mut file = std::fs::File::create(&rules_path).unwrap();
        for (i, tuple) in tuples.iter().enumerate() {
            writeln!(
                file,
                "{}",
                Rule::from_tuple(i as u32 + 1, tuple).to_tuple_line()
            )
            .unwrap();
        }
    }

    for count in [1000, 5000] {
        let config = BenchConfig {
            rules_path: rules_path.clone(),
            trace: TraceSource::Generate {
                count,
                seed: 1234,
                match_fraction: 0.1,
            },
            engines: EngineSelect::Both,
            repeat: 3,
            baseline_algorithm: BaselineAlgorithm::BoyerMoore,
            cache_mode: CacheMode::Shared,
            out_path: None,
        };
        let report = run_benchmark(&config).unwrap();

        println!("--- {count} packets ---");
        let mut csv = Vec::new();
        emit_csv(&report, &mut csv).unwrap();
        print!("{}", String::from_utf8(csv).unwrap());
        println!(
            "speedup: {:.2}x (baseline mean over energy-engine mean)\n",
            report.speedup().unwrap()
        );
    }

    let _ = std::fs::remove_file(rules_path);
}
