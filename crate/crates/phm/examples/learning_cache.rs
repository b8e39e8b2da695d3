//! What the learning cache saves: classification cost per header, before and
//! after the cache has seen each first-chunk pattern.
//!
//!     cargo run --example learning_cache

use phm::matcher::{match_header, LearningCache, RuleGroupTable};
use phm::{parse_rules, FiveTuple};

fn main() {
    let rules = parse_rules(
        "1,10.0.0.1,80,10.0.0.2,443,6\n\
         2,192.168.1.1,53,8.8.8.8,53,17\n\
         3,224.0.0.5,0,224.0.0.6,0,89\n"
            .as_bytes(),
    )
    .unwrap();
    let table = RuleGroupTable::compile(&rules);
    let mut cache = LearningCache::new();

    // The same short burst of traffic, twice over.
    let burst = [
        "10.0.0.1,80,10.0.0.2,443,6",
        "192.168.1.1,53,8.8.8.8,53,17",
        "10.0.0.1,80,10.0.0.2,443,17", // near miss: differs in protocol
        "224.0.0.5,0,224.0.0.6,0,89",
        "55.1.2.3,1024,10.9.8.7,22,6",
    ];

    println!("header                          outcome    evals  cache");
    for pass in 1..=2 {
        println!("--- pass {pass} ---");
        for text in burst {
            let header = FiveTuple::parse_csv(text).unwrap();
            let result = match_header(&header, &table, &mut cache);
            println!(
                "{text:<31} {:<10} {:>5}  {}",
                result.outcome.to_string(),
                result.energy_evals,
                if result.cache_hit { "hit" } else { "miss" }
            );
        }
    }
    println!(
        "\ncache now remembers {} of 8 first-chunk patterns; a full cache means\n\
         classification never costs another energy evaluation",
        cache.len()
    );
}
