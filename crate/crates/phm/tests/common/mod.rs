#![allow(dead_code)]

use std::collections::HashSet;

use phm::trace::TraceGenSpec;
use phm::{generate_trace, FiveTuple, Rule};

/// `n` rules over distinct random 5-tuples, ids 1..=n, reproducible per seed.
pub fn random_rules(n: usize, seed: u64) -> Vec<Rule> {
    let spec = TraceGenSpec {
        count: n,
        seed,
        match_fraction: 0.0,
        rules: &[],
    };
    let headers = generate_trace(&spec).unwrap();
    let mut seen = HashSet::new();
    let mut rules = Vec::with_capacity(n);
    for header in headers {
        if seen.insert(header) {
            rules.push(Rule::from_tuple(rules.len() as u32 + 1, &header));
        }
    }
    // A collision within 104-bit random draws would shrink the set; with a
    // fixed seed this either always holds or the seed must change.
    assert_eq!(
        rules.len(),
        n,
        "random rule draw collided, pick another seed"
    );
    rules
}

/// The ground truth matcher: first rule whose full bit pattern equals the
/// header's, scanning in input order.
pub fn oracle_match(rules: &[Rule], header: &FiveTuple) -> Option<u32> {
    let bits = header.encode();
    rules.iter().find(|r| r.bits == bits).map(|r| r.id)
}
