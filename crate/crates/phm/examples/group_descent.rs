//! Classifying a first chunk by walking the group ladder from 7 down to 1.
//!
//!     cargo run --example group_descent

use phm::matcher::{classify_first_chunk, LearningCache, RuleGroupTable};
use phm::weights::{energy, sign_sum, WeightIndex, WeightStore, MATCH_ENERGY};
use phm::Chunk;

fn walk(x: Chunk, store: &WeightStore) {
    println!(
        "classifying chunk {:>2?} (sign {:+})",
        x.elements(),
        sign_sum(&x)
    );
    for value in (1..8u8).rev() {
        let group = WeightIndex::new(value);
        let e = energy(&x, store.matrix(group));
        let sign_ok = sign_sum(&x) == store.sign(group);
        let verdict = if e == MATCH_ENERGY && sign_ok {
            "match, stop"
        } else if e == MATCH_ENERGY {
            "minimum energy but wrong sign (complement), keep going"
        } else {
            "no"
        };
        println!(
            "  group {value}: energy {e:>2}, sign {:+}  ->  {verdict}",
            store.sign(group)
        );
        if e == MATCH_ENERGY && sign_ok {
            return;
        }
    }
    println!("  no group matched: fall back to group 0");
}

fn main() {
    let store = WeightStore::build();

    // Stops at group 4 after four energy evaluations.
    walk(Chunk::new([1, -1, -1]), &store);
    println!();

    // Reaches minimum energy at group 4 (the complement) but the sign says
    // otherwise; the true home is group 3.
    walk(Chunk::new([-1, 1, 1]), &store);
    println!();

    // Matches nothing on the way down; group 0 is the fallback.
    walk(Chunk::new([-1, -1, -1]), &store);

    // classify_first_chunk does the same walk and counts its work.
    let table = RuleGroupTable::compile(&[]);
    let mut cache = LearningCache::new();
    println!("\nclassify_first_chunk agrees and reports the cost:");
    for x in [
        Chunk::new([1, -1, -1]),
        Chunk::new([-1, 1, 1]),
        Chunk::new([-1, -1, -1]),
    ] {
        let c = classify_first_chunk(&x, &table, &mut cache);
        println!(
            "  {:>2?} -> group {} in {} energy evaluations",
            x.elements(),
            c.group.value(),
            c.energy_evals
        );
    }
}
