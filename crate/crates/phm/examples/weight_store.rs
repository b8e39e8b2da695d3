//! How 8 trained matrices collapse into 4 stored ones.
//!
//!     cargo run --example weight_store

use phm::weights::{outer_product, WeightIndex, WeightStore};

fn main() {
    println!("training one matrix per 3-element pattern (w = p * p^T, zero diagonal):\n");
    for index in WeightIndex::all() {
        let pattern = index.pattern();
        let w = outer_product(&pattern);
        println!(
            "pattern {} {:>2?}  ->  rows {:?} {:?} {:?}",
            index.value(),
            pattern.elements(),
            w.entries()[0],
            w.entries()[1],
            w.entries()[2],
        );
    }

    let store = WeightStore::build();
    println!(
        "\na pattern and its complement train the same matrix, so the store keeps {} of 8:",
        store.distinct_matrix_count()
    );
    println!("\nindex  complement  stored-as  sign  upper triangle");
    for index in WeightIndex::all() {
        let w = store.matrix(index);
        println!(
            "{:>5}  {:>10}  {:>9}  {:>4}  {:?}",
            index.value(),
            index.complement().value(),
            store.matrix_id(index),
            store.sign(index),
            w.upper_triangle(),
        );
    }
    println!(
        "\neach stored matrix is 3 signs (the upper triangle), and the sign column\n\
         tells the two patterns sharing a matrix apart during matching"
    );
}
