//! From a 5-tuple to the bits the engines actually compare.
//!
//!     cargo run --example encode_header

use phm::weights::{sign_sum, weight_index};
use phm::FiveTuple;

fn main() {
    let header = FiveTuple::parse_csv("192.168.1.1,80,10.0.0.1,443,6").unwrap();
    println!("header             {}", header.to_csv_line());

    let bytes = header.to_bytes();
    println!("packed bytes       {bytes:?}");

    let text = header.bit_text();
    println!("bit text           {}", std::str::from_utf8(&text).unwrap());

    let seq = header.encode();
    println!("bipolar (0/1 view) {seq}");
    println!(
        "pad element        {} (always -1; 104 bits + pad = 105 = 35 chunks of 3)",
        seq.as_slice()[104]
    );

    println!("\nchunk  elements      index  sign");
    for (k, chunk) in seq.chunks().iter().enumerate() {
        println!(
            "{k:>5}  {:>2?}  {:>5}  {:>4}",
            chunk.elements(),
            weight_index(chunk).value(),
            sign_sum(chunk)
        );
    }

    let decoded = seq.decode();
    println!("\ndecoded back       {}", decoded.to_csv_line());
    assert_eq!(decoded, header);
}
