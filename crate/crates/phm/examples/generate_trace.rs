//! Deterministic trace generation and the two trace file formats.
//!
//!     cargo run --example generate_trace

use phm::trace::{read_trace, write_trace, TraceFormat, TraceGenSpec};
use phm::{generate_trace, parse_rules};

fn main() {
    let rules = parse_rules(
        "1,10.0.0.1,80,10.0.0.2,443,6\n\
         2,192.168.1.1,53,8.8.8.8,53,17\n"
            .as_bytes(),
    )
    .unwrap();

    let spec = TraceGenSpec {
        count: 1000,
        seed: 7,
        match_fraction: 0.3,
        rules: &rules,
    };
    let headers = generate_trace(&spec).unwrap();
    let again = generate_trace(&spec).unwrap();
    assert_eq!(headers, again);
    println!(
        "generated {} headers (seed {}, match fraction {}); same seed, same trace",
        headers.len(),
        spec.seed,
        spec.match_fraction
    );

    let rule_tuples: Vec<_> = rules.iter().map(|r| r.tuple()).collect();
    let matching = headers.iter().filter(|h| rule_tuples.contains(h)).count();
    println!("exactly floor(1000 * 0.3) = {matching} headers match a rule");

    let dir = std::env::temp_dir();
    let binary_path = dir.join("phm_example_trace.pht");
    let csv_path = dir.join("phm_example_trace.csv");
    write_trace(&binary_path, &headers, TraceFormat::Pht1).unwrap();
    write_trace(&csv_path, &headers, TraceFormat::Csv).unwrap();
    println!(
        "\nwrote {} ({} bytes: 12-byte preamble + 1000 x 13-byte records)",
        binary_path.display(),
        std::fs::metadata(&binary_path).unwrap().len()
    );
    println!(
        "wrote {} ({} bytes of text)",
        csv_path.display(),
        std::fs::metadata(&csv_path).unwrap().len()
    );

    // Reading sniffs the format from the magic bytes.
    let from_binary = read_trace(&binary_path).unwrap();
    let from_csv = read_trace(&csv_path).unwrap();
    assert_eq!(from_binary.format, TraceFormat::Pht1);
    assert_eq!(from_csv.format, TraceFormat::Csv);
    assert_eq!(from_binary.headers, headers);
    assert_eq!(from_csv.headers, headers);
    println!("\nread both back: formats sniffed correctly, contents identical");

    let _ = std::fs::remove_file(binary_path);
    let _ = std::fs::remove_file(csv_path);
}
