//! Packet trace files: reading, writing, and deterministic generation.
//!
//! Two interchangeable formats carry a list of headers:
//!
//! * **PHT1 binary**: magic `"PHT1"`, a big-endian u64 record count, then
//!   13-byte records laid out like [`FiveTuple::to_bytes`]:
//!
//!   ```text
//!   offset  0: 'P' 'H' 'T' '1'
//!   offset  4: record count, u64 big-endian
//!   offset 12: records, 13 bytes each
//!              | sa (4, BE) | sp (2, BE) | da (4, BE) | dp (2, BE) | proto (1) |
//!   ```
//!
//! * **CSV text**: one `sa,sp,da,dp,proto` line per header, dotted-quad
//!   addresses, LF line endings, `#` comment lines allowed.
//!
//! [`read_trace`] sniffs the format by the magic bytes.
//!
//! Generation is reproducible across platforms: all randomness comes from a
//! ChaCha8 stream seeded with a single u64, consumed by the explicit
//! procedures below (rejection sampling for bounded draws, Fisher-Yates for
//! the shuffle), so a (seed, count, fraction, rule set) tuple always yields
//! the same trace.

use std::fs;
use std::io::Write;
use std::path::Path;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::header::{FiveTuple, Rule, TupleParseError};

/// Leading magic of the binary format.
pub const PHT1_MAGIC: [u8; 4] = *b"PHT1";

const PREAMBLE_LEN: usize = 12;
const RECORD_LEN: usize = 13;

/// On-disk trace format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceFormat {
    Pht1,
    Csv,
}

/// A list of headers plus the format it was read in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub headers: Vec<FiveTuple>,
    pub format: TraceFormat,
}

/// Failure to read or parse a trace.
#[derive(Debug, Error)]
pub enum TraceError {
    #[error("truncated file: expected {expected} bytes at offset {offset}, found {found}")]
    Truncated {
        offset: usize,
        expected: usize,
        found: usize,
    },
    #[error("bad magic {found:?}, expected \"PHT1\"")]
    BadMagic { found: [u8; 4] },
    #[error("record count mismatch: preamble declares {declared}, file holds {actual}")]
    CountMismatch { declared: u64, actual: u64 },
    #[error("line {line}: {source}")]
    Csv {
        line: usize,
        source: TupleParseError,
    },
    #[error("not a trace: no PHT1 magic and not UTF-8 text (bad byte at offset {offset})")]
    UnknownFormat { offset: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Decodes a PHT1 byte buffer.
pub fn parse_pht1(bytes: &[u8]) -> Result<Vec<FiveTuple>, TraceError> {
    if bytes.len() < 4 {
        return Err(TraceError::Truncated {
            offset: 0,
            expected: 4,
            found: bytes.len(),
        });
    }
    if bytes[0..4] != PHT1_MAGIC {
        return Err(TraceError::BadMagic {
            found: [bytes[0], bytes[1], bytes[2], bytes[3]],
        });
    }
    if bytes.len() < PREAMBLE_LEN {
        return Err(TraceError::Truncated {
            offset: 4,
            expected: 8,
            found: bytes.len() - 4,
        });
    }
    let declared = u64::from_be_bytes(bytes[4..12].try_into().unwrap());
    let body = &bytes[PREAMBLE_LEN..];
    let whole_records = body.len() / RECORD_LEN;
    let leftover = body.len() % RECORD_LEN;
    if leftover != 0 {
        return Err(TraceError::Truncated {
            offset: PREAMBLE_LEN + whole_records * RECORD_LEN,
            expected: RECORD_LEN,
            found: leftover,
        });
    }
    if whole_records as u64 != declared {
        return Err(TraceError::CountMismatch {
            declared,
            actual: whole_records as u64,
        });
    }
    Ok(body
        .chunks_exact(RECORD_LEN)
        .map(|record| FiveTuple::from_bytes(record.try_into().unwrap()))
        .collect())
}

/// Encodes headers as a PHT1 byte buffer.
pub fn encode_pht1(headers: &[FiveTuple]) -> Vec<u8> {
    let mut bytes = Vec::with_capacity(PREAMBLE_LEN + headers.len() * RECORD_LEN);
    bytes.extend_from_slice(&PHT1_MAGIC);
    bytes.extend_from_slice(&(headers.len() as u64).to_be_bytes());
    for header in headers {
        bytes.extend_from_slice(&header.to_bytes());
    }
    bytes
}

/// Decodes CSV trace text. Blank lines and `#` comments are skipped; line
/// numbers in errors count every line.
pub fn parse_csv(text: &str) -> Result<Vec<FiveTuple>, TraceError> {
    let mut headers = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let header = FiveTuple::parse_csv(line).map_err(|source| TraceError::Csv {
            line: index + 1,
            source,
        })?;
        headers.push(header);
    }
    Ok(headers)
}

/// Encodes headers as CSV trace text with LF line endings.
pub fn encode_csv(headers: &[FiveTuple]) -> String {
    let mut text = String::new();
    for header in headers {
        text.push_str(&header.to_csv_line());
        text.push('\n');
    }
    text
}

/// Reads a trace file, sniffing PHT1 by its magic and falling back to CSV.
pub fn read_trace(path: impl AsRef<Path>) -> Result<Trace, TraceError> {
    let bytes = fs::read(path)?;
    if bytes.len() >= 4 && bytes[0..4] == PHT1_MAGIC {
        return Ok(Trace {
            headers: parse_pht1(&bytes)?,
            format: TraceFormat::Pht1,
        });
    }
    let text = std::str::from_utf8(&bytes).map_err(|e| TraceError::UnknownFormat {
        offset: e.valid_up_to(),
    })?;
    Ok(Trace {
        headers: parse_csv(text)?,
        format: TraceFormat::Csv,
    })
}

/// Writes a trace file in the chosen format.
pub fn write_trace(
    path: impl AsRef<Path>,
    headers: &[FiveTuple],
    format: TraceFormat,
) -> Result<(), TraceError> {
    let mut file = fs::File::create(path)?;
    match format {
        TraceFormat::Pht1 => file.write_all(&encode_pht1(headers))?,
        TraceFormat::Csv => file.write_all(encode_csv(headers).as_bytes())?,
    }
    file.flush()?;
    Ok(())
}

/// Recipe for a synthetic trace.
#[derive(Debug, Clone)]
pub struct TraceGenSpec<'a> {
    /// Total headers to produce.
    pub count: usize,
    /// Seed for the ChaCha8 stream; equal seeds give equal traces.
    pub seed: u64,
    /// Fraction of headers copied from rules: `floor(count * match_fraction)`
    /// of them, the rest guaranteed non-matching. Must lie in [0, 1].
    pub match_fraction: f64,
    /// Rules that matching headers are drawn from.
    pub rules: &'a [Rule],
}

/// Invalid [`TraceGenSpec`].
#[derive(Debug, Error, PartialEq)]
pub enum TraceGenError {
    #[error("match fraction {0} is outside [0, 1]")]
    FractionRange(f64),
    #[error("a positive match fraction needs a non-empty rule set")]
    EmptyRules,
}

/// Draws uniformly from `0..n` by rejection: values below `2^64 mod n` are
/// discarded so every residue is equally likely.
fn uniform_below(rng: &mut ChaCha8Rng, n: u64) -> u64 {
    debug_assert!(n > 0);
    let threshold = n.wrapping_neg() % n;
    loop {
        let value = rng.next_u64();
        if value >= threshold {
            return value % n;
        }
    }
}

/// One header from five field draws, each taking the high bits of a fresh
/// 32-bit output.
fn random_tuple(rng: &mut ChaCha8Rng) -> FiveTuple {
    FiveTuple {
        src_addr: rng.next_u32().into(),
        src_port: (rng.next_u32() >> 16) as u16,
        dst_addr: rng.next_u32().into(),
        dst_port: (rng.next_u32() >> 16) as u16,
        protocol: (rng.next_u32() >> 24) as u8,
    }
}

/// Generates a reproducible trace.
///
/// `floor(count * match_fraction)` headers are uniform draws from the rule
/// set (with replacement); the rest are uniform random tuples, redrawn if
/// they collide with any rule. A final Fisher-Yates pass shuffles the whole
/// trace, so matching headers sit at random positions.
pub fn generate_trace(spec: &TraceGenSpec) -> Result<Vec<FiveTuple>, TraceGenError> {
    if !(0.0..=1.0).contains(&spec.match_fraction) {
        return Err(TraceGenError::FractionRange(spec.match_fraction));
    }
    let matching = (spec.count as f64 * spec.match_fraction).floor() as usize;
    if matching > 0 && spec.rules.is_empty() {
        return Err(TraceGenError::EmptyRules);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut headers = Vec::with_capacity(spec.count);
    for _ in 0..matching {
        let pick = uniform_below(&mut rng, spec.rules.len() as u64) as usize;
        headers.push(spec.rules[pick].tuple());
    }

    let rule_keys: std::collections::HashSet<[u8; 13]> =
        spec.rules.iter().map(|r| r.tuple().to_bytes()).collect();
    while headers.len() < spec.count {
        let candidate = random_tuple(&mut rng);
        if rule_keys.contains(&candidate.to_bytes()) {
            continue;
        }
        headers.push(candidate);
    }

    for i in (1..headers.len()).rev() {
        let j = uniform_below(&mut rng, (i + 1) as u64) as usize;
        headers.swap(i, j);
    }
    Ok(headers)
}
