//! Packet headers, their bipolar encoding, and rule files.
//!
//! A header is the classic IPv4 5-tuple. Concatenating its fields big-endian
//! gives a 104-bit string:
//!
//! ```text
//! | src addr | src port | dst addr | dst port | protocol |
//! |  32 bits |  16 bits |  32 bits |  16 bits |   8 bits |
//! ```
//!
//! The matching engine works on bipolar values, so each bit becomes +1 (for 1)
//! or -1 (for 0), and a single -1 pad is appended to reach 105 elements. That
//! length splits into 35 non-overlapping chunks of 3, the unit every weight
//! matrix operates on.
//!
//! Rules are headers with an id attached. A rule file holds one rule per line
//! in either of two forms:
//!
//! ```text
//! 3,192.168.1.1,80,10.0.0.1,443,6
//! 7,B:1100000010101000...        (exactly 104 '0'/'1' characters)
//! ```
//!
//! Blank lines and lines starting with `#` are skipped.

use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::net::Ipv4Addr;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

/// Bits in an encoded header, pad excluded.
pub const HEADER_BITS: usize = 104;
/// Elements in a bipolar sequence: the header bits plus one -1 pad.
pub const SEQ_LEN: usize = HEADER_BITS + 1;
/// Elements per chunk.
pub const CHUNK_LEN: usize = 3;
/// Chunks per sequence.
pub const CHUNK_COUNT: usize = SEQ_LEN / CHUNK_LEN;

/// An IPv4 5-tuple: the fields of a packet header the engine matches on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FiveTuple {
    pub src_addr: Ipv4Addr,
    pub src_port: u16,
    pub dst_addr: Ipv4Addr,
    pub dst_port: u16,
    pub protocol: u8,
}

impl FiveTuple {
    /// Packs the fields big-endian into 13 bytes, in field order.
    pub fn to_bytes(&self) -> [u8; 13] {
        let mut bytes = [0u8; 13];
        bytes[0..4].copy_from_slice(&self.src_addr.octets());
        bytes[4..6].copy_from_slice(&self.src_port.to_be_bytes());
        bytes[6..10].copy_from_slice(&self.dst_addr.octets());
        bytes[10..12].copy_from_slice(&self.dst_port.to_be_bytes());
        bytes[12] = self.protocol;
        bytes
    }

    /// Inverse of [`to_bytes`](Self::to_bytes).
    pub fn from_bytes(bytes: [u8; 13]) -> FiveTuple {
        FiveTuple {
            src_addr: Ipv4Addr::new(bytes[0], bytes[1], bytes[2], bytes[3]),
            src_port: u16::from_be_bytes([bytes[4], bytes[5]]),
            dst_addr: Ipv4Addr::new(bytes[6], bytes[7], bytes[8], bytes[9]),
            dst_port: u16::from_be_bytes([bytes[10], bytes[11]]),
            protocol: bytes[12],
        }
    }

    /// Expands the tuple into its 105-element bipolar form.
    pub fn encode(&self) -> BipolarSequence {
        let bytes = self.to_bytes();
        let mut elems = [-1i8; SEQ_LEN];
        for (i, e) in elems.iter_mut().take(HEADER_BITS).enumerate() {
            if bytes[i / 8] >> (7 - i % 8) & 1 == 1 {
                *e = 1;
            }
        }
        BipolarSequence { elems }
    }

    /// The 104 header bits as `'0'`/`'1'` bytes, most significant first.
    ///
    /// This is the text the exact string matching baseline searches.
    pub fn bit_text(&self) -> [u8; HEADER_BITS] {
        let bytes = self.to_bytes();
        let mut text = [b'0'; HEADER_BITS];
        for (i, t) in text.iter_mut().enumerate() {
            if bytes[i / 8] >> (7 - i % 8) & 1 == 1 {
                *t = b'1';
            }
        }
        text
    }

    /// Parses the `sa,sp,da,dp,proto` text form, e.g. `10.0.0.1,80,10.0.0.2,443,6`.
    pub fn parse_csv(text: &str) -> Result<FiveTuple, TupleParseError> {
        let fields: Vec<&str> = text.split(',').collect();
        if fields.len() != 5 {
            return Err(TupleParseError::FieldCount(fields.len()));
        }
        Ok(FiveTuple {
            src_addr: parse_addr(fields[0], "source")?,
            src_port: parse_port(fields[1], "source")?,
            dst_addr: parse_addr(fields[2], "destination")?,
            dst_port: parse_port(fields[3], "destination")?,
            protocol: parse_protocol(fields[4])?,
        })
    }

    /// Renders the tuple in the same `sa,sp,da,dp,proto` form `parse_csv` reads.
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.src_addr, self.src_port, self.dst_addr, self.dst_port, self.protocol
        )
    }
}

fn parse_addr(text: &str, field: &'static str) -> Result<Ipv4Addr, TupleParseError> {
    Ipv4Addr::from_str(text).map_err(|_| TupleParseError::Address {
        field,
        text: text.to_string(),
    })
}

fn parse_port(text: &str, field: &'static str) -> Result<u16, TupleParseError> {
    let value: u64 = text.parse().map_err(|_| TupleParseError::Port {
        field,
        text: text.to_string(),
    })?;
    u16::try_from(value).map_err(|_| TupleParseError::PortRange { field, value })
}

fn parse_protocol(text: &str) -> Result<u8, TupleParseError> {
    let value: u64 = text.parse().map_err(|_| TupleParseError::Protocol {
        text: text.to_string(),
    })?;
    u8::try_from(value).map_err(|_| TupleParseError::ProtocolRange { value })
}

/// Failure to read one `sa,sp,da,dp,proto` tuple.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum TupleParseError {
    #[error("expected 5 comma-separated fields (sa,sp,da,dp,proto), got {0}")]
    FieldCount(usize),
    #[error("invalid {field} address {text:?}")]
    Address { field: &'static str, text: String },
    #[error("invalid {field} port {text:?}")]
    Port { field: &'static str, text: String },
    #[error("{field} port {value} exceeds 65535")]
    PortRange { field: &'static str, value: u64 },
    #[error("invalid protocol {text:?}")]
    Protocol { text: String },
    #[error("protocol {value} exceeds 255")]
    ProtocolRange { value: u64 },
}

/// A 105-element sequence over {-1, +1}: 104 header bits plus the -1 pad.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BipolarSequence {
    elems: [i8; SEQ_LEN],
}

impl BipolarSequence {
    /// Wraps a raw element array. Panics unless every element is -1 or +1.
    pub fn from_elements(elems: [i8; SEQ_LEN]) -> BipolarSequence {
        assert!(
            elems.iter().all(|&e| e == 1 || e == -1),
            "bipolar elements must be -1 or +1"
        );
        BipolarSequence { elems }
    }

    pub fn as_slice(&self) -> &[i8; SEQ_LEN] {
        &self.elems
    }

    /// Splits the sequence into its 35 consecutive 3-element chunks.
    pub fn chunks(&self) -> [Chunk; CHUNK_COUNT] {
        std::array::from_fn(|k| {
            Chunk([
                self.elems[CHUNK_LEN * k],
                self.elems[CHUNK_LEN * k + 1],
                self.elems[CHUNK_LEN * k + 2],
            ])
        })
    }

    /// Recovers the 5-tuple from the first 104 elements. The pad is ignored.
    pub fn decode(&self) -> FiveTuple {
        let mut bytes = [0u8; 13];
        for i in 0..HEADER_BITS {
            if self.elems[i] == 1 {
                bytes[i / 8] |= 1 << (7 - i % 8);
            }
        }
        FiveTuple::from_bytes(bytes)
    }

    fn from_bit_text(text: &str) -> Result<BipolarSequence, RuleParseError> {
        let chars: Vec<char> = text.chars().collect();
        if chars.len() != HEADER_BITS {
            return Err(RuleParseError::RawLength { found: chars.len() });
        }
        let mut elems = [-1i8; SEQ_LEN];
        for (pos, &ch) in chars.iter().enumerate() {
            match ch {
                '0' => {}
                '1' => elems[pos] = 1,
                _ => return Err(RuleParseError::RawChar { ch, pos }),
            }
        }
        Ok(BipolarSequence { elems })
    }
}

impl fmt::Display for BipolarSequence {
    /// All 105 elements as `0`/`1` text, pad included.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &e in &self.elems {
            f.write_str(if e == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BipolarSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BipolarSequence({self})")
    }
}

/// Three consecutive bipolar elements, the unit the energy function scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Chunk(pub(crate) [i8; CHUNK_LEN]);

impl Chunk {
    /// Wraps three elements. Panics unless each is -1 or +1.
    pub fn new(elems: [i8; CHUNK_LEN]) -> Chunk {
        assert!(
            elems.iter().all(|&e| e == 1 || e == -1),
            "chunk elements must be -1 or +1"
        );
        Chunk(elems)
    }

    pub fn elements(&self) -> [i8; CHUNK_LEN] {
        self.0
    }
}

impl std::ops::Index<usize> for Chunk {
    type Output = i8;

    fn index(&self, i: usize) -> &i8 {
        &self.0[i]
    }
}

impl std::ops::Neg for Chunk {
    type Output = Chunk;

    /// The complement pattern: every element flipped.
    fn neg(self) -> Chunk {
        Chunk([-self.0[0], -self.0[1], -self.0[2]])
    }
}

/// One intrusion rule: an id plus the encoded header it stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub id: u32,
    pub bits: BipolarSequence,
}

impl Rule {
    pub fn from_tuple(id: u32, tuple: &FiveTuple) -> Rule {
        Rule {
            id,
            bits: tuple.encode(),
        }
    }

    /// The 5-tuple this rule matches.
    pub fn tuple(&self) -> FiveTuple {
        self.bits.decode()
    }

    /// Renders the rule in the `id,sa,sp,da,dp,proto` form.
    pub fn to_tuple_line(&self) -> String {
        format!("{},{}", self.id, self.tuple().to_csv_line())
    }

    /// Renders the rule in the raw `id,B:<bits>` form (104 characters, no pad).
    pub fn to_raw_line(&self) -> String {
        let text = self.bits.to_string();
        format!("{},B:{}", self.id, &text[..HEADER_BITS])
    }
}

/// Failure to read a single rule line.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum RuleParseError {
    #[error("expected 'id,sa,sp,da,dp,proto' or 'id,B:<bits>', got {found} fields")]
    Form { found: usize },
    #[error("invalid rule id {text:?}")]
    Id { text: String },
    #[error("raw bit string must be exactly 104 characters, got {found}")]
    RawLength { found: usize },
    #[error("raw bit string holds {ch:?} at position {pos}, expected '0' or '1'")]
    RawChar { ch: char, pos: usize },
    #[error(transparent)]
    Tuple(#[from] TupleParseError),
}

/// Parses one rule line in either text form.
pub fn parse_rule_line(line: &str) -> Result<Rule, RuleParseError> {
    let (id_text, rest) = line.split_once(',').ok_or(RuleParseError::Form {
        found: if line.is_empty() { 0 } else { 1 },
    })?;
    let id: u32 = id_text.parse().map_err(|_| RuleParseError::Id {
        text: id_text.to_string(),
    })?;
    let bits = match rest.strip_prefix("B:") {
        Some(raw) => BipolarSequence::from_bit_text(raw)?,
        None => FiveTuple::parse_csv(rest)?.encode(),
    };
    Ok(Rule { id, bits })
}

/// Failure to load a rule set.
#[derive(Debug, Error)]
pub enum RuleSetError {
    #[error("line {line}: {source}")]
    Parse { line: usize, source: RuleParseError },
    #[error("line {line}: rule id {id} already defined on line {first_line}")]
    DuplicateId {
        line: usize,
        id: u32,
        first_line: usize,
    },
    #[error("line {line}: rule {id} repeats the bit pattern of rule {first_id}")]
    DuplicateBits { line: usize, id: u32, first_id: u32 },
    #[error("failed to read rule file: {0}")]
    Io(#[from] std::io::Error),
}

/// Reads rules from any line source, in file order.
///
/// Rejects duplicate ids and duplicate bit patterns; matching scans rules in
/// the order they appear here, so order is preserved.
pub fn parse_rules<R: BufRead>(reader: R) -> Result<Vec<Rule>, RuleSetError> {
    let mut rules = Vec::new();
    let mut ids: HashMap<u32, usize> = HashMap::new();
    let mut patterns: HashMap<BipolarSequence, u32> = HashMap::new();
    for (index, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = index + 1;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let rule = parse_rule_line(text).map_err(|source| RuleSetError::Parse {
            line: line_no,
            source,
        })?;
        if let Some(&first_line) = ids.get(&rule.id) {
            return Err(RuleSetError::DuplicateId {
                line: line_no,
                id: rule.id,
                first_line,
            });
        }
        if let Some(&first_id) = patterns.get(&rule.bits) {
            return Err(RuleSetError::DuplicateBits {
                line: line_no,
                id: rule.id,
                first_id,
            });
        }
        ids.insert(rule.id, line_no);
        patterns.insert(rule.bits, rule.id);
        rules.push(rule);
    }
    Ok(rules)
}

/// Reads a rule file. See [`parse_rules`].
pub fn load_rules(path: impl AsRef<Path>) -> Result<Vec<Rule>, RuleSetError> {
    let file = File::open(path)?;
    parse_rules(BufReader::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple(sa: &str, sp: u16, da: &str, dp: u16, proto: u8) -> FiveTuple {
        FiveTuple {
            src_addr: sa.parse().unwrap(),
            src_port: sp,
            dst_addr: da.parse().unwrap(),
            dst_port: dp,
            protocol: proto,
        }
    }

    /// Bit expansion computed per field with `format!("{:08b}")`, independent
    /// of the encoder under test.
    fn formatted_bits(t: &FiveTuple) -> String {
        let mut s = String::new();
        for o in t.src_addr.octets() {
            s += &format!("{o:08b}");
        }
        s += &format!("{:016b}", t.src_port);
        for o in t.dst_addr.octets() {
            s += &format!("{o:08b}");
        }
        s += &format!("{:016b}", t.dst_port);
        s += &format!("{:08b}", t.protocol);
        s
    }

    #[test]
    fn encode_all_zero_tuple_gives_all_minus_one() {
        let seq = tuple("0.0.0.0", 0, "0.0.0.0", 0, 0).encode();
        assert!(seq.as_slice().iter().all(|&e| e == -1));
    }

    #[test]
    fn encode_all_max_tuple_gives_plus_ones_then_pad() {
        let seq = tuple("255.255.255.255", 65535, "255.255.255.255", 65535, 255).encode();
        assert!(seq.as_slice()[..HEADER_BITS].iter().all(|&e| e == 1));
        assert_eq!(seq.as_slice()[HEADER_BITS], -1);
    }

    #[test]
    fn encode_known_tuple_matches_frozen_expansion() {
        let t = tuple("192.168.1.1", 80, "10.0.0.1", 443, 6);
        let frozen = concat!(
            "11000000101010000000000100000001", // 192.168.1.1
            "0000000001010000",                 // 80
            "00001010000000000000000000000001", // 10.0.0.1
            "0000000110111011",                 // 443
            "00000110",                         // 6
            "0",                                // pad
        );
        assert_eq!(t.encode().to_string(), frozen);
        assert_eq!(formatted_bits(&t), frozen[..HEADER_BITS]);
    }

    #[test]
    fn bit_text_agrees_with_encoding() {
        let t = tuple("172.16.254.3", 8080, "192.0.2.99", 53, 17);
        let text = t.bit_text();
        assert_eq!(std::str::from_utf8(&text).unwrap(), formatted_bits(&t));
    }

    #[test]
    fn pad_element_is_always_minus_one() {
        for t in [
            tuple("0.0.0.0", 0, "0.0.0.0", 0, 0),
            tuple("255.255.255.255", 65535, "255.255.255.255", 65535, 255),
            tuple("8.8.8.8", 53, "1.1.1.1", 53, 17),
        ] {
            assert_eq!(t.encode().as_slice()[HEADER_BITS], -1);
        }
    }

    #[test]
    fn decode_inverts_encode() {
        let t = tuple("198.51.100.7", 32768, "203.0.113.200", 1, 132);
        assert_eq!(t.encode().decode(), t);
    }

    #[test]
    fn chunks_partition_the_sequence() {
        let seq = tuple("192.168.1.1", 80, "10.0.0.1", 443, 6).encode();
        let chunks = seq.chunks();
        assert_eq!(chunks.len(), CHUNK_COUNT);
        let flat: Vec<i8> = chunks.iter().flat_map(|c| c.elements()).collect();
        assert_eq!(&flat[..], seq.as_slice());
        assert_eq!(chunks[0].elements(), [1, 1, -1]);
    }

    #[test]
    fn parse_tuple_rule_line() {
        let rule = parse_rule_line("3,192.168.1.1,80,10.0.0.1,443,6").unwrap();
        assert_eq!(rule.id, 3);
        assert_eq!(rule.tuple(), tuple("192.168.1.1", 80, "10.0.0.1", 443, 6));
        assert_eq!(rule.bits.chunks()[0].elements(), [1, 1, -1]);
    }

    #[test]
    fn parse_raw_rule_line() {
        let t = tuple("192.168.1.1", 80, "10.0.0.1", 443, 6);
        let line = format!("9,B:{}", formatted_bits(&t));
        let rule = parse_rule_line(&line).unwrap();
        assert_eq!(rule.id, 9);
        assert_eq!(rule.bits, t.encode());
    }

    #[test]
    fn rule_lines_round_trip_in_both_forms() {
        let rule = parse_rule_line("41,203.0.113.9,4444,198.51.100.23,22,6").unwrap();
        assert_eq!(parse_rule_line(&rule.to_tuple_line()).unwrap(), rule);
        assert_eq!(parse_rule_line(&rule.to_raw_line()).unwrap(), rule);
    }

    #[test]
    fn parse_rejects_bad_address() {
        let err = parse_rule_line("1,300.0.0.1,80,10.0.0.1,443,6").unwrap_err();
        assert_eq!(
            err,
            RuleParseError::Tuple(TupleParseError::Address {
                field: "source",
                text: "300.0.0.1".to_string(),
            })
        );
    }

    #[test]
    fn parse_rejects_out_of_range_port_and_protocol() {
        assert_eq!(
            parse_rule_line("1,10.0.0.1,65536,10.0.0.2,443,6").unwrap_err(),
            RuleParseError::Tuple(TupleParseError::PortRange {
                field: "source",
                value: 65536,
            })
        );
        assert_eq!(
            parse_rule_line("1,10.0.0.1,80,10.0.0.2,443,256").unwrap_err(),
            RuleParseError::Tuple(TupleParseError::ProtocolRange { value: 256 })
        );
    }

    #[test]
    fn parse_rejects_malformed_raw_strings() {
        assert_eq!(
            parse_rule_line("1,B:0101").unwrap_err(),
            RuleParseError::RawLength { found: 4 }
        );
        let mut bits = "01".repeat(HEADER_BITS / 2);
        bits.replace_range(10..11, "x");
        assert_eq!(
            parse_rule_line(&format!("1,B:{bits}")).unwrap_err(),
            RuleParseError::RawChar { ch: 'x', pos: 10 }
        );
    }

    #[test]
    fn parse_rejects_bad_id_and_wrong_shape() {
        assert!(matches!(
            parse_rule_line("x,10.0.0.1,80,10.0.0.2,443,6").unwrap_err(),
            RuleParseError::Id { .. }
        ));
        assert!(matches!(
            parse_rule_line("5,10.0.0.1,80").unwrap_err(),
            RuleParseError::Tuple(TupleParseError::FieldCount(2))
        ));
        assert!(matches!(
            parse_rule_line("justoneword").unwrap_err(),
            RuleParseError::Form { found: 1 }
        ));
    }

    #[test]
    fn parse_rules_skips_comments_and_blanks_and_keeps_order() {
        let text = "# rule set\n\n1,10.0.0.1,80,10.0.0.2,443,6\n  \n# more\n2,10.0.0.3,81,10.0.0.4,444,17\n";
        let rules = parse_rules(text.as_bytes()).unwrap();
        assert_eq!(rules.len(), 2);
        assert_eq!(rules[0].id, 1);
        assert_eq!(rules[1].id, 2);
    }

    #[test]
    fn parse_rules_reports_duplicate_id_with_both_lines() {
        let text = "1,10.0.0.1,80,10.0.0.2,443,6\n1,10.0.0.3,81,10.0.0.4,444,17\n";
        match parse_rules(text.as_bytes()).unwrap_err() {
            RuleSetError::DuplicateId {
                line,
                id,
                first_line,
            } => {
                assert_eq!((line, id, first_line), (2, 1, 1));
            }
            other => panic!("unexpected error: {other:?}"),
        }
    }

    #[test]
    fn parse_rules_reports_duplicate_bits_with_both_ids() {
        let tuple_line = "10.0.0.1,80,10.0.0.2,443,6";
        let raw = formatted_bits(&FiveTuple::parse_csv(tuple_line).unwrap());
        let text = format!("1,{tuple_line}\n2,B:{raw}\n");
        match parse_rules(text.as_bytes()).unwrap_err() {
            RuleSetError::DuplicateBits { line, id, first_id } => {
                assert_eq!((line, id, first_id), (2, 2, 1));
            }
            other => panic!("unexpected error: {other:?}"),
        }
    }

    #[test]
    fn parse_rules_reports_line_numbers_counting_comments() {
        let text = "# header\n1,10.0.0.1,80,10.0.0.2,443,6\nbogus line\n";
        match parse_rules(text.as_bytes()).unwrap_err() {
            RuleSetError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error: {other:?}"),
        }
    }

    #[test]
    fn csv_tuple_round_trips() {
        let t = tuple("10.0.0.1", 80, "10.0.0.2", 443, 6);
        assert_eq!(t.to_csv_line(), "10.0.0.1,80,10.0.0.2,443,6");
        assert_eq!(FiveTuple::parse_csv(&t.to_csv_line()).unwrap(), t);
    }
}
