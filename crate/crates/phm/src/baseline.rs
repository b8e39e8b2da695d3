//! The reference engine: rules as literal bit text, matched by exact string
//! search.
//!
//! Every rule's 104 header bits become a `'0'`/`'1'` pattern string, and an
//! incoming header becomes a 104-character text. A rule matches when the
//! searcher finds its pattern at offset 0 spanning the whole text, which for
//! equal lengths is plain equality. Running equality through Boyer-Moore or
//! Horspool is deliberate: the point of this engine is to price signature
//! scanning the way string-search intrusion detectors do, so the energy
//! engine has something honest to race against.

use crate::header::{FiveTuple, Rule, HEADER_BITS};
use crate::matcher::{MatchOutcome, MatchResult};
use crate::search::{BoyerMoore, Horspool};

/// Which searcher backs the baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineAlgorithm {
    BoyerMoore,
    Horspool,
}

impl std::str::FromStr for BaselineAlgorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<BaselineAlgorithm, String> {
        match s {
            "boyer-moore" => Ok(BaselineAlgorithm::BoyerMoore),
            "horspool" => Ok(BaselineAlgorithm::Horspool),
            other => Err(format!(
                "unknown algorithm {other:?}, expected 'boyer-moore' or 'horspool'"
            )),
        }
    }
}

impl std::fmt::Display for BaselineAlgorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BaselineAlgorithm::BoyerMoore => "boyer-moore",
            BaselineAlgorithm::Horspool => "horspool",
        })
    }
}

#[derive(Debug, Clone)]
enum Searcher {
    BoyerMoore(BoyerMoore),
    Horspool(Horspool),
}

impl Searcher {
    fn find(&self, text: &[u8]) -> Option<usize> {
        match self {
            Searcher::BoyerMoore(s) => s.find(text),
            Searcher::Horspool(s) => s.find(text),
        }
    }

    fn pattern(&self) -> &[u8] {
        match self {
            Searcher::BoyerMoore(s) => s.pattern(),
            Searcher::Horspool(s) => s.pattern(),
        }
    }
}

/// A rule set compiled for the baseline: one prepared searcher per rule, in
/// input order.
#[derive(Debug, Clone)]
pub struct BaselinePatternSet {
    algorithm: BaselineAlgorithm,
    entries: Vec<(u32, Searcher)>,
}

impl BaselinePatternSet {
    pub fn algorithm(&self) -> BaselineAlgorithm {
        self.algorithm
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The compiled (rule id, pattern text) pairs, in input order.
    pub fn patterns(&self) -> impl Iterator<Item = (u32, &[u8])> {
        self.entries.iter().map(|(id, s)| (*id, s.pattern()))
    }
}

/// Builds the pattern set from the same rules the energy engine compiles.
/// Pattern text is the rule's 104 header bits; the pad stays out.
pub fn compile_baseline(rules: &[Rule], algorithm: BaselineAlgorithm) -> BaselinePatternSet {
    let entries = rules
        .iter()
        .map(|rule| {
            let text = rule.tuple().bit_text();
            let searcher = match algorithm {
                BaselineAlgorithm::BoyerMoore => Searcher::BoyerMoore(BoyerMoore::new(&text)),
                BaselineAlgorithm::Horspool => Searcher::Horspool(Horspool::new(&text)),
            };
            (rule.id, searcher)
        })
        .collect();
    BaselinePatternSet { algorithm, entries }
}

/// Matches one header by scanning rules in input order; a rule matches when
/// its pattern is found at offset 0 covering the full 104-character text.
pub fn baseline_match(header: &FiveTuple, set: &BaselinePatternSet) -> MatchResult {
    let text = header.bit_text();
    for (id, searcher) in &set.entries {
        if searcher.pattern().len() == HEADER_BITS && searcher.find(&text) == Some(0) {
            return MatchResult {
                outcome: MatchOutcome::Matched(*id),
                energy_evals: 0,
                cache_hit: false,
            };
        }
    }
    MatchResult {
        outcome: MatchOutcome::NoMatch,
        energy_evals: 0,
        cache_hit: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::header::parse_rule_line;

    fn rules(lines: &[&str]) -> Vec<Rule> {
        lines.iter().map(|l| parse_rule_line(l).unwrap()).collect()
    }

    #[test]
    fn patterns_are_104_binary_characters_in_input_order() {
        let rules = rules(&[
            "5,192.168.1.1,80,10.0.0.1,443,6",
            "2,10.0.0.1,80,10.0.0.2,443,17",
        ]);
        for algorithm in [BaselineAlgorithm::BoyerMoore, BaselineAlgorithm::Horspool] {
            let set = compile_baseline(&rules, algorithm);
            let ids: Vec<u32> = set.patterns().map(|(id, _)| id).collect();
            assert_eq!(ids, [5, 2]);
            for ((_, pattern), rule) in set.patterns().zip(&rules) {
                assert_eq!(pattern.len(), HEADER_BITS);
                assert!(pattern.iter().all(|&b| b == b'0' || b == b'1'));
                assert_eq!(pattern, rule.tuple().bit_text());
            }
        }
    }

    #[test]
    fn matches_exact_header_and_reports_first_rule() {
        let rules = rules(&[
            "5,192.168.1.1,80,10.0.0.1,443,6",
            "2,10.0.0.1,80,10.0.0.2,443,17",
        ]);
        let header = FiveTuple::parse_csv("10.0.0.1,80,10.0.0.2,443,17").unwrap();
        for algorithm in [BaselineAlgorithm::BoyerMoore, BaselineAlgorithm::Horspool] {
            let set = compile_baseline(&rules, algorithm);
            let result = baseline_match(&header, &set);
            assert_eq!(result.outcome, MatchOutcome::Matched(2));
            assert_eq!(result.energy_evals, 0);
        }
    }

    #[test]
    fn one_bit_difference_is_a_miss() {
        // protocol 6 vs 7: a single trailing bit
        let rules = rules(&["1,192.168.1.1,80,10.0.0.1,443,6"]);
        let header = FiveTuple::parse_csv("192.168.1.1,80,10.0.0.1,443,7").unwrap();
        for algorithm in [BaselineAlgorithm::BoyerMoore, BaselineAlgorithm::Horspool] {
            let set = compile_baseline(&rules, algorithm);
            assert_eq!(baseline_match(&header, &set).outcome, MatchOutcome::NoMatch);
        }
    }

    #[test]
    fn empty_rule_set_never_matches() {
        let set = compile_baseline(&[], BaselineAlgorithm::BoyerMoore);
        let header = FiveTuple::parse_csv("0.0.0.0,0,0.0.0.0,0,0").unwrap();
        assert_eq!(baseline_match(&header, &set).outcome, MatchOutcome::NoMatch);
    }

    #[test]
    fn algorithm_names_round_trip() {
        for algorithm in [BaselineAlgorithm::BoyerMoore, BaselineAlgorithm::Horspool] {
            assert_eq!(algorithm.to_string().parse(), Ok(algorithm));
        }
        assert!("kmp".parse::<BaselineAlgorithm>().is_err());
    }
}
