//! The energy-function matching engine.
//!
//! Rules compile into per-chunk weight indices and signs, grouped by the
//! weight index of their first chunk. An incoming header is classified by
//! running its first chunk down the group representatives from 7 to 1 until
//! the energy test succeeds (group 0 is the fallback), and only that group's
//! rules are scanned. A small learning cache remembers first chunks it has
//! already classified, so a stream that keeps hitting the same prefixes stops
//! paying for classification at all.

use crate::header::{Chunk, FiveTuple, Rule, CHUNK_COUNT};
use crate::weights::{sign_sum, weight_index, WeightIndex, WeightStore, CHUNK_PATTERN_COUNT};

/// A rule lowered to what the engine compares: one weight index and one sign
/// per chunk.
#[derive(Debug, Clone)]
pub struct CompiledRule {
    id: u32,
    weights: [WeightIndex; CHUNK_COUNT],
    signs: [i8; CHUNK_COUNT],
}

impl CompiledRule {
    pub fn compile(rule: &Rule) -> CompiledRule {
        let chunks = rule.bits.chunks();
        CompiledRule {
            id: rule.id,
            weights: std::array::from_fn(|k| weight_index(&chunks[k])),
            signs: std::array::from_fn(|k| sign_sum(&chunks[k])),
        }
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn weights(&self) -> &[WeightIndex; CHUNK_COUNT] {
        &self.weights
    }

    pub fn signs(&self) -> &[i8; CHUNK_COUNT] {
        &self.signs
    }

    /// The group this rule lands in: the weight index of its first chunk.
    pub fn group(&self) -> WeightIndex {
        self.weights[0]
    }
}

/// All rules, compiled and bucketed into the 8 first-chunk groups, plus the
/// weight store they are matched against.
#[derive(Debug, Clone)]
pub struct RuleGroupTable {
    groups: [Vec<CompiledRule>; CHUNK_PATTERN_COUNT],
    store: WeightStore,
    rule_count: usize,
}

impl RuleGroupTable {
    /// Compiles a rule set. Within each group, rules keep their input order.
    pub fn compile(rules: &[Rule]) -> RuleGroupTable {
        let mut groups: [Vec<CompiledRule>; CHUNK_PATTERN_COUNT] = Default::default();
        for rule in rules {
            let compiled = CompiledRule::compile(rule);
            groups[compiled.group().as_usize()].push(compiled);
        }
        RuleGroupTable {
            groups,
            store: WeightStore::build(),
            rule_count: rules.len(),
        }
    }

    pub fn group(&self, index: WeightIndex) -> &[CompiledRule] {
        &self.groups[index.as_usize()]
    }

    pub fn store(&self) -> &WeightStore {
        &self.store
    }

    pub fn rule_count(&self) -> usize {
        self.rule_count
    }

    pub fn is_empty(&self) -> bool {
        self.rule_count == 0
    }
}

/// Remembers the group of first chunks already classified.
///
/// Only 8 chunk patterns exist, so the cache is a fixed table of 8 slots and
/// can never evict. A full cache means classification is free from then on.
#[derive(Debug, Clone, Default)]
pub struct LearningCache {
    groups: [Option<WeightIndex>; CHUNK_PATTERN_COUNT],
    len: usize,
}

impl LearningCache {
    pub fn new() -> LearningCache {
        LearningCache::default()
    }

    /// The remembered group for `pattern`, if it has been classified before.
    pub fn lookup(&self, pattern: &Chunk) -> Option<WeightIndex> {
        self.groups[weight_index(pattern).as_usize()]
    }

    /// Records a classification result. Inserting the same pattern again is a
    /// no-op; a group that disagrees with the pattern's own index is a bug in
    /// the caller.
    pub fn insert(&mut self, pattern: &Chunk, group: WeightIndex) {
        let slot = weight_index(pattern);
        assert_eq!(
            group, slot,
            "cache insert: group {group} does not classify pattern {slot}"
        );
        if self.groups[slot.as_usize()].is_none() {
            self.groups[slot.as_usize()] = Some(group);
            self.len += 1;
        }
    }

    /// How many distinct patterns have been classified.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// True once all 8 patterns are cached.
    pub fn is_full(&self) -> bool {
        self.len == CHUNK_PATTERN_COUNT
    }
}

/// Outcome of classifying one first chunk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub group: WeightIndex,
    /// Energy evaluations spent on the descent; 0 on a cache hit.
    pub energy_evals: u32,
    pub cache_hit: bool,
}

/// Finds the group whose representative pattern matches `x`.
///
/// On a cache miss this walks groups 7 down to 1, spending one energy
/// evaluation per group, and falls back to group 0 when none match. The
/// result is recorded in the cache before returning.
pub fn classify_first_chunk(
    x: &Chunk,
    table: &RuleGroupTable,
    cache: &mut LearningCache,
) -> Classification {
    if let Some(group) = cache.lookup(x) {
        return Classification {
            group,
            energy_evals: 0,
            cache_hit: true,
        };
    }
    let store = table.store();
    let mut energy_evals = 0;
    let mut group = WeightIndex::new(0);
    for value in (1..CHUNK_PATTERN_COUNT as u8).rev() {
        let candidate = WeightIndex::new(value);
        energy_evals += 1;
        if store.chunk_matches(x, candidate, store.sign(candidate)) {
            group = candidate;
            break;
        }
    }
    cache.insert(x, group);
    Classification {
        group,
        energy_evals,
        cache_hit: false,
    }
}

/// What a match attempt concluded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatchOutcome {
    /// The id of the first rule whose every chunk matched.
    Matched(u32),
    NoMatch,
}

impl std::fmt::Display for MatchOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MatchOutcome::Matched(id) => write!(f, "rule {id}"),
            MatchOutcome::NoMatch => write!(f, "no-match"),
        }
    }
}

/// A match outcome plus the work it took.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchResult {
    pub outcome: MatchOutcome,
    /// Total energy evaluations: classification descent plus chunk tests.
    pub energy_evals: u64,
    /// Whether classification was answered from the learning cache.
    pub cache_hit: bool,
}

/// Matches one header against the rule set.
///
/// The header's first chunk picks a group; rules in that group are scanned in
/// input order. Chunks 2..=35 of a candidate rule are tested left to right
/// and the candidate is abandoned at its first mismatching chunk. The first
/// rule with every chunk matching wins. Other groups are never inspected.
pub fn match_header(
    header: &FiveTuple,
    table: &RuleGroupTable,
    cache: &mut LearningCache,
) -> MatchResult {
    let chunks = header.encode().chunks();
    let classification = classify_first_chunk(&chunks[0], table, cache);
    let mut energy_evals = u64::from(classification.energy_evals);
    let store = table.store();
    for rule in table.group(classification.group) {
        let mut matched = true;
        let rest = chunks[1..]
            .iter()
            .zip(&rule.weights[1..])
            .zip(&rule.signs[1..]);
        for ((chunk, &index), &sign) in rest {
            energy_evals += 1;
            if !store.chunk_matches(chunk, index, sign) {
                matched = false;
                break;
            }
        }
        if matched {
            return MatchResult {
                outcome: MatchOutcome::Matched(rule.id),
                energy_evals,
                cache_hit: classification.cache_hit,
            };
        }
    }
    MatchResult {
        outcome: MatchOutcome::NoMatch,
        energy_evals,
        cache_hit: classification.cache_hit,
    }
}
