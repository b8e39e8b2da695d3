//! Exact single-pattern string searching: Boyer-Moore and its Horspool
//! simplification, over byte alphabets.
//!
//! Both precompute shift tables from the pattern and slide it across the
//! text. Boyer-Moore combines the bad character and good suffix heuristics;
//! Horspool keeps only a bad character table keyed by the text byte under the
//! pattern's last position.

const ALPHABET: usize = 256;

/// Shift for each alphabet byte: distance from its last occurrence in
/// `pattern[..m-1]` to the pattern end, or `m` for absent bytes.
fn bad_char_table(pattern: &[u8]) -> [usize; ALPHABET] {
    let m = pattern.len();
    let mut table = [m; ALPHABET];
    for (i, &b) in pattern.iter().take(m.saturating_sub(1)).enumerate() {
        table[b as usize] = m - 1 - i;
    }
    table
}

/// For each position i, the length of the longest suffix of the pattern
/// ending at i.
fn suffix_lengths(pattern: &[u8]) -> Vec<usize> {
    let m = pattern.len();
    let mut suff = vec![0usize; m];
    suff[m - 1] = m;
    let mut g = m as isize - 1;
    let mut f = m as isize - 1;
    for i in (0..m - 1).rev() {
        let i_ = i as isize;
        if i_ > g && suff[(i_ + m as isize - 1 - f) as usize] < (i_ - g) as usize {
            suff[i] = suff[(i_ + m as isize - 1 - f) as usize];
        } else {
            if i_ < g {
                g = i_;
            }
            f = i_;
            while g >= 0 && pattern[g as usize] == pattern[(g + m as isize - 1 - f) as usize] {
                g -= 1;
            }
            suff[i] = (f - g) as usize;
        }
    }
    suff
}

/// Good suffix shifts: on a mismatch at pattern position i, how far the
/// window may slide so the matched suffix realigns with another occurrence
/// (or a matching prefix).
fn good_suffix_table(pattern: &[u8]) -> Vec<usize> {
    let m = pattern.len();
    let suff = suffix_lengths(pattern);
    let mut table = vec![m; m];
    let mut j = 0;
    for i in (0..m).rev() {
        if suff[i] == i + 1 {
            while j < m - 1 - i {
                if table[j] == m {
                    table[j] = m - 1 - i;
                }
                j += 1;
            }
        }
    }
    for i in 0..m.saturating_sub(1) {
        table[m - 1 - suff[i]] = m - 1 - i;
    }
    table
}

/// Boyer-Moore searcher for one fixed pattern.
#[derive(Debug, Clone)]
pub struct BoyerMoore {
    pattern: Vec<u8>,
    bad_char: [usize; ALPHABET],
    good_suffix: Vec<usize>,
}

impl BoyerMoore {
    pub fn new(pattern: &[u8]) -> BoyerMoore {
        BoyerMoore {
            pattern: pattern.to_vec(),
            bad_char: bad_char_table(pattern),
            good_suffix: if pattern.is_empty() {
                Vec::new()
            } else {
                good_suffix_table(pattern)
            },
        }
    }

    pub fn pattern(&self) -> &[u8] {
        &self.pattern
    }

    /// Offset of the leftmost occurrence of the pattern in `text`.
    pub fn find(&self, text: &[u8]) -> Option<usize> {
        let m = self.pattern.len();
        let n = text.len();
        if m == 0 {
            return Some(0);
        }
        if m > n {
            return None;
        }
        let mut j = 0;
        while j <= n - m {
            let mut i = m as isize - 1;
            while i >= 0 && self.pattern[i as usize] == text[i as usize + j] {
                i -= 1;
            }
            if i < 0 {
                return Some(j);
            }
            let bad = self.bad_char[text[i as usize + j] as usize] as isize - (m as isize - 1 - i);
            let good = self.good_suffix[i as usize] as isize;
            j += good.max(bad) as usize;
        }
        None
    }
}

/// Horspool searcher for one fixed pattern.
#[derive(Debug, Clone)]
pub struct Horspool {
    pattern: Vec<u8>,
    bad_char: [usize; ALPHABET],
}

impl Horspool {
    pub fn new(pattern: &[u8]) -> Horspool {
        Horspool {
            pattern: pattern.to_vec(),
            bad_char: bad_char_table(pattern),
        }
    }

    pub fn pattern(&self) -> &[u8] {
        &self.pattern
    }

    /// Offset of the leftmost occurrence of the pattern in `text`.
    pub fn find(&self, text: &[u8]) -> Option<usize> {
        let m = self.pattern.len();
        let n = text.len();
        if m == 0 {
            return Some(0);
        }
        if m > n {
            return None;
        }
        let mut j = 0;
        while j <= n - m {
            let last = text[j + m - 1];
            if self.pattern[m - 1] == last && self.pattern[..m - 1] == text[j..j + m - 1] {
                return Some(j);
            }
            j += self.bad_char[last as usize];
        }
        None
    }
}
