//! Hopfield-style weight matrices over 3-element chunks, and the energy
//! function that scores a chunk against them.
//!
//! Each of the 8 possible chunk patterns trains a 3x3 matrix by outer product
//! with a zero diagonal. A pattern and its complement train the same matrix,
//! so only 4 distinct matrices exist; [`WeightStore`] keeps one copy of each
//! and routes every pattern index to its matrix plus a sign that tells the
//! two patterns sharing it apart.
//!
//! The energy of chunk `x` against matrix `w` is `-1/2 * sum(x[i]*x[j]*w[i][j])`.
//! It reaches its minimum of -3 exactly when `x` is the training pattern or
//! its complement; every other chunk scores +1. Energy -3 plus an equal sign
//! is therefore the same thing as 3-bit equality, which is what makes the
//! matcher exact.

use crate::header::{Chunk, CHUNK_LEN};

/// Number of distinct 3-element bipolar patterns.
pub const CHUNK_PATTERN_COUNT: usize = 8;

/// Energy of a chunk against the matrix trained on it (or its complement).
pub const MATCH_ENERGY: i32 = -3;

/// A symmetric 3x3 weight matrix with a zero diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeightMatrix([[i8; CHUNK_LEN]; CHUNK_LEN]);

impl WeightMatrix {
    pub fn entries(&self) -> &[[i8; CHUNK_LEN]; CHUNK_LEN] {
        &self.0
    }

    /// The three entries above the diagonal: (0,1), (0,2), (1,2).
    ///
    /// Symmetry and the zero diagonal make these the matrix's entire content,
    /// so a stored matrix costs 3 signs rather than 9 entries.
    pub fn upper_triangle(&self) -> [i8; 3] {
        [self.0[0][1], self.0[0][2], self.0[1][2]]
    }
}

/// Trains the weight matrix for one pattern: `w[i][j] = p[i]*p[j]`, diagonal
/// forced to zero.
pub fn outer_product(pattern: &Chunk) -> WeightMatrix {
    let mut w = [[0i8; CHUNK_LEN]; CHUNK_LEN];
    for i in 0..CHUNK_LEN {
        for j in 0..CHUNK_LEN {
            if i != j {
                w[i][j] = pattern[i] * pattern[j];
            }
        }
    }
    WeightMatrix(w)
}

/// Energy of chunk `x` against `w`: `-1/2 * sum over i,j of x[i]*x[j]*w[i][j]`.
pub fn energy(x: &Chunk, w: &WeightMatrix) -> i32 {
    let mut sum = 0i32;
    for i in 0..CHUNK_LEN {
        for j in 0..CHUNK_LEN {
            sum += i32::from(x[i]) * i32::from(x[j]) * i32::from(w.0[i][j]);
        }
    }
    // The diagonal is zero and w is symmetric, so the sum is always even.
    debug_assert!(sum % 2 == 0);
    -sum / 2
}

/// Sign of a pattern's element sum: +1 if positive, -1 if negative.
///
/// Three odd elements can never sum to zero. Complement patterns have equal
/// energy against a shared matrix but opposite signs, so this one value
/// disambiguates them.
pub fn sign_sum(pattern: &Chunk) -> i8 {
    let s = pattern[0] + pattern[1] + pattern[2];
    if s > 0 {
        1
    } else {
        -1
    }
}

/// A chunk pattern's index: its three elements read as a binary number,
/// -1 as 0 and +1 as 1, first element most significant. Ranges over 0..8.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightIndex(u8);

impl WeightIndex {
    /// Wraps a raw index. Panics unless `value < 8`.
    pub fn new(value: u8) -> WeightIndex {
        assert!(
            (value as usize) < CHUNK_PATTERN_COUNT,
            "weight index {value} out of range"
        );
        WeightIndex(value)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn as_usize(self) -> usize {
        self.0 as usize
    }

    /// The pattern this index encodes.
    pub fn pattern(self) -> Chunk {
        Chunk([
            if self.0 & 4 != 0 { 1 } else { -1 },
            if self.0 & 2 != 0 { 1 } else { -1 },
            if self.0 & 1 != 0 { 1 } else { -1 },
        ])
    }

    /// The index of the complement pattern.
    pub fn complement(self) -> WeightIndex {
        WeightIndex(7 - self.0)
    }

    /// All 8 indices in ascending order.
    pub fn all() -> impl Iterator<Item = WeightIndex> {
        (0..CHUNK_PATTERN_COUNT as u8).map(WeightIndex)
    }
}

impl std::fmt::Display for WeightIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Maps a pattern to its index.
pub fn weight_index(pattern: &Chunk) -> WeightIndex {
    let bit = |e: i8| u8::from(e == 1);
    WeightIndex(bit(pattern[0]) << 2 | bit(pattern[1]) << 1 | bit(pattern[2]))
}

#[derive(Debug, Clone, Copy)]
struct Slot {
    matrix: u8,
    sign: i8,
}

/// The deduplicated weight matrices for all 8 chunk patterns.
///
/// Training all 8 patterns yields 4 distinct matrices because complements
/// collide; the store keeps the distinct ones and, per pattern index, which
/// matrix to use and the sign that separates it from its complement.
#[derive(Debug, Clone)]
pub struct WeightStore {
    matrices: Vec<WeightMatrix>,
    slots: [Slot; CHUNK_PATTERN_COUNT],
}

impl WeightStore {
    /// Trains and deduplicates the matrices for all 8 patterns.
    pub fn build() -> WeightStore {
        let mut matrices: Vec<WeightMatrix> = Vec::new();
        let mut slots = [Slot { matrix: 0, sign: 0 }; CHUNK_PATTERN_COUNT];
        for index in WeightIndex::all() {
            let pattern = index.pattern();
            let trained = outer_product(&pattern);
            let position = matrices
                .iter()
                .position(|&m| m == trained)
                .unwrap_or_else(|| {
                    matrices.push(trained);
                    matrices.len() - 1
                });
            slots[index.as_usize()] = Slot {
                matrix: position as u8,
                sign: sign_sum(&pattern),
            };
        }
        WeightStore { matrices, slots }
    }

    /// How many distinct matrices the 8 patterns produced.
    pub fn distinct_matrix_count(&self) -> usize {
        self.matrices.len()
    }

    /// The matrix trained on `index`'s pattern.
    pub fn matrix(&self, index: WeightIndex) -> &WeightMatrix {
        &self.matrices[self.slots[index.as_usize()].matrix as usize]
    }

    /// Position of `index`'s matrix in the deduplicated storage. Complement
    /// indices report the same position.
    pub fn matrix_id(&self, index: WeightIndex) -> usize {
        self.slots[index.as_usize()].matrix as usize
    }

    /// Sign of `index`'s pattern.
    pub fn sign(&self, index: WeightIndex) -> i8 {
        self.slots[index.as_usize()].sign
    }

    /// The per-chunk match test: minimum energy against the indexed matrix
    /// and an equal disambiguation sign. Holds exactly when `x` equals the
    /// pattern behind (`index`, `sign`).
    pub fn chunk_matches(&self, x: &Chunk, index: WeightIndex, sign: i8) -> bool {
        energy(x, self.matrix(index)) == MATCH_ENERGY && sign_sum(x) == sign
    }
}

impl Default for WeightStore {
    fn default() -> WeightStore {
        WeightStore::build()
    }
}
