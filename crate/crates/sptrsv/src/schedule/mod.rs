//! Execution schedules for triangular solves.
//!
//! A triangular system imposes a partial order on its unknowns: in a lower
//! system, unknown `i` needs `x[j]` for every strict entry `(i, j)`. Two
//! preprocessing products capture that order:
//!
//! * [`LevelSchedule`] — unknowns grouped into *levels*. Level 1 holds the
//!   unknowns with no dependencies; an unknown's level is one more than the
//!   maximum level among its dependencies. All unknowns in one level are
//!   mutually independent, so a solver may process a level in parallel and
//!   needs a synchronization point only between levels. The schedule is the
//!   pair of arrays `(offsets, order)`: `order[offsets[m] .. offsets[m + 1]]`
//!   lists the unknowns of level `m + 1` (levels are 1-based in the API, as
//!   is conventional).
//! * [`DependencyCounts`] — per-unknown counts of outstanding dependencies,
//!   the seed state for counter-based (self-scheduling) solvers and for the
//!   breadth-first schedule builder in [`kahn`](self::kahn).
//!
//! Level arrays themselves come from [`levels::levels_rowwise`] /
//! [`levels::levels_colwise`] (sequential sweeps over the two storage
//! orientations) or from [`kahn::kahn_levels_parallel`] (a parallel
//! breadth-first peel that never materializes per-unknown level numbers).

pub mod kahn;
pub mod levels;

use crate::scalar::Scalar;
use crate::sparse::{CscMatrix, CsrMatrix};

/// Unknowns grouped by dependency depth; see the module docs.
///
/// Internally this is the classic two-array form: `offsets` has one entry
/// per level plus a trailing total, and `order` is a permutation of
/// `0..n` with level `m + 1` occupying `order[offsets[m] .. offsets[m + 1]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSchedule {
    offsets: Vec<usize>,
    order: Vec<usize>,
}

impl LevelSchedule {
    /// Build a schedule from 1-based per-unknown level numbers, grouping by
    /// level with ascending unknown order inside each level.
    ///
    /// # Panics
    ///
    /// Panics if the level values are not contiguous `1..=num_levels` — a
    /// gap means the input was not produced by a level computation.
    pub fn from_levels(levels: &[usize]) -> Self {
        let n = levels.len();
        let num_levels = levels.iter().copied().max().unwrap_or(0);
        let mut offsets = vec![0usize; num_levels + 1];
        for &level in levels {
            assert!(
                (1..=n).contains(&level),
                "level {level} outside the valid range 1..={n}"
            );
            offsets[level] += 1;
        }
        for (m, &width) in offsets.iter().enumerate().skip(1) {
            assert!(width > 0, "no unknowns at level {m}: levels must be contiguous");
        }
        for m in 1..=num_levels {
            offsets[m] += offsets[m - 1];
        }
        // `cursor[l]` tracks the next free slot of level `l + 1`.
        let mut cursor: Vec<usize> = offsets[..num_levels].to_vec();
        let mut order = vec![0usize; n];
        for (i, &level) in levels.iter().enumerate() {
            order[cursor[level - 1]] = i;
            cursor[level - 1] += 1;
        }
        Self { offsets, order }
    }

    /// Assemble a schedule from already-built arrays (used by the parallel
    /// builder). Validates the invariants in debug builds.
    pub(crate) fn from_parts(offsets: Vec<usize>, order: Vec<usize>) -> Self {
        debug_assert!(!offsets.is_empty() && offsets[0] == 0);
        debug_assert_eq!(*offsets.last().unwrap(), order.len());
        debug_assert!(offsets.windows(2).all(|w| w[0] < w[1]));
        #[cfg(debug_assertions)]
        {
            let mut seen = vec![false; order.len()];
            for &i in &order {
                assert!(!seen[i], "duplicate unknown {i} in schedule order");
                seen[i] = true;
            }
        }
        Self { offsets, order }
    }

    /// Number of levels (zero for an empty system).
    pub fn num_levels(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of unknowns covered by the schedule.
    pub fn len(&self) -> usize {
        self.order.len()
    }

    /// Whether the schedule covers no unknowns.
    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// The unknowns of level `level` (1-based), in schedule order.
    pub fn level(&self, level: usize) -> &[usize] {
        assert!(
            (1..=self.num_levels()).contains(&level),
            "level {level} outside 1..={}",
            self.num_levels()
        );
        &self.order[self.offsets[level - 1]..self.offsets[level]]
    }

    /// The level boundary array: `num_levels() + 1` entries starting at 0
    /// and ending at `len()`.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// The scheduled unknown order, concatenated level by level.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Iterate over levels as slices, in increasing level order.
    pub fn levels(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.offsets
            .windows(2)
            .map(move |w| &self.order[w[0]..w[1]])
    }

    /// Recover 1-based per-unknown level numbers.
    pub fn level_of(&self) -> Vec<usize> {
        let mut levels = vec![0usize; self.len()];
        for (m, members) in self.levels().enumerate() {
            for &i in members {
                levels[i] = m + 1;
            }
        }
        levels
    }
}

/// Per-unknown count of strict entries that must resolve before the unknown
/// can be computed: row lengths of the strict triangle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyCounts {
    counts: Vec<usize>,
}

impl DependencyCounts {
    /// Count dependencies from row storage: the length of each strict row.
    pub fn from_rows<T: Scalar>(strict: &CsrMatrix<T>) -> Self {
        let counts = strict
            .row_ptr()
            .windows(2)
            .map(|w| w[1] - w[0])
            .collect();
        Self { counts }
    }

    /// Count dependencies from column storage: for each strict entry
    /// `(i, j)` stored in column `j`, unknown `i` gains one dependency.
    pub fn from_columns<T: Scalar>(strict: &CscMatrix<T>) -> Self {
        let mut counts = vec![0usize; strict.n()];
        for &row in strict.row_idx() {
            counts[row] += 1;
        }
        Self { counts }
    }

    /// The counts, indexed by unknown.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Number of unknowns.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    /// Whether there are no unknowns.
    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}
