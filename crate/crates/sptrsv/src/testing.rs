//! Test support: randomized input generators and slow, independent
//! reference implementations.
//!
//! Everything here exists to check the fast paths elsewhere in the crate,
//! so it deliberately shares no code with them: the dense solver scans full
//! rows of a materialized matrix, the level oracle is a memoized recursion
//! rather than a sweep, and the break-even oracle is a linear scan. Keeping
//! these routines public lets integration tests and downstream benchmark
//! harnesses verify results the same way the unit tests do.

use rand::Rng;

use crate::scalar::Scalar;
use crate::schedule::LevelSchedule;
use crate::sparse::triangular::{split_triangular, Orientation, RowFactor};
use crate::sparse::CsrMatrix;

/// Generate a random diagonally dominant sparse matrix and split it.
///
/// Each strict entry appears with probability `density` and a value in
/// `[-1, 1]`; the diagonal is `2 + (absolute row sum)` with a random sign,
/// which keeps both triangles strictly diagonally dominant so substitution
/// against them is well conditioned. Returns the `(lower, upper)` factors.
pub fn random_split_factors<R: Rng>(
    rng: &mut R,
    n: usize,
    density: f64,
) -> (RowFactor<f64>, RowFactor<f64>) {
    let mut triplets: Vec<(usize, usize, f64)> = Vec::new();
    let mut row_abs = vec![0.0f64; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.gen_bool(density) {
                let value = rng.gen_range(-1.0..=1.0);
                triplets.push((i, j, value));
                row_abs[i] += value.abs();
            }
        }
    }
    for (i, &sum) in row_abs.iter().enumerate() {
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        triplets.push((i, i, sign * (2.0 + sum)));
    }
    let a = CsrMatrix::from_triplets(n, triplets);
    split_triangular(&a).expect("generated diagonal is nonzero")
}

/// A random right-hand side with entries in `[-1, 1]`.
pub fn random_rhs<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect()
}

/// Materialize a factor as a dense row-major `n * n` array of `f64`.
pub fn dense_from_factor<T: Scalar>(factor: &RowFactor<T>) -> Vec<f64> {
    let n = factor.n();
    let mut dense = vec![0.0f64; n * n];
    for i in 0..n {
        let (cols, vals) = factor.strict().row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            dense[i * n + j] = v.to_f64();
        }
        dense[i * n + i] = factor.diag()[i].to_f64();
    }
    dense
}

/// Solve a dense triangular system by substitution with full row scans.
///
/// `dense` is row-major `n * n`; entries on the wrong side of the diagonal
/// are simply read as stored (zero for a materialized factor). This touches
/// none of the sparse machinery, making it a fair reference for it.
pub fn dense_solve_triangular(
    dense: &[f64],
    n: usize,
    orientation: Orientation,
    rhs: &[f64],
) -> Vec<f64> {
    assert_eq!(dense.len(), n * n);
    assert_eq!(rhs.len(), n);
    let mut x = vec![0.0f64; n];
    let rows: Box<dyn Iterator<Item = usize>> = match orientation {
        Orientation::Lower => Box::new(0..n),
        Orientation::Upper => Box::new((0..n).rev()),
    };
    for i in rows {
        let mut sum = 0.0;
        let range: Box<dyn Iterator<Item = usize>> = match orientation {
            Orientation::Lower => Box::new(0..i),
            Orientation::Upper => Box::new(i + 1..n),
        };
        for j in range {
            sum += dense[i * n + j] * x[j];
        }
        x[i] = (rhs[i] - sum) / dense[i * n + i];
    }
    x
}

/// Reference solve of `factor * x = rhs` through the dense path.
pub fn dense_solve_factor<T: Scalar>(factor: &RowFactor<T>, rhs: &[f64]) -> Vec<f64> {
    let dense = dense_from_factor(factor);
    dense_solve_triangular(&dense, factor.n(), factor.orientation(), rhs)
}

/// Per-unknown 1-based levels by memoized recursion straight from the
/// definition: one past the deepest level among the dependencies.
pub fn recursive_levels<T: Scalar>(
    strict: &CsrMatrix<T>,
    orientation: Orientation,
) -> Vec<usize> {
    fn level_of<T: Scalar>(i: usize, strict: &CsrMatrix<T>, memo: &mut [usize]) -> usize {
        if memo[i] != 0 {
            return memo[i];
        }
        let mut deepest = 0;
        for &j in strict.row_cols(i) {
            deepest = deepest.max(level_of(j, strict, memo));
        }
        memo[i] = deepest + 1;
        memo[i]
    }
    let n = strict.n();
    let mut memo = vec![0usize; n];
    for i in 0..n {
        for &j in strict.row_cols(i) {
            assert!(
                orientation.admits(i, j),
                "entry ({i}, {j}) contradicts {orientation:?}"
            );
        }
        level_of(i, strict, &mut memo);
    }
    memo
}

/// Assert that a schedule is a permutation of the unknowns and that every
/// dependency is scheduled at a strictly earlier level.
pub fn assert_schedule_valid<T: Scalar>(
    schedule: &LevelSchedule,
    strict: &CsrMatrix<T>,
    orientation: Orientation,
) {
    let n = strict.n();
    assert_eq!(schedule.len(), n, "schedule must cover every unknown");
    let offsets = schedule.offsets();
    assert_eq!(offsets[0], 0);
    assert_eq!(*offsets.last().unwrap(), n);
    assert!(
        offsets.windows(2).all(|w| w[0] < w[1]),
        "every level must be nonempty"
    );
    let mut seen = vec![false; n];
    for &i in schedule.order() {
        assert!(!seen[i], "unknown {i} scheduled twice");
        seen[i] = true;
    }
    let level_of = schedule.level_of();
    for i in 0..n {
        for &j in strict.row_cols(i) {
            assert!(
                orientation.admits(i, j),
                "entry ({i}, {j}) contradicts {orientation:?}"
            );
            assert!(
                level_of[j] < level_of[i],
                "dependency {j} (level {}) does not precede {i} (level {})",
                level_of[j],
                level_of[i]
            );
        }
    }
}

/// Smallest solve count `k <= limit` at which plan A's total time undercuts
/// plan B's, by linear scan of the exact comparison `setup_a + k * solve_a <
/// setup_b + k * solve_b` in `f64`. `None` means no such count exists within
/// the limit.
pub fn brute_force_break_even(
    setup_a: f64,
    solve_a: f64,
    setup_b: f64,
    solve_b: f64,
    limit: u64,
) -> Option<u64> {
    (0..=limit).find(|&k| setup_a + k as f64 * solve_a < setup_b + k as f64 * solve_b)
}
