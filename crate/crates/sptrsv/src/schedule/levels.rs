//! Sequential level computation over either storage orientation.
//!
//! The level of an unknown is defined recursively: an unknown with no
//! dependencies sits at level 1, and otherwise one past the deepest level
//! among its dependencies. Both routines here produce that same 1-based
//! array; they differ only in which storage orientation they traverse, so
//! each fits the data a particular solver already has on hand.
//!
//! * [`levels_rowwise`] reads the strict triangle by rows: one pass in
//!   dependency order (ascending rows for lower systems, descending for
//!   upper), folding a max over each row's dependencies.
//! * [`levels_colwise`] reads it by columns and pushes instead of pulling:
//!   processing column `j` raises every dependent of `j` to at least one
//!   past `j`'s level. Seeding with zeros and adding one at the end yields
//!   exactly the 1-based convention of the row-wise routine, because the
//!   push order (ascending columns for lower, descending for upper) retires
//!   every dependency of an unknown before that unknown's own column is
//!   processed.
//!
//! Both routines verify that every entry lies on the claimed side of the
//! diagonal and report the first offender, so they are safe to run on raw
//! pattern input that has not passed through factor validation.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::triangular::Orientation;
use crate::sparse::{CscMatrix, CsrMatrix};

/// Per-unknown 1-based levels from the strict triangle in row storage.
pub fn levels_rowwise<T: Scalar>(
    strict: &CsrMatrix<T>,
    orientation: Orientation,
) -> Result<Vec<usize>> {
    let n = strict.n();
    let mut levels = vec![0usize; n];
    let rows: Box<dyn Iterator<Item = usize>> = match orientation {
        Orientation::Lower => Box::new(0..n),
        Orientation::Upper => Box::new((0..n).rev()),
    };
    for i in rows {
        let mut deepest = 0usize;
        for &j in strict.row_cols(i) {
            if !orientation.admits(i, j) {
                return Err(Error::OrientationViolation { row: i, col: j });
            }
            deepest = deepest.max(levels[j]);
        }
        levels[i] = deepest + 1;
    }
    Ok(levels)
}

/// Per-unknown 1-based levels from the strict triangle in column storage.
pub fn levels_colwise<T: Scalar>(
    strict: &CscMatrix<T>,
    orientation: Orientation,
) -> Result<Vec<usize>> {
    let n = strict.n();
    let mut levels = vec![0usize; n];
    let cols: Box<dyn Iterator<Item = usize>> = match orientation {
        Orientation::Lower => Box::new(0..n),
        Orientation::Upper => Box::new((0..n).rev()),
    };
    for j in cols {
        let reach = levels[j] + 1;
        for &i in strict.col_rows(j) {
            if !orientation.admits(i, j) {
                return Err(Error::OrientationViolation { row: i, col: j });
            }
            levels[i] = levels[i].max(reach);
        }
    }
    for level in &mut levels {
        *level += 1;
    }
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::LevelSchedule;
    use crate::sparse::stencil::gen_laplacian_2d;
    use crate::sparse::triangular::split_triangular;
    use crate::testing;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diagonal_system_is_one_flat_level() {
        let strict = CsrMatrix::<f64>::from_triplets(6, vec![]);
        let levels = levels_rowwise(&strict, Orientation::Lower).unwrap();
        assert_eq!(levels, vec![1; 6]);
        let levels = levels_colwise(&strict.to_csc(false), Orientation::Lower).unwrap();
        assert_eq!(levels, vec![1; 6]);
    }

    #[test]
    fn chain_produces_one_level_per_unknown() {
        // Bidiagonal chain: unknown i depends on i - 1.
        let n = 8;
        let triplets: Vec<_> = (1..n).map(|i| (i, i - 1, 1.0f64)).collect();
        let strict = CsrMatrix::from_triplets(n, triplets);
        let levels = levels_rowwise(&strict, Orientation::Lower).unwrap();
        assert_eq!(levels, (1..=n).collect::<Vec<_>>());
    }

    #[test]
    fn grid_levels_are_anti_diagonals() {
        // On the 5-point grid the lower triangle couples each unknown to its
        // west and south neighbors, so the level of (ix, iy) is ix + iy + 1
        // and the level count is nx + ny - 1.
        let (nx, ny) = (5, 5);
        let a = gen_laplacian_2d::<f64>(nx, ny, 5).unwrap();
        let (lower, upper) = split_triangular(&a).unwrap();

        let levels = levels_rowwise(lower.strict(), Orientation::Lower).unwrap();
        for iy in 0..ny {
            for ix in 0..nx {
                assert_eq!(levels[ix + nx * iy], ix + iy + 1);
            }
        }
        let schedule = LevelSchedule::from_levels(&levels);
        assert_eq!(schedule.num_levels(), nx + ny - 1);
        assert_eq!(schedule.level(5), &[4, 8, 12, 16, 20]);

        // The upper triangle couples to east and north neighbors; the level
        // pattern is the point reflection of the lower one.
        let levels = levels_rowwise(upper.strict(), Orientation::Upper).unwrap();
        for iy in 0..ny {
            for ix in 0..nx {
                assert_eq!(levels[ix + nx * iy], (nx - 1 - ix) + (ny - 1 - iy) + 1);
            }
        }
    }

    #[test]
    fn rowwise_matches_a_memoized_recursion() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x1e7e15);
        for _ in 0..40 {
            let (lower, upper) = testing::random_split_factors(&mut rng, 60, 0.08);
            for (factor, orientation) in
                [(&lower, Orientation::Lower), (&upper, Orientation::Upper)]
            {
                let got = levels_rowwise(factor.strict(), orientation).unwrap();
                let want = testing::recursive_levels(factor.strict(), orientation);
                assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn colwise_matches_rowwise_on_random_patterns() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xc01_3a5e);
        for round in 0..40 {
            let (lower, upper) = testing::random_split_factors(&mut rng, 80, 0.05);
            for (factor, orientation) in
                [(&lower, Orientation::Lower), (&upper, Orientation::Upper)]
            {
                let by_rows = levels_rowwise(factor.strict(), orientation).unwrap();
                let by_cols =
                    levels_colwise(&factor.strict().to_csc(false), orientation).unwrap();
                assert_eq!(by_rows, by_cols, "round {round} {orientation:?}");
            }
        }
    }

    #[test]
    fn empty_system_yields_no_levels() {
        let strict = CsrMatrix::<f64>::from_triplets(0, vec![]);
        assert!(levels_rowwise(&strict, Orientation::Lower).unwrap().is_empty());
        assert!(levels_colwise(&strict.to_csc(false), Orientation::Upper)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn misplaced_entries_are_reported() {
        // An upper entry handed to a lower-orientation scan.
        let strict = CsrMatrix::from_triplets(4, vec![(1, 0, 1.0f64), (2, 3, 1.0)]);
        let err = levels_rowwise(&strict, Orientation::Lower).unwrap_err();
        assert!(matches!(err, Error::OrientationViolation { row: 2, col: 3 }));
        let err = levels_colwise(&strict.to_csc(false), Orientation::Lower).unwrap_err();
        assert!(matches!(err, Error::OrientationViolation { row: 2, col: 3 }));
    }
}
