//! Triangular factors: a strict triangular part plus a separate diagonal.
//!
//! The solvers work on systems `(L + D) x = f` and `(U + D) x = f` where `L`
//! (`U`) is strictly lower (upper) triangular and `D` is diagonal. Storing
//! the strict part and the diagonal separately keeps the inner solve loops
//! free of diagonal tests and guarantees up front that every division is by
//! a stored, nonzero value.
//!
//! Zero *stored* off-diagonal entries are kept: scheduling is driven by the
//! sparsity pattern, not the values, and dropping explicit zeros would make
//! level structure depend on numerics.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::{CscMatrix, CsrMatrix, Storage};

/// Which side of the diagonal a factor occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Lower,
    Upper,
}

impl Orientation {
    /// `true` when an entry at `(row, col)` belongs to the strict part.
    pub fn admits(self, row: usize, col: usize) -> bool {
        match self {
            Orientation::Lower => col < row,
            Orientation::Upper => col > row,
        }
    }
}

/// Strict triangular part + diagonal, in the storage layout `M` (compressed
/// rows or compressed columns). The diagonal is dense and nonzero by
/// construction.
#[derive(Debug, Clone)]
pub struct TriangularFactor<M: Storage> {
    strict: M,
    diag: Vec<M::Elem>,
    orientation: Orientation,
}

/// Factor whose strict part is accessed by rows.
pub type RowFactor<T> = TriangularFactor<CsrMatrix<T>>;
/// Factor whose strict part is accessed by columns.
pub type ColFactor<T> = TriangularFactor<CscMatrix<T>>;

impl<M: Storage> TriangularFactor<M> {
    /// Validate and assemble a factor: `strict` must carry values, lie
    /// entirely on the claimed side of the diagonal, and `diag` must have one
    /// nonzero entry per row.
    pub fn new(strict: M, diag: Vec<M::Elem>, orientation: Orientation) -> Result<Self> {
        if !strict.has_values() {
            return Err(Error::InvalidInput(
                "triangular factor requires a value-carrying strict part".to_string(),
            ));
        }
        if diag.len() != strict.dim() {
            return Err(Error::InvalidInput(format!(
                "diagonal has length {}, expected n = {}",
                diag.len(),
                strict.dim()
            )));
        }
        let mut violation = None;
        strict.for_each_entry(|row, col| {
            if violation.is_none() && !orientation.admits(row, col) {
                violation = Some((row, col));
            }
        });
        if let Some((row, col)) = violation {
            return Err(Error::OrientationViolation { row, col });
        }
        if let Some(i) = diag.iter().position(|&d| d == M::Elem::ZERO) {
            return Err(Error::MissingDiagonal(i));
        }
        Ok(Self {
            strict,
            diag,
            orientation,
        })
    }

    pub fn n(&self) -> usize {
        self.strict.dim()
    }

    pub fn strict(&self) -> &M {
        &self.strict
    }

    pub fn diag(&self) -> &[M::Elem] {
        &self.diag
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }
}

impl<T: Scalar> RowFactor<T> {
    /// The same factor with the strict part converted to compressed-column
    /// storage (values carried along).
    pub fn to_column_form(&self) -> ColFactor<T> {
        ColFactor {
            strict: self.strict.to_csc(true),
            diag: self.diag.clone(),
            orientation: self.orientation,
        }
    }

    /// `(strict + diag) * x`.
    pub fn apply(&self, x: &[T]) -> Vec<T> {
        let n = self.n();
        assert_eq!(x.len(), n, "vector length must match the factor dimension");
        let mut y = Vec::with_capacity(n);
        for i in 0..n {
            let (cols, vals) = self.strict.row(i);
            let mut acc = self.diag[i] * x[i];
            for (k, &j) in cols.iter().enumerate() {
                acc += vals[k] * x[j];
            }
            y.push(acc);
        }
        y
    }
}

impl<T: Scalar> ColFactor<T> {
    /// The same factor with the strict part converted to compressed-row
    /// storage (values carried along).
    pub fn to_row_form(&self) -> RowFactor<T> {
        RowFactor {
            strict: self.strict.to_csr(true),
            diag: self.diag.clone(),
            orientation: self.orientation,
        }
    }

    /// `(strict + diag) * x`, accumulated column by column.
    pub fn apply(&self, x: &[T]) -> Vec<T> {
        let n = self.n();
        assert_eq!(x.len(), n, "vector length must match the factor dimension");
        let mut y: Vec<T> = (0..n).map(|i| self.diag[i] * x[i]).collect();
        for j in 0..n {
            let (rows, vals) = self.strict.col(j);
            for (k, &i) in rows.iter().enumerate() {
                y[i] += vals[k] * x[j];
            }
        }
        y
    }
}

/// Split a square matrix into its two triangular factors: `(lower, upper)`
/// where `lower` holds the strictly lower part of `a`, `upper` the strictly
/// upper part, and both share the diagonal of `a`. Every row must store a
/// nonzero diagonal entry; the first row that does not yields
/// [`Error::MissingDiagonal`].
pub fn split_triangular<T: Scalar>(a: &CsrMatrix<T>) -> Result<(RowFactor<T>, RowFactor<T>)> {
    let n = a.n();
    let mut lo_ptr = Vec::with_capacity(n + 1);
    let mut up_ptr = Vec::with_capacity(n + 1);
    lo_ptr.push(0);
    up_ptr.push(0);
    let mut lo_idx = Vec::new();
    let mut lo_val = Vec::new();
    let mut up_idx = Vec::new();
    let mut up_val = Vec::new();
    let mut diag = Vec::with_capacity(n);

    for i in 0..n {
        let (cols, vals) = a.row(i);
        let mut d = None;
        for (k, &j) in cols.iter().enumerate() {
            if j < i {
                lo_idx.push(j);
                lo_val.push(vals[k]);
            } else if j > i {
                up_idx.push(j);
                up_val.push(vals[k]);
            } else {
                d = Some(vals[k]);
            }
        }
        match d {
            Some(v) if v != T::ZERO => diag.push(v),
            _ => return Err(Error::MissingDiagonal(i)),
        }
        lo_ptr.push(lo_idx.len());
        up_ptr.push(up_idx.len());
    }

    // Both parts inherit canonical order from `a`, so assembly cannot fail
    // beyond what was checked above.
    let lower = TriangularFactor {
        strict: CsrMatrix::new(n, lo_ptr, lo_idx, lo_val)?,
        diag: diag.clone(),
        orientation: Orientation::Lower,
    };
    let upper = TriangularFactor {
        strict: CsrMatrix::new(n, up_ptr, up_idx, up_val)?,
        diag,
        orientation: Orientation::Upper,
    };
    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::gen_laplacian_2d;

    fn identity(n: usize) -> CsrMatrix<f64> {
        CsrMatrix::new(
            n,
            (0..=n).collect(),
            (0..n).collect(),
            vec![1.0; n],
        )
        .unwrap()
    }

    #[test]
    fn splitting_the_identity_leaves_empty_strict_parts() {
        let (lower, upper) = split_triangular(&identity(4)).unwrap();
        assert_eq!(lower.strict().nnz(), 0);
        assert_eq!(upper.strict().nnz(), 0);
        assert_eq!(lower.diag(), &[1.0; 4]);
        assert_eq!(upper.diag(), &[1.0; 4]);
        assert_eq!(lower.orientation(), Orientation::Lower);
        assert_eq!(upper.orientation(), Orientation::Upper);
    }

    #[test]
    fn splitting_a_dense_all_ones_matrix() {
        // 3x3 of all ones: strict parts get the three entries below/above the
        // diagonal, the diagonal is all ones.
        let a = CsrMatrix::new(
            3,
            vec![0, 3, 6, 9],
            vec![0, 1, 2, 0, 1, 2, 0, 1, 2],
            vec![1.0; 9],
        )
        .unwrap();
        let (lower, upper) = split_triangular(&a).unwrap();
        assert_eq!(lower.strict().row_ptr(), &[0, 0, 1, 3]);
        assert_eq!(lower.strict().col_idx(), &[0, 0, 1]);
        assert_eq!(upper.strict().row_ptr(), &[0, 2, 3, 3]);
        assert_eq!(upper.strict().col_idx(), &[1, 2, 2]);
        assert_eq!(lower.diag(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn grid_split_counts_match_edge_enumeration() {
        // Oracle: count the grid edges directly. On an nx-by-ny grid with the
        // 5-point stencil there are (nx-1)*ny horizontal and nx*(ny-1)
        // vertical neighbor pairs; each pair contributes exactly one entry to
        // the strictly lower part and one to the strictly upper part.
        let (nx, ny) = (5usize, 5usize);
        let expected_edges = (nx - 1) * ny + nx * (ny - 1);
        assert_eq!(expected_edges, 40);

        let a = gen_laplacian_2d::<f64>(nx, ny, 5).unwrap();
        let (lower, upper) = split_triangular(&a).unwrap();
        assert_eq!(lower.strict().nnz(), expected_edges);
        assert_eq!(upper.strict().nnz(), expected_edges);
        assert!(lower.diag().iter().all(|&d| d == 4.0));
        assert!(upper.diag().iter().all(|&d| d == 4.0));
    }

    #[test]
    fn missing_diagonal_is_reported_with_the_row() {
        // Row 1 stores no diagonal entry at all.
        let a = CsrMatrix::new(2, vec![0, 1, 2], vec![0, 0], vec![1.0, 1.0]).unwrap();
        assert!(matches!(split_triangular(&a), Err(Error::MissingDiagonal(1))));

        // Row 0 stores an explicit zero on the diagonal, which is just as fatal.
        let a = CsrMatrix::new(2, vec![0, 1, 2], vec![0, 1], vec![0.0, 1.0]).unwrap();
        assert!(matches!(split_triangular(&a), Err(Error::MissingDiagonal(0))));
    }

    #[test]
    fn explicit_zero_off_diagonals_are_kept() {
        let a = CsrMatrix::new(
            2,
            vec![0, 1, 3],
            vec![0, 0, 1],
            vec![2.0, 0.0, 3.0],
        )
        .unwrap();
        let (lower, _) = split_triangular(&a).unwrap();
        assert_eq!(lower.strict().nnz(), 1);
        assert_eq!(lower.strict().values(), &[0.0]);
    }

    #[test]
    fn factor_construction_rejects_wrong_side_entries() {
        let strict = CsrMatrix::new(2, vec![0, 1, 1], vec![1], vec![5.0]).unwrap();
        // (0, 1) is an upper entry; claiming Lower must fail and name it.
        match TriangularFactor::new(strict.clone(), vec![1.0, 1.0], Orientation::Lower) {
            Err(Error::OrientationViolation { row: 0, col: 1 }) => {}
            other => panic!("expected orientation violation, got {other:?}"),
        }
        assert!(TriangularFactor::new(strict, vec![1.0, 1.0], Orientation::Upper).is_ok());
    }

    #[test]
    fn factor_construction_rejects_bad_diagonals_and_patterns() {
        let strict = CsrMatrix::new(2, vec![0, 0, 1], vec![0], vec![5.0]).unwrap();
        assert!(matches!(
            TriangularFactor::new(strict.clone(), vec![1.0, 0.0], Orientation::Lower),
            Err(Error::MissingDiagonal(1))
        ));
        assert!(TriangularFactor::new(strict.clone(), vec![1.0], Orientation::Lower).is_err());
        let pattern_only = CsrMatrix::<f64>::new(2, vec![0, 0, 1], vec![0], vec![]).unwrap();
        assert!(TriangularFactor::new(pattern_only, vec![1.0, 1.0], Orientation::Lower).is_err());
    }

    #[test]
    fn reassembling_the_split_reproduces_the_matrix() {
        let a = gen_laplacian_2d::<f64>(4, 3, 9).unwrap();
        let (lower, upper) = split_triangular(&a).unwrap();
        // Merge (lower strict) + diag + (upper strict) row by row and compare
        // with the original arrays exactly.
        let mut idx = Vec::new();
        let mut val = Vec::new();
        for i in 0..a.n() {
            let (lc, lv) = lower.strict().row(i);
            idx.extend_from_slice(lc);
            val.extend_from_slice(lv);
            idx.push(i);
            val.push(lower.diag()[i]);
            let (uc, uv) = upper.strict().row(i);
            idx.extend_from_slice(uc);
            val.extend_from_slice(uv);
        }
        assert_eq!(idx.as_slice(), a.col_idx());
        assert_eq!(val.as_slice(), a.values());
    }

    #[test]
    fn row_and_column_apply_agree() {
        let a = gen_laplacian_2d::<f64>(6, 5, 5).unwrap();
        let (lower, _) = split_triangular(&a).unwrap();
        let x: Vec<f64> = (0..a.n()).map(|i| (i as f64).sin()).collect();
        let via_rows = lower.apply(&x);
        let via_cols = lower.to_column_form().apply(&x);
        for (r, c) in via_rows.iter().zip(&via_cols) {
            assert!((r - c).abs() <= 1e-12 * r.abs().max(1.0));
        }
    }

    #[test]
    fn column_form_round_trip_preserves_the_factor() {
        let a = gen_laplacian_2d::<f64>(4, 4, 5).unwrap();
        let (lower, _) = split_triangular(&a).unwrap();
        let back = lower.to_column_form().to_row_form();
        assert_eq!(back.strict().row_ptr(), lower.strict().row_ptr());
        assert_eq!(back.strict().col_idx(), lower.strict().col_idx());
        assert_eq!(back.strict().values(), lower.strict().values());
        assert_eq!(back.diag(), lower.diag());
    }
}
