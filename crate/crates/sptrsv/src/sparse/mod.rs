//! Compressed sparse storage for square matrices.
//!
//! Two mirrored layouts are provided: [`CsrMatrix`] (compressed rows: a row
//! pointer array, then column indices and values per row) and [`CscMatrix`]
//! (compressed columns: a column pointer array, then row indices and values
//! per column). Both are kept in *canonical* form at all times — indices
//! strictly increasing within each row (column), no duplicates, every index
//! in range — and the constructors reject anything else rather than silently
//! reordering. The one place that accepts messy input and canonicalizes it is
//! the Matrix Market reader in [`market`].
//!
//! Either type may carry an empty value array, in which case it describes a
//! sparsity pattern only. Pattern-only matrices are what the dependency
//! analysis needs; the solvers require values and say so at construction.

pub mod market;
pub mod stencil;
pub mod triangular;

pub use market::{read_matrix_market, write_matrix_market};
pub use stencil::{gen_laplacian_2d, gen_laplacian_3d};
pub use triangular::{split_triangular, ColFactor, Orientation, RowFactor, TriangularFactor};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Common view over the two compressed layouts, letting code that only cares
/// about the dimension and entry count work with either.
pub trait Storage {
    type Elem: Scalar;

    /// Row/column count (matrices here are square).
    fn dim(&self) -> usize;
    /// Number of stored entries.
    fn entry_count(&self) -> usize;
    /// Whether a value array is present (`false` for pattern-only storage).
    fn has_values(&self) -> bool;
    /// Visit every stored entry as `(row, col)` in storage order.
    fn for_each_entry(&self, f: impl FnMut(usize, usize));
}

/// Square sparse matrix in compressed row form.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix<T> {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<T>,
}

/// Square sparse matrix in compressed column form.
#[derive(Debug, Clone, PartialEq)]
pub struct CscMatrix<T> {
    n: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<T>,
}

/// Shared validation for both layouts. `ptr` is the per-major-axis offset
/// array, `idx` the minor-axis indices. `axis`/`cross` name the two axes in
/// error messages.
fn validate_compressed(
    n: usize,
    ptr: &[usize],
    idx: &[usize],
    value_count: usize,
    axis: &str,
    cross: &str,
) -> Result<()> {
    if ptr.len() != n + 1 {
        return Err(Error::InvalidInput(format!(
            "{axis} pointer array has length {}, expected n + 1 = {}",
            ptr.len(),
            n + 1
        )));
    }
    if ptr[0] != 0 {
        return Err(Error::InvalidInput(format!(
            "{axis} pointer array must start at 0, found {}",
            ptr[0]
        )));
    }
    if ptr[n] != idx.len() {
        return Err(Error::InvalidInput(format!(
            "{axis} pointer array ends at {} but there are {} stored indices",
            ptr[n],
            idx.len()
        )));
    }
    if value_count != 0 && value_count != idx.len() {
        return Err(Error::InvalidInput(format!(
            "value array has length {value_count}, expected {} or 0 (pattern-only)",
            idx.len()
        )));
    }
    for major in 0..n {
        let (lo, hi) = (ptr[major], ptr[major + 1]);
        if lo > hi {
            return Err(Error::InvalidInput(format!(
                "{axis} pointer array decreases at {axis} {major}"
            )));
        }
        let mut prev: Option<usize> = None;
        for &minor in &idx[lo..hi] {
            if minor >= n {
                return Err(Error::InvalidInput(format!(
                    "{cross} index {minor} out of range in {axis} {major} (n = {n})"
                )));
            }
            if let Some(p) = prev {
                if minor <= p {
                    return Err(Error::InvalidInput(format!(
                        "{cross} indices in {axis} {major} are not strictly increasing \
                         ({p} then {minor})"
                    )));
                }
            }
            prev = Some(minor);
        }
    }
    Ok(())
}

/// Canonicalize a triplet list: sort by (major, minor) and sum duplicates.
/// Returns `(ptr, idx, values)` for the major axis.
fn compress_triplets<T: Scalar>(
    n: usize,
    mut entries: Vec<(usize, usize, T)>,
) -> (Vec<usize>, Vec<usize>, Vec<T>) {
    entries.sort_by_key(|&(major, minor, _)| (major, minor));
    let mut ptr = vec![0usize; n + 1];
    let mut idx = Vec::with_capacity(entries.len());
    let mut values = Vec::with_capacity(entries.len());
    let mut last: Option<(usize, usize)> = None;
    for (major, minor, v) in entries {
        if last == Some((major, minor)) {
            *values.last_mut().expect("duplicate implies a prior entry") += v;
        } else {
            idx.push(minor);
            values.push(v);
            ptr[major + 1] += 1;
            last = Some((major, minor));
        }
    }
    for major in 0..n {
        ptr[major + 1] += ptr[major];
    }
    (ptr, idx, values)
}

impl<T: Scalar> CsrMatrix<T> {
    /// Build from raw compressed-row arrays, validating canonical form:
    /// `row_ptr` of length `n + 1` starting at 0 and nondecreasing, column
    /// indices strictly increasing within each row and `< n`, and a value
    /// array matching the index array (or empty for a pattern).
    pub fn new(n: usize, row_ptr: Vec<usize>, col_idx: Vec<usize>, values: Vec<T>) -> Result<Self> {
        validate_compressed(n, &row_ptr, &col_idx, values.len(), "row", "column")?;
        Ok(Self {
            n,
            row_ptr,
            col_idx,
            values,
        })
    }

    /// Canonicalize an arbitrary triplet list (sums duplicates). Callers must
    /// have bounds-checked the indices. Crate-internal: public constructors
    /// reject non-canonical input instead of fixing it.
    pub(crate) fn from_triplets(n: usize, entries: Vec<(usize, usize, T)>) -> Self {
        let (row_ptr, col_idx, values) = compress_triplets(n, entries);
        Self {
            n,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Column indices of row `i`.
    pub fn row_cols(&self, i: usize) -> &[usize] {
        &self.col_idx[self.row_ptr[i]..self.row_ptr[i + 1]]
    }

    /// Column indices and values of row `i`. Panics on pattern-only storage.
    pub fn row(&self, i: usize) -> (&[usize], &[T]) {
        let (lo, hi) = (self.row_ptr[i], self.row_ptr[i + 1]);
        (&self.col_idx[lo..hi], &self.values[lo..hi])
    }

    /// Convert to compressed column form. The result represents the same
    /// matrix; only the storage order changes. With `with_values` off (or on
    /// pattern-only input) the result carries the pattern alone. Runs in
    /// O(n + nnz) via a counting pass.
    pub fn to_csc(&self, with_values: bool) -> CscMatrix<T> {
        let nnz = self.nnz();
        let mut col_ptr = vec![0usize; self.n + 1];
        for &c in &self.col_idx {
            col_ptr[c + 1] += 1;
        }
        for c in 0..self.n {
            col_ptr[c + 1] += col_ptr[c];
        }
        let carry = with_values && self.has_values();
        let mut row_idx = vec![0usize; nnz];
        let mut values = if carry { vec![T::ZERO; nnz] } else { Vec::new() };
        let mut cursor = col_ptr[..self.n].to_vec();
        for r in 0..self.n {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.col_idx[k];
                let dst = cursor[c];
                cursor[c] += 1;
                row_idx[dst] = r;
                if carry {
                    values[dst] = self.values[k];
                }
            }
        }
        // Rows are scanned in increasing order, so each column receives its
        // row indices already sorted: the result is canonical by construction.
        CscMatrix {
            n: self.n,
            col_ptr,
            row_idx,
            values,
        }
    }
}

impl<T: Scalar> CscMatrix<T> {
    /// Build from raw compressed-column arrays; the exact mirror of
    /// [`CsrMatrix::new`].
    pub fn new(n: usize, col_ptr: Vec<usize>, row_idx: Vec<usize>, values: Vec<T>) -> Result<Self> {
        validate_compressed(n, &col_ptr, &row_idx, values.len(), "column", "row")?;
        Ok(Self {
            n,
            col_ptr,
            row_idx,
            values,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.row_idx.len()
    }

    pub fn col_ptr(&self) -> &[usize] {
        &self.col_ptr
    }

    pub fn row_idx(&self) -> &[usize] {
        &self.row_idx
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Row indices of column `j`.
    pub fn col_rows(&self, j: usize) -> &[usize] {
        &self.row_idx[self.col_ptr[j]..self.col_ptr[j + 1]]
    }

    /// Row indices and values of column `j`. Panics on pattern-only storage.
    pub fn col(&self, j: usize) -> (&[usize], &[T]) {
        let (lo, hi) = (self.col_ptr[j], self.col_ptr[j + 1]);
        (&self.row_idx[lo..hi], &self.values[lo..hi])
    }

    /// Convert to compressed row form; the exact mirror of
    /// [`CsrMatrix::to_csc`], so converting back and forth reproduces every
    /// array bit for bit.
    pub fn to_csr(&self, with_values: bool) -> CsrMatrix<T> {
        let nnz = self.nnz();
        let mut row_ptr = vec![0usize; self.n + 1];
        for &r in &self.row_idx {
            row_ptr[r + 1] += 1;
        }
        for r in 0..self.n {
            row_ptr[r + 1] += row_ptr[r];
        }
        let carry = with_values && self.has_values();
        let mut col_idx = vec![0usize; nnz];
        let mut values = if carry { vec![T::ZERO; nnz] } else { Vec::new() };
        let mut cursor = row_ptr[..self.n].to_vec();
        for c in 0..self.n {
            for k in self.col_ptr[c]..self.col_ptr[c + 1] {
                let r = self.row_idx[k];
                let dst = cursor[r];
                cursor[r] += 1;
                col_idx[dst] = c;
                if carry {
                    values[dst] = self.values[k];
                }
            }
        }
        CsrMatrix {
            n: self.n,
            row_ptr,
            col_idx,
            values,
        }
    }
}

impl<T: Scalar> Storage for CsrMatrix<T> {
    type Elem = T;

    fn dim(&self) -> usize {
        self.n
    }

    fn entry_count(&self) -> usize {
        self.nnz()
    }

    fn has_values(&self) -> bool {
        !self.values.is_empty() || self.col_idx.is_empty()
    }

    fn for_each_entry(&self, mut f: impl FnMut(usize, usize)) {
        for r in 0..self.n {
            for &c in self.row_cols(r) {
                f(r, c);
            }
        }
    }
}

impl<T: Scalar> Storage for CscMatrix<T> {
    type Elem = T;

    fn dim(&self) -> usize {
        self.n
    }

    fn entry_count(&self) -> usize {
        self.nnz()
    }

    fn has_values(&self) -> bool {
        !self.values.is_empty() || self.row_idx.is_empty()
    }

    fn for_each_entry(&self, mut f: impl FnMut(usize, usize)) {
        for c in 0..self.n {
            for &r in self.col_rows(c) {
                f(r, c);
            }
        }
    }
}
