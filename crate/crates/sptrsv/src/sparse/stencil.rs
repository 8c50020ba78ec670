//! Finite-difference Laplacian generators on regular grids.
//!
//! Nodes are numbered lexicographically with x fastest: node `(ix, iy, iz)`
//! has index `ix + nx * (iy + ny * iz)`. Each row couples a node to its
//! stencil neighborhood: the 5-point (2-D) and 7-point (3-D) stencils use the
//! axis neighbors, the 9-point and 27-point stencils the full unit-cube
//! neighborhood. Off-diagonal entries are -1 and the diagonal is the interior
//! neighbor count (stencil size minus one) everywhere, so interior rows sum
//! to zero while boundary rows remain diagonally dominant.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::CsrMatrix;

/// Neighborhood shape used by a stencil.
enum Reach {
    /// Axis-aligned unit steps only (5-point / 7-point).
    Axis,
    /// Every node of the surrounding unit cube (9-point / 27-point).
    Box,
}

fn admit(reach: &Reach, dx: i64, dy: i64, dz: i64) -> bool {
    if (dx, dy, dz) == (0, 0, 0) {
        return false;
    }
    match reach {
        Reach::Axis => dx.abs() + dy.abs() + dz.abs() == 1,
        Reach::Box => true,
    }
}

fn build<T: Scalar>(
    nx: usize,
    ny: usize,
    nz: usize,
    reach: Reach,
    stencil: usize,
) -> Result<CsrMatrix<T>> {
    if nx == 0 || ny == 0 || nz == 0 {
        return Err(Error::InvalidInput(
            "grid dimensions must all be at least 1".to_string(),
        ));
    }
    let n = nx
        .checked_mul(ny)
        .and_then(|p| p.checked_mul(nz))
        .ok_or(Error::DimensionOverflow)?;
    n.checked_mul(stencil).ok_or(Error::DimensionOverflow)?;

    let diag = T::from_f64((stencil - 1) as f64);
    let off = -T::ONE;

    let mut row_ptr = Vec::with_capacity(n + 1);
    row_ptr.push(0);
    let mut col_idx = Vec::new();
    let mut values = Vec::new();

    for iz in 0..nz as i64 {
        for iy in 0..ny as i64 {
            for ix in 0..nx as i64 {
                // Offsets scanned in (dz, dy, dx) lexicographic order produce
                // strictly increasing column indices, keeping the row canonical.
                for dz in -1..=1i64 {
                    let z = iz + dz;
                    if z < 0 || z >= nz as i64 {
                        continue;
                    }
                    for dy in -1..=1i64 {
                        let y = iy + dy;
                        if y < 0 || y >= ny as i64 {
                            continue;
                        }
                        for dx in -1..=1i64 {
                            let x = ix + dx;
                            if x < 0 || x >= nx as i64 {
                                continue;
                            }
                            let own = (dx, dy, dz) == (0, 0, 0);
                            if !own && !admit(&reach, dx, dy, dz) {
                                continue;
                            }
                            let col = x as usize + nx * (y as usize + ny * z as usize);
                            col_idx.push(col);
                            values.push(if own { diag } else { off });
                        }
                    }
                }
                row_ptr.push(col_idx.len());
            }
        }
    }

    CsrMatrix::new(n, row_ptr, col_idx, values)
}

/// Discrete Laplacian on an `nx` x `ny` grid. `stencil` selects the 5-point
/// (axis neighbors) or 9-point (full ring) coupling.
pub fn gen_laplacian_2d<T: Scalar>(nx: usize, ny: usize, stencil: usize) -> Result<CsrMatrix<T>> {
    let reach = match stencil {
        5 => Reach::Axis,
        9 => Reach::Box,
        other => {
            return Err(Error::InvalidInput(format!(
                "2-D stencil must be 5 or 9, got {other}"
            )))
        }
    };
    build(nx, ny, 1, reach, stencil)
}

/// Discrete Laplacian on an `nx` x `ny` x `nz` grid. `stencil` selects the
/// 7-point (axis neighbors) or 27-point (full cube) coupling.
pub fn gen_laplacian_3d<T: Scalar>(
    nx: usize,
    ny: usize,
    nz: usize,
    stencil: usize,
) -> Result<CsrMatrix<T>> {
    let reach = match stencil {
        7 => Reach::Axis,
        27 => Reach::Box,
        other => {
            return Err(Error::InvalidInput(format!(
                "3-D stencil must be 7 or 27, got {other}"
            )))
        }
    };
    build(nx, ny, nz, reach, stencil)
}
