//! Shared-memory parallel sparse triangular solves.
//!
//! Forward substitution `(L + D) x = f` and backward substitution
//! `(U + D) x = f` are the serial bottleneck of many sparse computations:
//! each unknown may depend on earlier unknowns, so the rows (or columns)
//! cannot simply be divided among threads. This crate implements the two
//! classic ways around that on multicore CPUs, in both a row-wise (gather)
//! and a column-wise (scatter) formulation:
//!
//! * **Level scheduling** groups unknowns into levels — all unknowns whose
//!   longest dependency chain has the same length — and solves one level at
//!   a time with a barrier in between ([`SolverKind::LevelRow`],
//!   [`SolverKind::LevelCol`]).
//! * **Concurrent self-scheduling** skips the barriers: every worker
//!   busy-waits on a per-unknown dependency counter and publishes its
//!   result the moment it is ready ([`SolverKind::SelfRow`],
//!   [`SolverKind::SelfCol`]).
//!
//! Sequential kernels ([`SolverKind::SeqRow`], [`SolverKind::SeqCol`]) serve
//! as baselines. The analysis needed before a parallel solve — dependency
//! counts, level assignment (either by a sequential sweep or by a parallel
//! topological peel), and any storage transposition — is performed by
//! [`SolveContext::prepare`], which also reports what it did and how long it
//! took so the one-time cost can be amortized against per-solve gains
//! ([`break_even_solves`]).
//!
//! The row-wise kernels accumulate each unknown's dot product in the same
//! order at any worker count, so their results are bitwise identical to the
//! sequential row kernel's. The column-wise kernels scatter updates in a
//! nondeterministic order and are reproducible only up to rounding.
//!
//! # Example
//!
//! ```
//! use sptrsv::{
//!     gen_laplacian_2d, lu_pair_solve, relative_inf_diff, split_triangular, SetupMode,
//!     SolveContext, SolverKind,
//! };
//!
//! // A five-point Poisson matrix on an 8 x 8 grid, split into strictly
//! // triangular halves that share its diagonal.
//! let a = gen_laplacian_2d::<f64>(8, 8, 5)?;
//! let (lower, upper) = split_triangular(&a)?;
//!
//! // Prepare the concurrent column solver for both halves; preparation
//! // itself runs the parallel level analysis on two workers.
//! let (ctx_l, report) =
//!     SolveContext::prepare(&lower, SolverKind::SelfCol, SetupMode::Kahn, 2)?;
//! let (ctx_u, _) = SolveContext::prepare(&upper, SolverKind::SelfCol, SetupMode::Kahn, 2)?;
//! assert_eq!(report.ops_label(), "dependency-counts+levels-kahn");
//!
//! // Paired substitution: y = (L + D)^-1 f, then x = (U + D)^-1 y.
//! let f = vec![1.0; 64];
//! let x = lu_pair_solve(&ctx_l, &ctx_u, &f)?;
//!
//! // Applying the factors in sequence reproduces the right-hand side.
//! let back = lower.apply(&upper.apply(&x));
//! assert!(relative_inf_diff(&back, &f) < 1e-12);
//! # Ok::<(), sptrsv::Error>(())
//! ```

pub mod bench;
pub mod error;
mod par;
pub mod scalar;
pub mod schedule;
pub mod solve;
pub mod sparse;
pub mod testing;

pub use bench::{
    break_even_solves, gflops, run_suite, standard_grids, time_paired_solve,
    time_paired_solve_with, write_csv, write_table, BenchRecord, BreakEven, Clock,
    MatrixSource, MonotonicClock, Precision, RhsSpec, SuiteConfig, SuiteOutcome, CSV_COLUMNS,
    CSV_SCHEMA_VERSION, VERIFY_REL_TOL_F32, VERIFY_REL_TOL_F64,
};
pub use error::{Error, Result};
pub use scalar::{inf_norm, relative_inf_diff, Scalar};
pub use schedule::kahn::kahn_levels_parallel;
pub use schedule::levels::{levels_colwise, levels_rowwise};
pub use schedule::{DependencyCounts, LevelSchedule};
pub use solve::{
    lu_pair_solve, solve_level_col, solve_level_row, solve_self_col, solve_self_row,
    solve_seq_col, solve_seq_row, SetupMode, SetupOp, SetupReport, SolveContext, SolverKind,
    DEFAULT_SPIN_TIMEOUT,
};
pub use sparse::{
    gen_laplacian_2d, gen_laplacian_3d, read_matrix_market, split_triangular,
    write_matrix_market, ColFactor, CscMatrix, CsrMatrix, Orientation, RowFactor, Storage,
    TriangularFactor,
};
