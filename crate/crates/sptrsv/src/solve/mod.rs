//! Triangular solvers and their prepared execution state.
//!
//! Six solver variants cover the cross product of traversal direction and
//! scheduling strategy:
//!
//! | kind        | storage | parallel | coordination                        |
//! |-------------|---------|----------|-------------------------------------|
//! | `seq-row`   | rows    | no       | dependency-order loop               |
//! | `seq-col`   | columns | no       | dependency-order loop               |
//! | `level-row` | rows    | yes      | barrier between levels              |
//! | `level-col` | columns | yes      | barrier between levels              |
//! | `self-row`  | rows    | yes      | per-unknown dependency counters     |
//! | `self-col`  | columns | yes      | per-unknown dependency counters     |
//!
//! Row kernels *gather*: unknown `i` dots its strict row against already
//! finished entries of `x`. Column kernels *scatter*: finished unknown `j`
//! subtracts `a[i][j] * x[j]` from every pending `x[i]`. Level kernels walk
//! a [`LevelSchedule`] with one barrier per level; self-scheduling kernels
//! take the same schedule as a deadlock-free work order but replace the
//! barriers with busy-waits on per-unknown counters, so an unknown starts
//! the moment its own dependencies resolve.
//!
//! [`SolveContext::prepare`] builds whatever state a kind needs and reports
//! which preprocessing steps ran and how long they took, with one
//! accounting rule: converting the matrix into the solver's *native*
//! storage orientation is free (the operator is assumed available in either
//! layout), while any *additional* structure — a transposed pattern for
//! row-wise notification, dependency counts, the level arrays themselves —
//! is charged to setup. That makes setup costs comparable across kinds and
//! feeds the amortization analysis in [`crate::bench`].

mod kernels;

pub use kernels::{
    solve_level_col, solve_level_row, solve_self_col, solve_self_row, solve_seq_col,
    solve_seq_row,
};

use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::schedule::kahn::kahn_levels_parallel;
use crate::schedule::levels::{levels_colwise, levels_rowwise};
use crate::schedule::{DependencyCounts, LevelSchedule};
use crate::sparse::triangular::{ColFactor, RowFactor};
use crate::sparse::CscMatrix;

/// How long a self-scheduling worker may wait on one unknown before the
/// solve is abandoned as stuck.
pub const DEFAULT_SPIN_TIMEOUT: Duration = Duration::from_secs(60);

/// The six solver variants; see the module docs for the taxonomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverKind {
    SeqRow,
    SeqCol,
    LevelRow,
    LevelCol,
    SelfRow,
    SelfCol,
}

impl SolverKind {
    /// Every kind, in presentation order.
    pub const ALL: [SolverKind; 6] = [
        SolverKind::SeqRow,
        SolverKind::SeqCol,
        SolverKind::LevelRow,
        SolverKind::LevelCol,
        SolverKind::SelfRow,
        SolverKind::SelfCol,
    ];

    /// Stable label used on the command line and in benchmark output.
    pub fn label(self) -> &'static str {
        match self {
            SolverKind::SeqRow => "seq-row",
            SolverKind::SeqCol => "seq-col",
            SolverKind::LevelRow => "level-row",
            SolverKind::LevelCol => "level-col",
            SolverKind::SelfRow => "self-row",
            SolverKind::SelfCol => "self-col",
        }
    }

    /// Whether the kind runs multiple workers.
    pub fn is_parallel(self) -> bool {
        !matches!(self, SolverKind::SeqRow | SolverKind::SeqCol)
    }

    fn uses_rows(self) -> bool {
        matches!(
            self,
            SolverKind::SeqRow | SolverKind::LevelRow | SolverKind::SelfRow
        )
    }

    fn uses_counters(self) -> bool {
        matches!(self, SolverKind::SelfRow | SolverKind::SelfCol)
    }

    fn uses_schedule(self) -> bool {
        self.is_parallel()
    }
}

impl std::fmt::Display for SolverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SolverKind::ALL
            .into_iter()
            .find(|kind| kind.label() == s)
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "unknown solver '{s}' (expected one of: seq-row, seq-col, \
                     level-row, level-col, self-row, self-col)"
                ))
            })
    }
}

/// How the level schedule is computed during setup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SetupMode {
    /// One sequential sweep in dependency order.
    Sequential,
    /// Parallel breadth-first peeling of the dependency graph.
    Kahn,
}

impl SetupMode {
    pub fn label(self) -> &'static str {
        match self {
            SetupMode::Sequential => "seq",
            SetupMode::Kahn => "kahn",
        }
    }
}

impl std::fmt::Display for SetupMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SetupMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "seq" | "sequential" => Ok(SetupMode::Sequential),
            "kahn" => Ok(SetupMode::Kahn),
            _ => Err(Error::InvalidInput(format!(
                "unknown setup mode '{s}' (expected 'seq' or 'kahn')"
            ))),
        }
    }
}

/// One preprocessing step charged to setup time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetupOp {
    /// Building the strict pattern in the opposite storage orientation.
    Transpose,
    /// Counting each unknown's unresolved dependencies.
    DependencyCounts,
    /// Level computation by sequential sweep.
    LevelsSequential,
    /// Level computation by parallel peeling.
    LevelsKahn,
}

impl SetupOp {
    pub fn label(self) -> &'static str {
        match self {
            SetupOp::Transpose => "transpose",
            SetupOp::DependencyCounts => "dependency-counts",
            SetupOp::LevelsSequential => "levels-sequential",
            SetupOp::LevelsKahn => "levels-kahn",
        }
    }
}

impl std::fmt::Display for SetupOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// What `prepare` did and how long the charged part took.
#[derive(Debug, Clone, PartialEq)]
pub struct SetupReport {
    /// Charged preprocessing steps, in execution order.
    pub ops: Vec<SetupOp>,
    /// Wall-clock seconds spent on the charged steps.
    pub seconds: f64,
}

impl SetupReport {
    /// The op list as a stable single-token string, e.g.
    /// `transpose+dependency-counts+levels-kahn`, or `none`.
    pub fn ops_label(&self) -> String {
        if self.ops.is_empty() {
            "none".to_string()
        } else {
            self.ops
                .iter()
                .map(|op| op.label())
                .collect::<Vec<_>>()
                .join("+")
        }
    }
}

/// A triangular factor packaged with everything one solver kind needs to
/// run repeatedly: storage in the right orientation, the level schedule,
/// counter seeds, and the notification pattern, as applicable.
#[derive(Debug, Clone)]
pub struct SolveContext<T: Scalar> {
    pub(crate) kind: SolverKind,
    pub(crate) workers: usize,
    pub(crate) n: usize,
    pub(crate) row: Option<RowFactor<T>>,
    pub(crate) col: Option<ColFactor<T>>,
    pub(crate) schedule: Option<LevelSchedule>,
    pub(crate) counts: Option<DependencyCounts>,
    pub(crate) outgoing: Option<CscMatrix<T>>,
    pub(crate) spin_timeout: Duration,
}

impl<T: Scalar> SolveContext<T> {
    /// Build the execution state for `kind` from a factor in row storage,
    /// returning the context and the setup accounting.
    ///
    /// Conversion to the solver's native storage orientation is not
    /// charged; see the module docs for the accounting rule. `workers` is
    /// used both for Kahn setup and later solves.
    pub fn prepare(
        factor: &RowFactor<T>,
        kind: SolverKind,
        mode: SetupMode,
        workers: usize,
    ) -> Result<(Self, SetupReport)> {
        let workers = workers.max(1);
        let orientation = factor.orientation();
        let n = factor.n();

        // Uncharged: native storage for column kernels.
        let col = if kind.uses_rows() {
            None
        } else {
            Some(factor.to_column_form())
        };
        let row = kind.uses_rows().then(|| factor.clone());

        let mut ops = Vec::new();
        let started = Instant::now();

        // A row-storage solver that must walk *outgoing* edges (to notify
        // dependents, or to peel levels breadth-first) needs the strict
        // pattern transposed; that work is charged.
        let build_outgoing = matches!(kind, SolverKind::SelfRow)
            || (kind == SolverKind::LevelRow && mode == SetupMode::Kahn);
        let outgoing = if build_outgoing {
            ops.push(SetupOp::Transpose);
            Some(factor.strict().to_csc(false))
        } else {
            None
        };

        let needs_counts = kind.uses_counters()
            || (kind.uses_schedule() && mode == SetupMode::Kahn);
        let counts = if needs_counts {
            ops.push(SetupOp::DependencyCounts);
            Some(if kind.uses_rows() {
                DependencyCounts::from_rows(factor.strict())
            } else {
                DependencyCounts::from_columns(col.as_ref().unwrap().strict())
            })
        } else {
            None
        };

        let schedule = if kind.uses_schedule() {
            Some(match mode {
                SetupMode::Sequential => {
                    ops.push(SetupOp::LevelsSequential);
                    let levels = if kind.uses_rows() {
                        levels_rowwise(factor.strict(), orientation)?
                    } else {
                        levels_colwise(col.as_ref().unwrap().strict(), orientation)?
                    };
                    LevelSchedule::from_levels(&levels)
                }
                SetupMode::Kahn => {
                    ops.push(SetupOp::LevelsKahn);
                    let edges: &CscMatrix<T> = outgoing
                        .as_ref()
                        .unwrap_or_else(|| col.as_ref().unwrap().strict());
                    kahn_levels_parallel(
                        edges,
                        counts.clone().unwrap(),
                        workers,
                        true,
                    )?
                }
            })
        } else {
            None
        };

        let seconds = started.elapsed().as_secs_f64();

        // Retain only what the kernel reads at solve time.
        let counts = if kind.uses_counters() { counts } else { None };
        let outgoing = if kind == SolverKind::SelfRow {
            outgoing
        } else {
            None
        };

        let ctx = Self {
            kind,
            workers,
            n,
            row,
            col,
            schedule,
            counts,
            outgoing,
            spin_timeout: DEFAULT_SPIN_TIMEOUT,
        };
        Ok((ctx, SetupReport { ops, seconds }))
    }

    /// Replace the busy-wait watchdog used by self-scheduling kernels.
    pub fn with_spin_timeout(mut self, timeout: Duration) -> Self {
        self.spin_timeout = timeout;
        self
    }

    /// The solver kind this context was prepared for.
    pub fn kind(&self) -> SolverKind {
        self.kind
    }

    /// Worker count used by parallel kernels (and Kahn setup).
    pub fn workers(&self) -> usize {
        self.workers
    }

    /// Number of unknowns.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The level schedule, for kinds that use one.
    pub fn schedule(&self) -> Option<&LevelSchedule> {
        self.schedule.as_ref()
    }

    /// Entry count of the factor including its diagonal — the work measure
    /// a solve is charged with.
    pub fn nnz_with_diagonal(&self) -> usize {
        let strict_nnz = match (&self.row, &self.col) {
            (Some(row), _) => row.strict().nnz(),
            (None, Some(col)) => col.strict().nnz(),
            (None, None) => unreachable!("context always holds one storage form"),
        };
        strict_nnz + self.n
    }

    /// Solve in place: on entry `x` is the right-hand side, on exit the
    /// solution.
    pub fn solve(&self, x: &mut [T]) -> Result<()> {
        match self.kind {
            SolverKind::SeqRow => {
                solve_seq_row(self.row.as_ref().expect("row context"), x)
            }
            SolverKind::SeqCol => {
                solve_seq_col(self.col.as_ref().expect("column context"), x)
            }
            SolverKind::LevelRow => solve_level_row(self, x),
            SolverKind::LevelCol => solve_level_col(self, x),
            SolverKind::SelfRow => solve_self_row(self, x),
            SolverKind::SelfCol => solve_self_col(self, x),
        }
    }
}

/// Solve the paired system `upper_factor * (lower_factor * y) = x` — the
/// smoothing/preconditioning step both factors participate in: one forward
/// and one backward substitution back to back with the same solver setup.
pub fn lu_pair_solve<T: Scalar>(
    lower: &SolveContext<T>,
    upper: &SolveContext<T>,
    x: &[T],
) -> Result<Vec<T>> {
    let mut y = x.to_vec();
    lower.solve(&mut y)?;
    upper.solve(&mut y)?;
    Ok(y)
}
