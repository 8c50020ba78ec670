//! The six substitution kernels.
//!
//! All kernels solve `factor * x = f` in place (`x` holds `f` on entry, the
//! solution on exit). Row kernels compute each unknown with one gather:
//!
//! ```text
//! x[i] = (f[i] - sum_k a[i][col[k]] * x[col[k]]) / d[i]
//! ```
//!
//! and every row-family kernel funnels that sum through the same
//! [`gather`] helper in storage order, so `seq-row`, `level-row`, and
//! `self-row` execute bit-identical arithmetic per unknown — their results
//! are exactly equal, not merely close. Column kernels scatter instead:
//! once `x[j]` is final, `a[i][j] * x[j]` is subtracted from each pending
//! `x[i]`. Under parallel execution those subtractions interleave in
//! nondeterministic order, so column results are reproducible only up to
//! floating-point reassociation (tiny relative differences), which is the
//! price of the cheaper scatter traversal.
//!
//! Parallel kernels share the solution vector through word-atomic cells
//! ([`crate::scalar::atomic_view`]) and split each level (or the whole
//! schedule order, for self-scheduling) cyclically: worker `w` of `P`
//! takes positions `w, w + P, w + 2P, ...` and processes them in
//! ascending order. For the self-scheduling kernels that static order is
//! what makes busy-waiting deadlock-free: the earliest unfinished position
//! only waits on strictly earlier positions, each of which is first in
//! some worker's remaining work, so one of them can always run.
//!
//! Memory ordering contract for the counter-gated kernels: a finished
//! value is published with `Release` (row family: the value store itself;
//! column family: the atomic subtraction carrying the contribution), each
//! counter decrement is `Release`, and the gate is an `Acquire` read of
//! the counter — observing zero therefore proves every contribution *and*
//! every predecessor value is visible. Level kernels need none of that:
//! the per-level barrier orders everything, so their element traffic is
//! `Relaxed`.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::par::{run_workers, wait_until, SpinBarrier, WaitOutcome};
use crate::scalar::{atomic_view, AtomicScalar, Scalar};
use crate::solve::SolveContext;
use crate::sparse::triangular::{ColFactor, Orientation, RowFactor};

/// Accumulate `sum_k vals[k] * read(cols[k])` in storage order. Every
/// row-family kernel uses this one definition — see the module docs.
#[inline(always)]
fn gather<T: Scalar>(cols: &[usize], vals: &[T], read: impl Fn(usize) -> T) -> T {
    let mut sum = T::ZERO;
    for (&j, &a) in cols.iter().zip(vals) {
        sum += a * read(j);
    }
    sum
}

/// Sequential row-oriented substitution in dependency order.
pub fn solve_seq_row<T: Scalar>(factor: &RowFactor<T>, x: &mut [T]) -> Result<()> {
    let n = factor.n();
    if x.len() != n {
        return Err(Error::InvalidInput(format!(
            "right-hand side has {} entries but the factor has {n} unknowns",
            x.len()
        )));
    }
    let strict = factor.strict();
    let diag = factor.diag();
    let mut step = |i: usize| {
        let (cols, vals) = strict.row(i);
        let sum = gather(cols, vals, |j| x[j]);
        x[i] = (x[i] - sum) / diag[i];
    };
    match factor.orientation() {
        Orientation::Lower => (0..n).for_each(&mut step),
        Orientation::Upper => (0..n).rev().for_each(&mut step),
    }
    Ok(())
}

/// Sequential column-oriented substitution in dependency order.
pub fn solve_seq_col<T: Scalar>(factor: &ColFactor<T>, x: &mut [T]) -> Result<()> {
    let n = factor.n();
    if x.len() != n {
        return Err(Error::InvalidInput(format!(
            "right-hand side has {} entries but the factor has {n} unknowns",
            x.len()
        )));
    }
    let strict = factor.strict();
    let diag = factor.diag();
    let mut step = |j: usize| {
        let xj = x[j] / diag[j];
        x[j] = xj;
        let (rows, vals) = strict.col(j);
        for (&i, &a) in rows.iter().zip(vals) {
            x[i] -= a * xj;
        }
    };
    match factor.orientation() {
        Orientation::Lower => (0..n).for_each(&mut step),
        Orientation::Upper => (0..n).rev().for_each(&mut step),
    }
    Ok(())
}

fn context_schedule<'a, T: Scalar>(
    ctx: &'a SolveContext<T>,
    x: &[T],
) -> Result<&'a crate::schedule::LevelSchedule> {
    let schedule = ctx
        .schedule
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("solve context lacks a level schedule".into()))?;
    if schedule.len() != x.len() {
        return Err(Error::InvalidSchedule {
            expected: x.len(),
            found: schedule.len(),
        });
    }
    Ok(schedule)
}

/// Level-scheduled row-oriented substitution: unknowns of one level in
/// parallel, a barrier between levels.
pub fn solve_level_row<T: Scalar>(ctx: &SolveContext<T>, x: &mut [T]) -> Result<()> {
    let factor = ctx
        .row
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("solve context lacks row storage".into()))?;
    let schedule = context_schedule(ctx, x)?;
    if x.len() != factor.n() {
        return Err(Error::InvalidInput(format!(
            "right-hand side has {} entries but the factor has {} unknowns",
            x.len(),
            factor.n()
        )));
    }
    if x.is_empty() {
        return Ok(());
    }
    let strict = factor.strict();
    let diag = factor.diag();
    let workers = ctx.workers;
    let xa = atomic_view(x);
    let barrier = SpinBarrier::new(workers);
    run_workers(workers, |w| {
        for members in schedule.levels() {
            let mut p = w;
            while p < members.len() {
                let i = members[p];
                let (cols, vals) = strict.row(i);
                let sum = gather(cols, vals, |j| xa[j].load(Ordering::Relaxed));
                let fi = xa[i].load(Ordering::Relaxed);
                xa[i].store((fi - sum) / diag[i], Ordering::Relaxed);
                p += workers;
            }
            barrier.wait();
        }
        Ok(())
    })
}

/// Level-scheduled column-oriented substitution: finished unknowns of one
/// level scatter concurrently, a barrier between levels.
pub fn solve_level_col<T: Scalar>(ctx: &SolveContext<T>, x: &mut [T]) -> Result<()> {
    let factor = ctx
        .col
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("solve context lacks column storage".into()))?;
    let schedule = context_schedule(ctx, x)?;
    if x.len() != factor.n() {
        return Err(Error::InvalidInput(format!(
            "right-hand side has {} entries but the factor has {} unknowns",
            x.len(),
            factor.n()
        )));
    }
    if x.is_empty() {
        return Ok(());
    }
    let strict = factor.strict();
    let diag = factor.diag();
    let workers = ctx.workers;
    let xa = atomic_view(x);
    let barrier = SpinBarrier::new(workers);
    run_workers(workers, |w| {
        for members in schedule.levels() {
            let mut p = w;
            while p < members.len() {
                let j = members[p];
                // x[j] is complete: every column it depends on sits in an
                // earlier level, sealed by the barrier.
                let xj = xa[j].load(Ordering::Relaxed) / diag[j];
                xa[j].store(xj, Ordering::Relaxed);
                let (rows, vals) = strict.col(j);
                for (&i, &a) in rows.iter().zip(vals) {
                    // Concurrent updates of one pending x[i] from several
                    // same-level columns meet here, hence the atomic
                    // subtraction; its order is the one nondeterminism of
                    // this kernel.
                    xa[i].fetch_sub(a * xj, Ordering::Relaxed);
                }
                p += workers;
            }
            barrier.wait();
        }
        Ok(())
    })
}

/// Self-scheduled row-oriented substitution: no barriers — each unknown
/// busy-waits on its own dependency counter, computes, then decrements its
/// dependents' counters (found through the transposed pattern).
pub fn solve_self_row<T: Scalar>(ctx: &SolveContext<T>, x: &mut [T]) -> Result<()> {
    let factor = ctx
        .row
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("solve context lacks row storage".into()))?;
    let outgoing = ctx.outgoing.as_ref().ok_or_else(|| {
        Error::InvalidInput("solve context lacks the transposed pattern".into())
    })?;
    let counts = ctx
        .counts
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("solve context lacks dependency counts".into()))?;
    let schedule = context_schedule(ctx, x)?;
    if x.len() != factor.n() {
        return Err(Error::InvalidInput(format!(
            "right-hand side has {} entries but the factor has {} unknowns",
            x.len(),
            factor.n()
        )));
    }
    if x.is_empty() {
        return Ok(());
    }
    let strict = factor.strict();
    let diag = factor.diag();
    let workers = ctx.workers;
    let xa = atomic_view(x);
    let order = schedule.order();
    let pending: Vec<AtomicUsize> = counts
        .counts()
        .iter()
        .map(|&c| AtomicUsize::new(c))
        .collect();
    let abort = AtomicBool::new(false);
    run_workers(workers, |w| {
        let mut p = w;
        while p < order.len() {
            let i = order[p];
            match wait_until(
                || pending[i].load(Ordering::Acquire) == 0,
                &abort,
                ctx.spin_timeout,
            ) {
                WaitOutcome::Ready => {}
                WaitOutcome::Aborted => return Err(Error::SpinTimeout { unknown: i }),
                WaitOutcome::TimedOut => {
                    abort.store(true, Ordering::Relaxed);
                    return Err(Error::SpinTimeout { unknown: i });
                }
            }
            let (cols, vals) = strict.row(i);
            let sum = gather(cols, vals, |j| xa[j].load(Ordering::Relaxed));
            let fi = xa[i].load(Ordering::Relaxed);
            xa[i].store((fi - sum) / diag[i], Ordering::Release);
            for &dependent in outgoing.col_rows(i) {
                pending[dependent].fetch_sub(1, Ordering::Release);
            }
            p += workers;
        }
        Ok(())
    })?;
    assert!(
        pending.iter().all(|c| c.load(Ordering::Relaxed) == 0),
        "dependency counters must be exhausted after a complete solve"
    );
    Ok(())
}

/// Self-scheduled column-oriented substitution: the scatter and the counter
/// decrement fuse into one pass over the finished unknown's column.
pub fn solve_self_col<T: Scalar>(ctx: &SolveContext<T>, x: &mut [T]) -> Result<()> {
    let factor = ctx
        .col
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("solve context lacks column storage".into()))?;
    let counts = ctx
        .counts
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("solve context lacks dependency counts".into()))?;
    let schedule = context_schedule(ctx, x)?;
    if x.len() != factor.n() {
        return Err(Error::InvalidInput(format!(
            "right-hand side has {} entries but the factor has {} unknowns",
            x.len(),
            factor.n()
        )));
    }
    if x.is_empty() {
        return Ok(());
    }
    let strict = factor.strict();
    let diag = factor.diag();
    let workers = ctx.workers;
    let xa = atomic_view(x);
    let order = schedule.order();
    let pending: Vec<AtomicUsize> = counts
        .counts()
        .iter()
        .map(|&c| AtomicUsize::new(c))
        .collect();
    let abort = AtomicBool::new(false);
    run_workers(workers, |w| {
        let mut p = w;
        while p < order.len() {
            let j = order[p];
            match wait_until(
                || pending[j].load(Ordering::Acquire) == 0,
                &abort,
                ctx.spin_timeout,
            ) {
                WaitOutcome::Ready => {}
                WaitOutcome::Aborted => return Err(Error::SpinTimeout { unknown: j }),
                WaitOutcome::TimedOut => {
                    abort.store(true, Ordering::Relaxed);
                    return Err(Error::SpinTimeout { unknown: j });
                }
            }
            // The counter reaching zero proves every contribution has been
            // folded into x[j], so the accumulated value is complete.
            let xj = xa[j].load(Ordering::Relaxed) / diag[j];
            xa[j].store(xj, Ordering::Release);
            let (rows, vals) = strict.col(j);
            for (&i, &a) in rows.iter().zip(vals) {
                xa[i].fetch_sub(a * xj, Ordering::Release);
                pending[i].fetch_sub(1, Ordering::Release);
            }
            p += workers;
        }
        Ok(())
    })?;
    assert!(
        pending.iter().all(|c| c.load(Ordering::Relaxed) == 0),
        "dependency counters must be exhausted after a complete solve"
    );
    Ok(())
}
