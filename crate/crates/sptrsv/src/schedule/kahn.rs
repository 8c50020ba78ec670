//! Parallel breadth-first schedule construction (Kahn's algorithm).
//!
//! The sequential routines in [`super::levels`] need a full dependency-order
//! sweep, which is as serial as the solve itself. This builder instead peels
//! the dependency DAG level by level with all workers cooperating:
//!
//! 1. **Roots.** Every worker scans a static slice of the unknowns and
//!    appends those with a zero dependency count to the shared order array,
//!    claiming slots with an atomic cursor. These form level 1.
//! 2. **Rounds.** Workers split the just-completed level cyclically. For
//!    each of their unknowns they walk its *outgoing* edges (column storage:
//!    the unknowns that depend on it) and decrement each dependent's
//!    counter. The worker whose decrement drives a counter to zero appends
//!    that dependent — exactly one worker observes the transition 1 → 0, so
//!    each unknown is claimed once. The appends accumulated during a round
//!    form the next level.
//! 3. A round that appends nothing while unknowns remain means some counters
//!    can never drain: the "dependency graph" had a cycle, so the input was
//!    not triangular. That is reported rather than asserted because the
//!    counts may come from untrusted input.
//!
//! Between rounds a barrier separates the "drain counters" phase from the
//! "advance level window" phase; worker 0 does the bookkeeping in between.
//! Within a round all counter traffic uses release/acquire-free atomics —
//! ordering is provided wholesale by the barrier, which is cheaper and
//! leaves the counter decrements as plain `fetch_sub(1, Relaxed)`.
//!
//! Slot claims make the order within a level nondeterministic under real
//! concurrency. With `normalize` set (the default choice throughout this
//! crate) each finished level is sorted ascending, which makes the result
//! identical to [`LevelSchedule::from_levels`] applied to the sequential
//! level arrays — schedules become comparable across builders and worker
//! counts, and downstream solvers see a deterministic traversal.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::par::{run_workers, SpinBarrier};
use crate::scalar::Scalar;
use crate::schedule::{DependencyCounts, LevelSchedule};
use crate::sparse::CscMatrix;

/// Build a level schedule by parallel breadth-first peeling.
///
/// `outgoing` is the strict triangle in column storage: column `v` lists the
/// unknowns that depend on `v`. `counts` seeds the per-unknown dependency
/// counters and is consumed — the peel drains it to zeros. `workers` is the
/// number of cooperating threads; `normalize` sorts each level (see the
/// module docs).
pub fn kahn_levels_parallel<T: Scalar>(
    outgoing: &CscMatrix<T>,
    counts: DependencyCounts,
    workers: usize,
    normalize: bool,
) -> Result<LevelSchedule> {
    let n = outgoing.n();
    if counts.len() != n {
        return Err(Error::InvalidInput(format!(
            "dependency counts cover {} unknowns but the matrix has {n}",
            counts.len()
        )));
    }
    debug_assert_eq!(
        counts,
        DependencyCounts::from_columns(outgoing),
        "counts must equal the in-degrees of the outgoing-edge matrix"
    );
    if n == 0 {
        return Ok(LevelSchedule::from_parts(vec![0], Vec::new()));
    }
    let workers = workers.max(1).min(n);

    let pending: Vec<AtomicUsize> = counts
        .counts()
        .iter()
        .map(|&c| AtomicUsize::new(c))
        .collect();
    let slots: Vec<AtomicUsize> = (0..n).map(|_| AtomicUsize::new(usize::MAX)).collect();
    let tail = AtomicUsize::new(0);

    // Round window and termination state, written by worker 0 between the
    // two barrier crossings of each round.
    let round_start = AtomicUsize::new(0);
    let round_end = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);
    let cyclic = AtomicBool::new(false);
    let offsets = Mutex::new(vec![0usize]);
    let barrier = SpinBarrier::new(workers);

    run_workers(workers, |w| {
        // Roots: static slices keep the scan contention-free.
        for i in (w..n).step_by(workers) {
            if pending[i].load(Ordering::Relaxed) == 0 {
                let slot = tail.fetch_add(1, Ordering::Relaxed);
                slots[slot].store(i, Ordering::Relaxed);
            }
        }
        barrier.wait();
        if w == 0 {
            let end = tail.load(Ordering::Relaxed);
            if end == 0 {
                cyclic.store(true, Ordering::Relaxed);
                stop.store(true, Ordering::Relaxed);
            } else {
                offsets.lock().unwrap().push(end);
                round_start.store(0, Ordering::Relaxed);
                round_end.store(end, Ordering::Relaxed);
                if end == n {
                    stop.store(true, Ordering::Relaxed);
                }
            }
        }
        barrier.wait();

        while !stop.load(Ordering::Relaxed) {
            let start = round_start.load(Ordering::Relaxed);
            let end = round_end.load(Ordering::Relaxed);
            let mut pos = start + w;
            while pos < end {
                let v = slots[pos].load(Ordering::Relaxed);
                for &dependent in outgoing.col_rows(v) {
                    if pending[dependent].fetch_sub(1, Ordering::Relaxed) == 1 {
                        let slot = tail.fetch_add(1, Ordering::Relaxed);
                        slots[slot].store(dependent, Ordering::Relaxed);
                    }
                }
                pos += workers;
            }
            barrier.wait();
            if w == 0 {
                let new_end = tail.load(Ordering::Relaxed);
                if new_end == end {
                    // No progress with unknowns outstanding: a cycle.
                    cyclic.store(true, Ordering::Relaxed);
                    stop.store(true, Ordering::Relaxed);
                } else {
                    offsets.lock().unwrap().push(new_end);
                    round_start.store(end, Ordering::Relaxed);
                    round_end.store(new_end, Ordering::Relaxed);
                    if new_end == n {
                        stop.store(true, Ordering::Relaxed);
                    }
                }
            }
            barrier.wait();
        }
        Ok(())
    })?;

    let emitted = tail.load(Ordering::Relaxed);
    if cyclic.load(Ordering::Relaxed) {
        return Err(Error::CycleDetected { emitted, total: n });
    }
    assert_eq!(emitted, n, "peel terminated without emitting every unknown");
    assert!(
        pending.iter().all(|c| c.load(Ordering::Relaxed) == 0),
        "dependency counters must be fully drained on success"
    );

    let mut order: Vec<usize> = slots
        .iter()
        .map(|slot| slot.load(Ordering::Relaxed))
        .collect();
    let offsets = offsets.into_inner().unwrap();
    if normalize {
        for window in offsets.windows(2) {
            order[window[0]..window[1]].sort_unstable();
        }
    }
    Ok(LevelSchedule::from_parts(offsets, order))
}
