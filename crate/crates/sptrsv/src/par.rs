//! Crate-internal worker-thread utilities shared by the parallel schedule
//! construction and the parallel solve kernels.
//!
//! Everything here assumes *cooperative* spinning: a waiting thread spins
//! only briefly before yielding to the OS scheduler. That keeps oversubscribed
//! configurations (more workers than cores — including single-core machines)
//! live: whoever can make progress gets scheduled, and a full scheduler
//! quantum is never burned busy-polling a value that only a descheduled
//! thread can produce.

use std::panic;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::thread;
use std::time::{Duration, Instant};

use crate::error::Result;

/// Run `f(0), f(1), ..., f(workers - 1)` concurrently, worker 0 on the
/// calling thread, and return the first error by worker index. Panics in
/// workers propagate to the caller.
pub(crate) fn run_workers<F>(workers: usize, f: F) -> Result<()>
where
    F: Fn(usize) -> Result<()> + Sync,
{
    assert!(workers >= 1, "at least one worker is required");
    if workers == 1 {
        return f(0);
    }
    let f = &f;
    let mut results: Vec<Result<()>> = thread::scope(|scope| {
        let handles: Vec<_> = (1..workers).map(|w| scope.spawn(move || f(w))).collect();
        let mut results = vec![f(0)];
        for h in handles {
            match h.join() {
                Ok(r) => results.push(r),
                Err(payload) => panic::resume_unwind(payload),
            }
        }
        results
    });
    if let Some(pos) = results.iter().position(Result::is_err) {
        return results.swap_remove(pos);
    }
    Ok(())
}

/// Escalating politeness for busy-waits: a short pure-spin phase, then OS
/// yields. The spin phase covers sub-microsecond handoffs between running
/// cores; the yield phase keeps oversubscribed worker sets making progress.
pub(crate) struct Backoff {
    spins: u32,
}

impl Backoff {
    const SPIN_LIMIT: u32 = 32;

    pub(crate) fn new() -> Self {
        Self { spins: 0 }
    }

    pub(crate) fn snooze(&mut self) {
        if self.spins < Self::SPIN_LIMIT {
            std::hint::spin_loop();
            self.spins += 1;
        } else {
            thread::yield_now();
        }
    }
}

/// Why a wait loop returned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum WaitOutcome {
    /// The condition became true.
    Ready,
    /// Another worker raised the shared abort flag.
    Aborted,
    /// The timeout elapsed first.
    TimedOut,
}

/// Wait until `ready()` holds, `abort` is raised, or `timeout` passes.
/// The fast path (condition already true) takes no clock reading.
pub(crate) fn wait_until(
    ready: impl Fn() -> bool,
    abort: &AtomicBool,
    timeout: Duration,
) -> WaitOutcome {
    if ready() {
        return WaitOutcome::Ready;
    }
    let start = Instant::now();
    let mut backoff = Backoff::new();
    let mut polls: u32 = 0;
    loop {
        if ready() {
            return WaitOutcome::Ready;
        }
        if abort.load(Ordering::Relaxed) {
            return WaitOutcome::Aborted;
        }
        backoff.snooze();
        polls = polls.wrapping_add(1);
        // The clock is consulted only once per 64 polls: cheap relative to a
        // yield, frequent enough for timely timeouts.
        if polls.is_multiple_of(64) && start.elapsed() >= timeout {
            return WaitOutcome::TimedOut;
        }
    }
}

/// Reusable sense-reversing barrier that spins politely. The last arriver
/// resets the count and bumps the generation; everyone else waits for the
/// generation to move. A barrier wait that stalls longer than
/// [`SpinBarrier::STALL_LIMIT`] panics — that only happens when another
/// worker died, and a loud failure beats a silent hang.
pub(crate) struct SpinBarrier {
    total: usize,
    count: AtomicUsize,
    generation: AtomicUsize,
}

impl SpinBarrier {
    const STALL_LIMIT: Duration = Duration::from_secs(120);

    pub(crate) fn new(total: usize) -> Self {
        assert!(total >= 1);
        Self {
            total,
            count: AtomicUsize::new(0),
            generation: AtomicUsize::new(0),
        }
    }

    pub(crate) fn wait(&self) {
        if self.total == 1 {
            return;
        }
        let generation = self.generation.load(Ordering::Acquire);
        let arrived = self.count.fetch_add(1, Ordering::AcqRel) + 1;
        if arrived == self.total {
            // Reset before publishing: threads entering the next generation
            // observe the reset via the release/acquire pair on `generation`.
            self.count.store(0, Ordering::Relaxed);
            self.generation.fetch_add(1, Ordering::Release);
            return;
        }
        let start = Instant::now();
        let mut backoff = Backoff::new();
        let mut polls: u32 = 0;
        while self.generation.load(Ordering::Acquire) == generation {
            backoff.snooze();
            polls = polls.wrapping_add(1);
            if polls.is_multiple_of(1024) && start.elapsed() >= Self::STALL_LIMIT {
                panic!("barrier stalled for {:?}: a worker died mid-solve", Self::STALL_LIMIT);
            }
        }
    }
}
