//! Benchmarking: timing protocol, throughput accounting, and amortization.
//!
//! The measured unit is the *paired* substitution `y = (U+D)^-1 (L+D)^-1 x`
//! — one forward and one backward solve with the same solver kind, the way
//! triangular solves appear inside smoothers and preconditioned iterations.
//! [`time_paired_solve`] runs one untimed warm-up (first-touch effects land
//! there), then times `runs` paired solves individually and reports the mean
//! seconds per pair together with the last run's solution, so callers can
//! verify the very vector that was timed. The right-hand side is restored
//! between runs outside the timed window. The clock sits behind the
//! [`Clock`] seam so the aggregation logic is testable against scripted
//! readings.
//!
//! Throughput follows the 2-flops-per-entry convention: a paired sweep
//! performs one multiply-add per strict entry and one divide per diagonal
//! entry of each triangle, counted as `2 * nnz` flops where `nnz` is the
//! entry count of the full matrix. [`gflops`] turns a mean solve time into
//! that rate.
//!
//! Parallel solvers buy faster solves with slower setup. [`break_even_solves`]
//! reports the smallest number of solves at which one (setup, per-solve)
//! cost pair undercuts another — the claim "variant A pays off after k
//! solves" made precise. The comparison is evaluated in plain `f64`
//! exactly as written, `setup_a + k * solve_a < setup_b + k * solve_b`,
//! and the search returns the first satisfying `k`, matching a linear scan
//! of the same predicate.

mod suite;

pub use suite::{
    run_suite, standard_grids, write_csv, write_table, BenchRecord, MatrixSource, Precision,
    RhsSpec, SuiteConfig, SuiteOutcome, CSV_COLUMNS, CSV_SCHEMA_VERSION,
    VERIFY_REL_TOL_F32, VERIFY_REL_TOL_F64,
};

use std::time::Instant;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::solve::SolveContext;

/// Monotonic time source, injectable for tests.
pub trait Clock {
    /// Seconds since an arbitrary fixed origin; must not decrease.
    fn now(&mut self) -> f64;
}

/// The real clock.
pub struct MonotonicClock {
    origin: Instant,
}

impl MonotonicClock {
    pub fn new() -> Self {
        Self {
            origin: Instant::now(),
        }
    }
}

impl Default for MonotonicClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for MonotonicClock {
    fn now(&mut self) -> f64 {
        self.origin.elapsed().as_secs_f64()
    }
}

/// Mean wall-clock seconds per paired solve over `runs` timed repetitions,
/// after one untimed warm-up, plus the solution vector produced by the last
/// timed run. See the module docs for the protocol.
pub fn time_paired_solve<T: Scalar>(
    lower: &SolveContext<T>,
    upper: &SolveContext<T>,
    x: &[T],
    runs: u32,
) -> Result<(f64, Vec<T>)> {
    time_paired_solve_with(&mut MonotonicClock::new(), lower, upper, x, runs)
}

/// [`time_paired_solve`] against an injected clock. The clock is read
/// exactly twice per timed run and never during warm-up or restore.
pub fn time_paired_solve_with<T: Scalar, C: Clock>(
    clock: &mut C,
    lower: &SolveContext<T>,
    upper: &SolveContext<T>,
    x: &[T],
    runs: u32,
) -> Result<(f64, Vec<T>)> {
    if runs == 0 {
        return Err(Error::InvalidInput(
            "timing requires at least one run".into(),
        ));
    }
    let mut buf = x.to_vec();

    // Warm-up: untimed, but still checked — a failure here is a failure.
    lower.solve(&mut buf)?;
    upper.solve(&mut buf)?;

    let mut total = 0.0;
    for _ in 0..runs {
        buf.copy_from_slice(x);
        let started = clock.now();
        lower.solve(&mut buf)?;
        upper.solve(&mut buf)?;
        total += clock.now() - started;
    }
    Ok((total / f64::from(runs), buf))
}

/// Throughput in GFLOP/s for one paired solve over a matrix with `entries`
/// stored entries: `2 * entries / (seconds * 1e9)`.
pub fn gflops(entries: usize, seconds: f64) -> Result<f64> {
    if !(seconds > 0.0) {
        return Err(Error::NonpositiveTime);
    }
    Ok(2.0 * entries as f64 / (seconds * 1e9))
}

/// Outcome of a setup-amortization comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BreakEven {
    /// Plan A is strictly cheaper in total once this many solves happen.
    Solves(u64),
    /// Plan A never undercuts plan B at any solve count.
    Never,
}

impl std::fmt::Display for BreakEven {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BreakEven::Solves(k) => write!(f, "{k}"),
            BreakEven::Never => f.write_str("never"),
        }
    }
}

/// Smallest `k >= 0` with `setup_a + k * solve_a < setup_b + k * solve_b`
/// (evaluated in `f64` exactly as written), or [`BreakEven::Never`].
///
/// A closed-form candidate from the real-arithmetic crossing point is
/// corrected by walking the exact predicate, so the result agrees with a
/// linear scan of that predicate from zero.
pub fn break_even_solves(
    setup_a: f64,
    solve_a: f64,
    setup_b: f64,
    solve_b: f64,
) -> BreakEven {
    let wins = |k: u64| setup_a + k as f64 * solve_a < setup_b + k as f64 * solve_b;
    if wins(0) {
        return BreakEven::Solves(0);
    }
    // No head start and no per-solve gain: the deficit never shrinks.
    if !(solve_a < solve_b) {
        return BreakEven::Never;
    }
    let crossing = (setup_a - setup_b) / (solve_b - solve_a);
    if !crossing.is_finite() {
        return BreakEven::Never;
    }
    let mut k = if crossing <= 0.0 {
        0
    } else {
        crossing.ceil() as u64 // saturates at u64::MAX for huge values
    };
    if k == u64::MAX {
        return BreakEven::Never;
    }
    while k > 0 && wins(k - 1) {
        k -= 1;
    }
    let mut guard = 0u32;
    while !wins(k) {
        k += 1;
        guard += 1;
        if guard > 1_000_000 {
            // The candidate was pathologically far off (possible only with
            // degenerate inputs); report honestly rather than spin.
            return BreakEven::Never;
        }
    }
    BreakEven::Solves(k)
}
