//! Benchmark suite: matrix sources, the measurement pipeline, and output.
//!
//! [`run_suite`] drives the full protocol for each configured matrix:
//!
//! 1. load or generate the matrix, split it into triangular factors;
//! 2. prepare and time the sequential row baseline; its timed solution is
//!    the reference every other kind is checked against;
//! 3. for every requested solver kind: prepare (recording setup ops and
//!    time), time the paired solve, verify the very solution that was
//!    timed against the reference within the pinned tolerance, and derive
//!    throughput, the setup-to-solve ratio, and the break-even solve count
//!    against the baseline.
//!
//! Failures are confined to their case: a matrix that cannot be loaded or a
//! solver that fails verification contributes a failure entry instead of
//! aborting the suite. Records serialize to CSV (schema versioned, floats
//! printed in shortest round-trip form so downstream tools can recompute
//! derived quantities exactly) or to an aligned text table.

use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bench::{break_even_solves, gflops, time_paired_solve, BreakEven};
use crate::error::{Error, Result};
use crate::scalar::{relative_inf_diff, Scalar};
use crate::schedule::levels::levels_rowwise;
use crate::solve::{SetupMode, SolveContext, SolverKind};
use crate::sparse::market::read_matrix_market;
use crate::sparse::stencil::{gen_laplacian_2d, gen_laplacian_3d};
use crate::sparse::triangular::{split_triangular, Orientation, RowFactor};
use crate::sparse::CsrMatrix;

/// Verification gate for double-precision runs: relative difference against
/// the sequential baseline solution.
pub const VERIFY_REL_TOL_F64: f64 = 1e-10;

/// Verification gate for single-precision runs.
pub const VERIFY_REL_TOL_F32: f64 = 1e-4;

/// Version tag written into every CSV row.
pub const CSV_SCHEMA_VERSION: u32 = 1;

/// CSV column order, stable per schema version: the core record fields
/// first (matrix identity, sizes, level counts, solver, workers, then the
/// measured and derived quantities), followed by the provenance and
/// verification extensions.
pub const CSV_COLUMNS: [&str; 20] = [
    "schema",
    "matrix",
    "n",
    "nnz",
    "levels_lower",
    "levels_upper",
    "solver",
    "workers",
    "solve_seconds",
    "gflops",
    "setup_seconds",
    "setup_solve_ratio",
    "runs",
    "setup_mode",
    "setup_ops",
    "precision",
    "verify_rel_diff",
    "rho_yx",
    "rho_zx",
    "break_even_vs_seq",
];

/// Floating-point width of a benchmark run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    F32,
    F64,
}

impl Precision {
    pub fn label(self) -> &'static str {
        match self {
            Precision::F32 => "f32",
            Precision::F64 => "f64",
        }
    }
}

impl std::fmt::Display for Precision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Precision {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f32" | "single" => Ok(Precision::F32),
            "f64" | "double" => Ok(Precision::F64),
            _ => Err(Error::InvalidInput(format!(
                "unknown precision '{s}' (expected 'f32' or 'f64')"
            ))),
        }
    }
}

/// Where a benchmark matrix comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixSource {
    /// 2-D Laplacian on an `nx * ny` grid (5- or 9-point stencil).
    Grid2d { nx: usize, ny: usize, stencil: usize },
    /// 3-D Laplacian on an `nx * ny * nz` grid (7- or 27-point stencil).
    Grid3d {
        nx: usize,
        ny: usize,
        nz: usize,
        stencil: usize,
    },
    /// A Matrix Market file.
    File(PathBuf),
}

impl MatrixSource {
    /// Stable one-token label used in records and case names.
    pub fn label(&self) -> String {
        match self {
            MatrixSource::Grid2d { nx, ny, stencil } => {
                format!("grid2d-{nx}x{ny}-{stencil}pt")
            }
            MatrixSource::Grid3d { nx, ny, nz, stencil } => {
                format!("grid3d-{nx}x{ny}x{nz}-{stencil}pt")
            }
            MatrixSource::File(path) => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string())
                .replace(',', ";"),
        }
    }

    /// Number of unknowns the source would produce, if known without
    /// loading it.
    pub fn unknowns(&self) -> Option<usize> {
        match self {
            MatrixSource::Grid2d { nx, ny, .. } => Some(nx.saturating_mul(*ny)),
            MatrixSource::Grid3d { nx, ny, nz, .. } => {
                Some(nx.saturating_mul(*ny).saturating_mul(*nz))
            }
            MatrixSource::File(_) => None,
        }
    }

    /// Shrink a grid until it fits `max_unknowns`, halving every dimension
    /// together so aspect ratios are preserved. Files pass through.
    pub fn capped(&self, max_unknowns: usize) -> MatrixSource {
        assert!(max_unknowns >= 1, "the unknown budget must be positive");
        let halve = |d: usize| d.div_ceil(2);
        let mut source = self.clone();
        loop {
            match source.unknowns() {
                Some(n) if n > max_unknowns => {}
                _ => return source,
            }
            source = match source {
                MatrixSource::Grid2d { nx, ny, stencil } => MatrixSource::Grid2d {
                    nx: halve(nx),
                    ny: halve(ny),
                    stencil,
                },
                MatrixSource::Grid3d { nx, ny, nz, stencil } => MatrixSource::Grid3d {
                    nx: halve(nx),
                    ny: halve(ny),
                    nz: halve(nz),
                    stencil,
                },
                MatrixSource::File(_) => return source,
            };
        }
    }

    /// Grid anisotropy `(ny / nx, nz / nx)`; zero marks a missing axis (2-D
    /// grids have no z, files carry no grid shape).
    pub fn aspect_ratios(&self) -> (f64, f64) {
        match self {
            MatrixSource::Grid2d { nx, ny, .. } => (*ny as f64 / *nx as f64, 0.0),
            MatrixSource::Grid3d { nx, ny, nz, .. } => {
                (*ny as f64 / *nx as f64, *nz as f64 / *nx as f64)
            }
            MatrixSource::File(_) => (0.0, 0.0),
        }
    }

    /// Produce the matrix.
    pub fn load<T: Scalar>(&self) -> Result<CsrMatrix<T>> {
        match self {
            MatrixSource::Grid2d { nx, ny, stencil } => {
                gen_laplacian_2d::<T>(*nx, *ny, *stencil)
            }
            MatrixSource::Grid3d { nx, ny, nz, stencil } => {
                gen_laplacian_3d::<T>(*nx, *ny, *nz, *stencil)
            }
            MatrixSource::File(path) => read_matrix_market::<T>(path),
        }
    }
}

/// The ten-grid benchmark family: five 2-D shapes spanning aspect ratios
/// 1 to 256 and five 3-D shapes spanning (1, 1) to (1, 64), each paired
/// with both stencils of its dimensionality — twenty sources total, one
/// million or more unknowns each before capping.
pub fn standard_grids() -> Vec<MatrixSource> {
    let shapes_2d = [(1024, 1024), (512, 2048), (256, 4096), (128, 8192), (64, 16384)];
    let shapes_3d = [
        (128, 128, 128),
        (64, 128, 256),
        (64, 64, 512),
        (32, 64, 1024),
        (32, 32, 2048),
    ];
    let mut sources = Vec::with_capacity(20);
    for stencil in [5, 9] {
        for (nx, ny) in shapes_2d {
            sources.push(MatrixSource::Grid2d { nx, ny, stencil });
        }
    }
    for stencil in [7, 27] {
        for (nx, ny, nz) in shapes_3d {
            sources.push(MatrixSource::Grid3d { nx, ny, nz, stencil });
        }
    }
    sources
}

/// How the right-hand side is produced.
#[derive(Debug, Clone, PartialEq)]
pub enum RhsSpec {
    /// All ones.
    Ones,
    /// Uniform in `[-1, 1]` from a seeded generator; the same seed yields
    /// the same vector at every precision (values are drawn in `f64` and
    /// narrowed).
    Random(u64),
    /// One value per line in a text file; the count must match.
    File(PathBuf),
}

impl RhsSpec {
    pub fn build<T: Scalar>(&self, n: usize) -> Result<Vec<T>> {
        match self {
            RhsSpec::Ones => Ok(vec![T::ONE; n]),
            RhsSpec::Random(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                Ok((0..n)
                    .map(|_| T::from_f64(rng.gen_range(-1.0..=1.0)))
                    .collect())
            }
            RhsSpec::File(path) => {
                let text = std::fs::read_to_string(path)?;
                let mut values = Vec::new();
                for (idx, line) in text.lines().enumerate() {
                    let line = line.trim();
                    if line.is_empty() {
                        continue;
                    }
                    let v: f64 = line.parse().map_err(|_| Error::Parse {
                        line: idx + 1,
                        message: format!("expected a number, found '{line}'"),
                    })?;
                    values.push(T::from_f64(v));
                }
                if values.len() != n {
                    return Err(Error::InvalidInput(format!(
                        "right-hand side file holds {} values but the system has {n} unknowns",
                        values.len()
                    )));
                }
                Ok(values)
            }
        }
    }
}

/// Everything one suite invocation needs.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub sources: Vec<MatrixSource>,
    pub solvers: Vec<SolverKind>,
    pub setup_mode: SetupMode,
    pub workers: usize,
    pub runs: u32,
    pub precision: Precision,
    pub rhs: RhsSpec,
    /// Shrink grid sources to at most this many unknowns (see
    /// [`MatrixSource::capped`]).
    pub max_unknowns: Option<usize>,
}

impl SuiteConfig {
    /// The solver set benchmarked when none is named: the sequential row
    /// baseline plus every parallel kind.
    pub fn default_solvers() -> Vec<SolverKind> {
        vec![
            SolverKind::SeqRow,
            SolverKind::LevelRow,
            SolverKind::LevelCol,
            SolverKind::SelfRow,
            SolverKind::SelfCol,
        ]
    }
}

/// One measured (matrix, solver) case.
#[derive(Debug, Clone)]
pub struct BenchRecord {
    pub matrix: String,
    pub n: usize,
    /// Entry count of the full matrix; the flop base of [`gflops`].
    pub nnz: usize,
    pub levels_lower: usize,
    pub levels_upper: usize,
    pub solver: SolverKind,
    pub setup_mode: SetupMode,
    /// Charged setup steps of one factor's preparation (both factors charge
    /// the same set).
    pub setup_ops: String,
    pub workers: usize,
    pub precision: Precision,
    pub runs: u32,
    /// Charged setup seconds, both factors combined.
    pub setup_seconds: f64,
    /// Mean seconds per paired solve.
    pub solve_seconds: f64,
    /// `setup_seconds / solve_seconds`: how many solves one setup costs.
    /// Always finite and nonnegative (solve time is gated positive).
    pub setup_solve_ratio: f64,
    pub gflops: f64,
    /// Relative difference against the sequential baseline solution.
    pub verify_rel_diff: f64,
    pub rho_yx: f64,
    pub rho_zx: f64,
    /// Solves needed before this kind's total time undercuts the
    /// sequential row baseline; `None` for the baseline itself.
    pub break_even_vs_seq: Option<BreakEven>,
}

/// Suite results: records for the cases that ran, labeled errors for the
/// ones that did not.
#[derive(Debug)]
pub struct SuiteOutcome {
    pub records: Vec<BenchRecord>,
    pub failures: Vec<(String, String)>,
}

/// Run the configured benchmark protocol; see the module docs.
pub fn run_suite(config: &SuiteConfig) -> SuiteOutcome {
    match config.precision {
        Precision::F32 => run_suite_typed::<f32>(config, VERIFY_REL_TOL_F32),
        Precision::F64 => run_suite_typed::<f64>(config, VERIFY_REL_TOL_F64),
    }
}

fn run_suite_typed<T: Scalar>(config: &SuiteConfig, tol: f64) -> SuiteOutcome {
    let mut outcome = SuiteOutcome {
        records: Vec::new(),
        failures: Vec::new(),
    };
    for source in &config.sources {
        let source = match config.max_unknowns {
            Some(max) => source.capped(max),
            None => source.clone(),
        };
        bench_source::<T>(&source, config, tol, &mut outcome);
    }
    outcome
}

struct Baseline<T: Scalar> {
    reference: Vec<T>,
    setup_seconds: f64,
    solve_seconds: f64,
    ops_label: String,
}

/// The per-case measurements [`bench_case`] hands back to the record
/// assembly in [`bench_source`].
struct CaseNumbers {
    setup_seconds: f64,
    solve_seconds: f64,
    setup_solve_ratio: f64,
    verify_rel_diff: f64,
    setup_ops: String,
    gflops: f64,
}

fn bench_source<T: Scalar>(
    source: &MatrixSource,
    config: &SuiteConfig,
    tol: f64,
    outcome: &mut SuiteOutcome,
) {
    let label = source.label();
    let fail = |case: String, err: Error, outcome: &mut SuiteOutcome| {
        outcome.failures.push((case, err.to_string()));
    };

    let prepared = (|| -> Result<_> {
        let a = source.load::<T>()?;
        let n = a.n();
        let nnz = a.nnz();
        let (lower, upper) = split_triangular(&a)?;
        drop(a);
        let levels_lower = levels_rowwise(lower.strict(), Orientation::Lower)?
            .into_iter()
            .max()
            .unwrap_or(0);
        let levels_upper = levels_rowwise(upper.strict(), Orientation::Upper)?
            .into_iter()
            .max()
            .unwrap_or(0);
        let rhs = config.rhs.build::<T>(n)?;
        let baseline = prepare_baseline(&lower, &upper, &rhs, config)?;
        Ok((n, nnz, lower, upper, levels_lower, levels_upper, rhs, baseline))
    })();
    let (n, nnz, lower, upper, levels_lower, levels_upper, rhs, baseline) = match prepared {
        Ok(parts) => parts,
        Err(err) => {
            fail(label, err, outcome);
            return;
        }
    };
    let (rho_yx, rho_zx) = source.aspect_ratios();

    for &kind in &config.solvers {
        let result = bench_case(
            kind, &lower, &upper, &rhs, &baseline, config, tol, nnz,
        );
        match result {
            Ok(case) => {
                let break_even_vs_seq = (kind != SolverKind::SeqRow).then(|| {
                    break_even_solves(
                        case.setup_seconds,
                        case.solve_seconds,
                        baseline.setup_seconds,
                        baseline.solve_seconds,
                    )
                });
                outcome.records.push(BenchRecord {
                    matrix: label.clone(),
                    n,
                    nnz,
                    levels_lower,
                    levels_upper,
                    solver: kind,
                    setup_mode: config.setup_mode,
                    setup_ops: case.setup_ops,
                    workers: config.workers,
                    precision: config.precision,
                    runs: config.runs,
                    setup_seconds: case.setup_seconds,
                    solve_seconds: case.solve_seconds,
                    setup_solve_ratio: case.setup_solve_ratio,
                    gflops: case.gflops,
                    verify_rel_diff: case.verify_rel_diff,
                    rho_yx,
                    rho_zx,
                    break_even_vs_seq,
                });
            }
            Err(err) => fail(format!("{label}/{kind}"), err, outcome),
        }
    }
}

fn prepare_baseline<T: Scalar>(
    lower: &RowFactor<T>,
    upper: &RowFactor<T>,
    rhs: &[T],
    config: &SuiteConfig,
) -> Result<Baseline<T>> {
    let (ctx_l, rep_l) = SolveContext::prepare(
        lower,
        SolverKind::SeqRow,
        config.setup_mode,
        config.workers,
    )?;
    let (ctx_u, rep_u) = SolveContext::prepare(
        upper,
        SolverKind::SeqRow,
        config.setup_mode,
        config.workers,
    )?;
    // The timed solution doubles as the reference: the sequential kernel is
    // deterministic, so the last run equals any other run bit for bit.
    let (solve_seconds, reference) =
        time_paired_solve(&ctx_l, &ctx_u, rhs, config.runs)?;
    Ok(Baseline {
        reference,
        setup_seconds: rep_l.seconds + rep_u.seconds,
        solve_seconds,
        ops_label: rep_l.ops_label(),
    })
}

#[allow(clippy::too_many_arguments)]
fn bench_case<T: Scalar>(
    kind: SolverKind,
    lower: &RowFactor<T>,
    upper: &RowFactor<T>,
    rhs: &[T],
    baseline: &Baseline<T>,
    config: &SuiteConfig,
    tol: f64,
    nnz: usize,
) -> Result<CaseNumbers> {
    let (setup_seconds, solve_seconds, verify_rel_diff, setup_ops) =
        if kind == SolverKind::SeqRow {
            // The baseline is this very configuration; reuse its numbers.
            (
                baseline.setup_seconds,
                baseline.solve_seconds,
                0.0,
                baseline.ops_label.clone(),
            )
        } else {
            let (ctx_l, rep_l) =
                SolveContext::prepare(lower, kind, config.setup_mode, config.workers)?;
            let (ctx_u, rep_u) =
                SolveContext::prepare(upper, kind, config.setup_mode, config.workers)?;
            let (mean, y) = time_paired_solve(&ctx_l, &ctx_u, rhs, config.runs)?;
            // Verify the very solution that was timed.
            let diff = relative_inf_diff(&y, &baseline.reference);
            if !(diff <= tol) {
                return Err(Error::InvalidInput(format!(
                    "verification failed: relative difference {diff:e} against the \
                     sequential baseline exceeds {tol:e}"
                )));
            }
            let setup = rep_l.seconds + rep_u.seconds;
            (setup, mean, diff, rep_l.ops_label())
        };
    let rate = gflops(nnz, solve_seconds)?;
    Ok(CaseNumbers {
        setup_seconds,
        solve_seconds,
        // gflops() above guarantees a positive solve time, so the ratio is
        // finite and nonnegative.
        setup_solve_ratio: setup_seconds / solve_seconds,
        verify_rel_diff,
        setup_ops,
        gflops: rate,
    })
}

fn csv_escape(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Serialize records as CSV under [`CSV_COLUMNS`]. Floats print in
/// shortest round-trip form, so parsing a cell back yields the exact value
/// the suite computed with.
pub fn write_csv<W: Write>(mut out: W, records: &[BenchRecord]) -> Result<()> {
    writeln!(out, "{}", CSV_COLUMNS.join(","))?;
    for r in records {
        let break_even = match r.break_even_vs_seq {
            None => String::new(),
            Some(b) => b.to_string(),
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            CSV_SCHEMA_VERSION,
            csv_escape(&r.matrix),
            r.n,
            r.nnz,
            r.levels_lower,
            r.levels_upper,
            r.solver,
            r.workers,
            r.solve_seconds,
            r.gflops,
            r.setup_seconds,
            r.setup_solve_ratio,
            r.runs,
            r.setup_mode,
            r.setup_ops,
            r.precision,
            r.verify_rel_diff,
            r.rho_yx,
            r.rho_zx,
            break_even,
        )?;
    }
    Ok(())
}

/// Render records as an aligned text table for terminals.
pub fn write_table<W: Write>(mut out: W, records: &[BenchRecord]) -> Result<()> {
    writeln!(
        out,
        "{:<28} {:>9} {:<9} {:>10} {:>11} {:>9} {:>12} {:>12} {:>11} {:>8} {:>10}",
        "matrix", "solver", "setup", "n", "nnz", "levels", "setup[s]", "solve[s]", "setup/solve", "GFLOPS", "break-even"
    )?;
    for r in records {
        let break_even = match r.break_even_vs_seq {
            None => "-".to_string(),
            Some(b) => b.to_string(),
        };
        writeln!(
            out,
            "{:<28} {:>9} {:<9} {:>10} {:>11} {:>9} {:>12.3e} {:>12.3e} {:>11.2} {:>8.3} {:>10}",
            r.matrix,
            r.solver.label(),
            r.setup_mode.label(),
            r.n,
            r.nnz,
            format!("{}/{}", r.levels_lower, r.levels_upper),
            r.setup_seconds,
            r.solve_seconds,
            r.setup_solve_ratio,
            r.gflops,
            break_even,
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::market::write_matrix_market;

    #[test]
    fn precision_parsing_and_labels() {
        assert_eq!("f32".parse::<Precision>().unwrap(), Precision::F32);
        assert_eq!("double".parse::<Precision>().unwrap(), Precision::F64);
        assert!("f16".parse::<Precision>().is_err());
        assert_eq!(Precision::F64.label(), "f64");
    }

    #[test]
    fn source_labels_and_ratios() {
        let g2 = MatrixSource::Grid2d { nx: 512, ny: 2048, stencil: 9 };
        assert_eq!(g2.label(), "grid2d-512x2048-9pt");
        assert_eq!(g2.unknowns(), Some(512 * 2048));
        assert_eq!(g2.aspect_ratios(), (4.0, 0.0));

        let g3 = MatrixSource::Grid3d { nx: 32, ny: 64, nz: 1024, stencil: 7 };
        assert_eq!(g3.label(), "grid3d-32x64x1024-7pt");
        assert_eq!(g3.aspect_ratios(), (2.0, 32.0));

        let f = MatrixSource::File(PathBuf::from("/data/web,graph.mtx"));
        assert_eq!(f.label(), "web;graph");
        assert_eq!(f.unknowns(), None);
        assert_eq!(f.aspect_ratios(), (0.0, 0.0));
    }

    #[test]
    fn capping_halves_dimensions_and_preserves_ratios() {
        let big = MatrixSource::Grid2d { nx: 1024, ny: 1024, stencil: 5 };
        let capped = big.capped(1_000_000);
        assert_eq!(capped, MatrixSource::Grid2d { nx: 512, ny: 512, stencil: 5 });

        let wide = MatrixSource::Grid2d { nx: 512, ny: 2048, stencil: 9 };
        let capped = wide.capped(1_000_000);
        assert_eq!(capped.aspect_ratios(), wide.aspect_ratios());
        assert!(capped.unknowns().unwrap() <= 1_000_000);

        let cube = MatrixSource::Grid3d { nx: 128, ny: 128, nz: 128, stencil: 27 };
        let capped = cube.capped(1_000_000);
        assert_eq!(
            capped,
            MatrixSource::Grid3d { nx: 64, ny: 64, nz: 64, stencil: 27 }
        );

        // Already small: untouched. Extreme budget: dims floor at 1.
        let small = MatrixSource::Grid2d { nx: 10, ny: 10, stencil: 5 };
        assert_eq!(small.capped(1_000_000), small);
        assert_eq!(
            small.capped(1),
            MatrixSource::Grid2d { nx: 1, ny: 1, stencil: 5 }
        );

        let file = MatrixSource::File(PathBuf::from("m.mtx"));
        assert_eq!(file.capped(1), file);
    }

    #[test]
    fn the_grid_family_is_complete() {
        let grids = standard_grids();
        assert_eq!(grids.len(), 20);
        assert!(grids.iter().all(|g| g.unknowns().unwrap() >= 1 << 20));
        let labels: Vec<String> = grids.iter().map(|g| g.label()).collect();
        assert!(labels.contains(&"grid2d-1024x1024-5pt".to_string()));
        assert!(labels.contains(&"grid2d-64x16384-9pt".to_string()));
        assert!(labels.contains(&"grid3d-128x128x128-7pt".to_string()));
        assert!(labels.contains(&"grid3d-32x32x2048-27pt".to_string()));
        // Ratios follow the doubling design.
        let rhos: Vec<f64> = grids[..5].iter().map(|g| g.aspect_ratios().0).collect();
        assert_eq!(rhos, vec![1.0, 4.0, 16.0, 64.0, 256.0]);
    }

    #[test]
    fn rhs_specs_build_correctly() {
        let ones = RhsSpec::Ones.build::<f64>(4).unwrap();
        assert_eq!(ones, vec![1.0; 4]);

        let a = RhsSpec::Random(9).build::<f64>(100).unwrap();
        let b = RhsSpec::Random(9).build::<f64>(100).unwrap();
        let c = RhsSpec::Random(10).build::<f64>(100).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.iter().all(|v| (-1.0..=1.0).contains(v)));

        // The f32 build narrows the same draws.
        let a32 = RhsSpec::Random(9).build::<f32>(100).unwrap();
        assert!(a.iter().zip(&a32).all(|(x, y)| (*x as f32) == *y));

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rhs.txt");
        std::fs::write(&path, "1.5\n\n-2\n0.25\n").unwrap();
        let v = RhsSpec::File(path.clone()).build::<f64>(3).unwrap();
        assert_eq!(v, vec![1.5, -2.0, 0.25]);
        assert!(matches!(
            RhsSpec::File(path.clone()).build::<f64>(5),
            Err(Error::InvalidInput(_))
        ));
        std::fs::write(&path, "1.0\nbogus\n").unwrap();
        assert!(matches!(
            RhsSpec::File(path).build::<f64>(2),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    fn small_config() -> SuiteConfig {
        SuiteConfig {
            sources: vec![MatrixSource::Grid2d { nx: 10, ny: 8, stencil: 5 }],
            solvers: vec![SolverKind::SeqRow, SolverKind::LevelRow, SolverKind::SelfCol],
            setup_mode: SetupMode::Kahn,
            workers: 2,
            runs: 2,
            precision: Precision::F64,
            rhs: RhsSpec::Random(7),
            max_unknowns: None,
        }
    }

    #[test]
    fn suite_produces_verified_records() {
        let outcome = run_suite(&small_config());
        assert!(outcome.failures.is_empty(), "{:?}", outcome.failures);
        assert_eq!(outcome.records.len(), 3);
        for r in &outcome.records {
            assert_eq!(r.matrix, "grid2d-10x8-5pt");
            assert_eq!(r.n, 80);
            assert_eq!(r.nnz, 5 * 80 - 2 * 10 - 2 * 8);
            assert_eq!(r.levels_lower, 17);
            assert_eq!(r.levels_upper, 17);
            assert_eq!(r.rho_yx, 0.8);
            assert_eq!(r.rho_zx, 0.0);
            assert!(r.gflops > 0.0 && r.gflops.is_finite());
            assert!(r.solve_seconds > 0.0);
            assert!(r.setup_solve_ratio >= 0.0 && r.setup_solve_ratio.is_finite());
            assert_eq!(
                r.setup_solve_ratio.to_bits(),
                (r.setup_seconds / r.solve_seconds).to_bits()
            );
            assert!(r.verify_rel_diff <= VERIFY_REL_TOL_F64);
        }
        let seq = &outcome.records[0];
        assert_eq!(seq.solver, SolverKind::SeqRow);
        assert!(seq.break_even_vs_seq.is_none());
        assert_eq!(seq.setup_ops, "none");
        // The level-row kernel is bitwise identical to the baseline.
        let levr = &outcome.records[1];
        assert_eq!(levr.solver, SolverKind::LevelRow);
        assert_eq!(levr.verify_rel_diff, 0.0);
        assert!(levr.break_even_vs_seq.is_some());
        assert_eq!(levr.setup_ops, "transpose+dependency-counts+levels-kahn");
        let slfc = &outcome.records[2];
        assert_eq!(slfc.setup_ops, "dependency-counts+levels-kahn");
    }

    #[test]
    fn suite_confines_failures_to_their_case() {
        let mut config = small_config();
        config.sources.insert(
            0,
            MatrixSource::File(PathBuf::from("/nonexistent/never.mtx")),
        );
        let outcome = run_suite(&config);
        assert_eq!(outcome.failures.len(), 1);
        assert_eq!(outcome.failures[0].0, "never");
        assert_eq!(outcome.records.len(), 3);
    }

    #[test]
    fn suite_runs_in_single_precision() {
        let mut config = small_config();
        config.precision = Precision::F32;
        config.solvers = vec![SolverKind::SeqRow, SolverKind::SelfRow];
        let outcome = run_suite(&config);
        assert!(outcome.failures.is_empty(), "{:?}", outcome.failures);
        assert_eq!(outcome.records.len(), 2);
        assert!(outcome
            .records
            .iter()
            .all(|r| r.precision == Precision::F32));
        // Row-family kernels stay bitwise equal in f32 too.
        assert_eq!(outcome.records[1].verify_rel_diff, 0.0);
    }

    #[test]
    fn suite_benchmarks_matrix_market_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tiny.mtx");
        let a = gen_laplacian_2d::<f64>(6, 6, 5).unwrap();
        write_matrix_market(&path, &a).unwrap();
        let mut config = small_config();
        config.sources = vec![MatrixSource::File(path)];
        config.solvers = vec![SolverKind::SeqRow, SolverKind::LevelCol];
        let outcome = run_suite(&config);
        assert!(outcome.failures.is_empty(), "{:?}", outcome.failures);
        assert_eq!(outcome.records.len(), 2);
        assert_eq!(outcome.records[0].matrix, "tiny");
        assert_eq!(outcome.records[0].n, 36);
    }

    #[test]
    fn csv_round_trips_exact_values() {
        let outcome = run_suite(&small_config());
        let mut buf = Vec::new();
        write_csv(&mut buf, &outcome.records).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), outcome.records.len());
        for (row, record) in rows.iter().zip(&outcome.records) {
            let cells: Vec<&str> = row.split(',').collect();
            assert_eq!(cells.len(), CSV_COLUMNS.len());
            assert_eq!(cells[0], "1");
            assert_eq!(cells[1], record.matrix);
            assert_eq!(cells[6], record.solver.label());
            // Shortest round-trip printing: parsing back gives the exact
            // bits, so derived quantities recompute exactly.
            let nnz: usize = cells[3].parse().unwrap();
            let solve_seconds: f64 = cells[8].parse().unwrap();
            let rate: f64 = cells[9].parse().unwrap();
            let setup_seconds: f64 = cells[10].parse().unwrap();
            let ratio: f64 = cells[11].parse().unwrap();
            assert_eq!(solve_seconds.to_bits(), record.solve_seconds.to_bits());
            assert_eq!(
                gflops(nnz, solve_seconds).unwrap().to_bits(),
                rate.to_bits()
            );
            assert_eq!(
                (setup_seconds / solve_seconds).to_bits(),
                ratio.to_bits()
            );
        }
    }

    #[test]
    fn the_default_two_d_suite_yields_a_record_per_grid_and_solver() {
        // Ten 2-D sources (five shapes x two stencils), shrunk to toy size,
        // against the default five-solver set: fifty verified records.
        let sources: Vec<MatrixSource> = standard_grids()
            .into_iter()
            .filter(|s| matches!(s, MatrixSource::Grid2d { .. }))
            .collect();
        assert_eq!(sources.len(), 10);
        let config = SuiteConfig {
            sources,
            solvers: SuiteConfig::default_solvers(),
            setup_mode: SetupMode::Kahn,
            workers: 2,
            runs: 1,
            precision: Precision::F64,
            rhs: RhsSpec::Ones,
            max_unknowns: Some(1000),
        };
        let outcome = run_suite(&config);
        assert!(outcome.failures.is_empty(), "{:?}", outcome.failures);
        assert_eq!(outcome.records.len(), 50);
        let mut matrices: Vec<&str> =
            outcome.records.iter().map(|r| r.matrix.as_str()).collect();
        matrices.dedup();
        assert_eq!(matrices.len(), 10, "five records per matrix, grouped");
        for r in &outcome.records {
            assert!(r.n <= 1000);
            assert!(r.verify_rel_diff <= VERIFY_REL_TOL_F64);
        }
    }

    #[test]
    fn an_eight_by_eight_grid_records_fifteen_levels() {
        // The 5-point lower triangle on an 8x8 grid has nx + ny - 1 levels.
        let config = SuiteConfig {
            sources: vec![MatrixSource::Grid2d { nx: 8, ny: 8, stencil: 5 }],
            solvers: vec![SolverKind::LevelRow],
            setup_mode: SetupMode::Sequential,
            workers: 1,
            runs: 1,
            precision: Precision::F64,
            rhs: RhsSpec::Ones,
            max_unknowns: None,
        };
        let outcome = run_suite(&config);
        assert!(outcome.failures.is_empty(), "{:?}", outcome.failures);
        assert_eq!(outcome.records.len(), 1);
        assert_eq!(outcome.records[0].levels_lower, 15);
        assert_eq!(outcome.records[0].levels_upper, 15);
    }

    #[test]
    fn table_output_lists_every_record() {
        let outcome = run_suite(&small_config());
        let mut buf = Vec::new();
        write_table(&mut buf, &outcome.records).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), outcome.records.len() + 1);
        assert!(text.contains("GFLOPS"));
        assert!(text.contains("seq-row"));
    }
}
