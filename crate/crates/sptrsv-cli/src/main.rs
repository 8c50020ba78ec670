//! Command-line front end for the `sptrsv` library.
//!
//! Four subcommands cover the workflow end to end:
//!
//! * `gen` — write a grid Laplacian as a Matrix Market file;
//! * `analyze` — report the level structure (available parallelism) of a
//!   matrix's triangular factors;
//! * `solve` — run one triangular solve (or the paired lower/upper sweep)
//!   and verify the result against the inputs;
//! * `bench` — time solver kinds across matrices and emit CSV or a table.
//!
//! Worker counts resolve in order: `--workers` flag, `SPTRSV_WORKERS`
//! environment variable, then the machine's available parallelism.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use sptrsv::{
    lu_pair_solve, run_suite, split_triangular, standard_grids, write_csv,
    write_matrix_market, write_table, Error, LevelSchedule, MatrixSource, Precision, RhsSpec,
    RowFactor, Scalar, SetupMode, SolveContext, SolverKind, SuiteConfig, VERIFY_REL_TOL_F32,
    VERIFY_REL_TOL_F64,
};

#[derive(Parser)]
#[command(
    name = "sptrsv",
    version,
    about = "Parallel sparse triangular solves: generate, analyze, solve, benchmark"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a grid Laplacian and write it as a Matrix Market file
    Gen(GenArgs),
    /// Report the level structure of a matrix's triangular factors
    Analyze(AnalyzeArgs),
    /// Solve triangular systems for a matrix and right-hand side
    Solve(SolveArgs),
    /// Time solver kinds across matrices and report throughput
    Bench(BenchArgs),
}

/// Grid dimensions as given on the command line.
#[derive(Debug, Clone, Copy)]
struct GridDims {
    nx: usize,
    ny: usize,
    nz: Option<usize>,
}

fn parse_grid(s: &str) -> Result<GridDims, String> {
    let parts: Vec<&str> = s.split('x').collect();
    if parts.len() != 2 && parts.len() != 3 {
        return Err(format!(
            "expected NXxNY or NXxNYxNZ (e.g. 64x64 or 32x32x32), got '{s}'"
        ));
    }
    let mut dims = [0usize; 3];
    for (slot, part) in dims.iter_mut().zip(&parts) {
        *slot = part
            .parse()
            .ok()
            .filter(|&d| d >= 1)
            .ok_or_else(|| format!("grid dimension '{part}' is not a positive integer"))?;
    }
    Ok(GridDims {
        nx: dims[0],
        ny: dims[1],
        nz: (parts.len() == 3).then_some(dims[2]),
    })
}

/// A comma-separated solver list as one argument value (clap would treat a
/// bare `Vec` field as a repeated flag).
#[derive(Debug, Clone)]
struct SolverList(Vec<SolverKind>);

fn parse_solvers(s: &str) -> Result<SolverList, String> {
    if s == "all" {
        return Ok(SolverList(SolverKind::ALL.to_vec()));
    }
    if s == "default" {
        return Ok(SolverList(SuiteConfig::default_solvers()));
    }
    s.split(',')
        .map(|tok| tok.trim().parse().map_err(|e: Error| e.to_string()))
        .collect::<Result<_, _>>()
        .map(SolverList)
}

fn parse_rhs(s: &str) -> Result<RhsSpec, String> {
    if s == "ones" {
        return Ok(RhsSpec::Ones);
    }
    if let Some(seed) = s.strip_prefix("random:") {
        let seed = seed
            .parse()
            .map_err(|_| format!("'{seed}' is not a valid seed (expected an integer)"))?;
        return Ok(RhsSpec::Random(seed));
    }
    if let Some(path) = s.strip_prefix("file:") {
        return Ok(RhsSpec::File(PathBuf::from(path)));
    }
    Err(format!(
        "expected 'ones', 'random:SEED', or 'file:PATH', got '{s}'"
    ))
}

fn parse_setup(s: &str) -> Result<SetupMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_precision(s: &str) -> Result<Precision, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Matrix input shared by `analyze` and `solve`: either a generated grid or
/// a Matrix Market file.
#[derive(Args)]
struct MatrixInput {
    /// Grid dimensions, e.g. 64x64 or 32x32x32
    #[arg(long, value_parser = parse_grid, conflicts_with = "mtx", required_unless_present = "mtx")]
    grid: Option<GridDims>,
    /// Stencil width: 5 or 9 for 2-D grids, 7 or 27 for 3-D (defaults 5 / 7)
    #[arg(long, requires = "grid")]
    stencil: Option<usize>,
    /// Matrix Market file to load instead of generating a grid
    #[arg(long, conflicts_with = "grid")]
    mtx: Option<PathBuf>,
}

impl MatrixInput {
    fn source(&self) -> MatrixSource {
        match (&self.grid, &self.mtx) {
            (Some(dims), _) => grid_source(*dims, self.stencil),
            (None, Some(path)) => MatrixSource::File(path.clone()),
            (None, None) => unreachable!("clap enforces one input"),
        }
    }
}

fn grid_source(dims: GridDims, stencil: Option<usize>) -> MatrixSource {
    match dims.nz {
        None => MatrixSource::Grid2d {
            nx: dims.nx,
            ny: dims.ny,
            stencil: stencil.unwrap_or(5),
        },
        Some(nz) => MatrixSource::Grid3d {
            nx: dims.nx,
            ny: dims.ny,
            nz,
            stencil: stencil.unwrap_or(7),
        },
    }
}

#[derive(Args)]
struct GenArgs {
    /// Grid dimensions, e.g. 64x64 or 32x32x32
    #[arg(long, value_parser = parse_grid)]
    grid: GridDims,
    /// Stencil width: 5 or 9 for 2-D grids, 7 or 27 for 3-D (defaults 5 / 7)
    #[arg(long)]
    stencil: Option<usize>,
    /// Output path for the Matrix Market file
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: MatrixInput,
    /// Level construction: 'seq' (sequential sweep) or 'kahn' (parallel peel)
    #[arg(long, value_parser = parse_setup, default_value = "seq")]
    setup: SetupMode,
    /// Worker threads (default: SPTRSV_WORKERS, then available parallelism)
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: MatrixInput,
    /// Solver kind: seq-row, seq-col, level-row, level-col, self-row, self-col
    #[arg(long, default_value = "seq-row")]
    solver: SolverKind,
    /// Which triangular system to solve: the lower factor, the upper
    /// factor, or the paired lower-then-upper sweep
    #[arg(long, value_parser = ["lower", "upper", "pair"], default_value = "pair")]
    factor: String,
    /// Setup mode: 'seq' or 'kahn'
    #[arg(long, value_parser = parse_setup, default_value = "seq")]
    setup: SetupMode,
    /// Worker threads (default: SPTRSV_WORKERS, then available parallelism)
    #[arg(long)]
    workers: Option<usize>,
    /// Right-hand side: 'ones', 'random:SEED', or 'file:PATH'
    #[arg(long, value_parser = parse_rhs, default_value = "ones")]
    rhs: RhsSpec,
    /// Floating-point width: 'f32' or 'f64'
    #[arg(long, value_parser = parse_precision, default_value = "f64")]
    precision: Precision,
    /// Verification gate on the relative round-trip error (defaults to
    /// 1e-10 for f64, 1e-4 for f32); the command fails when exceeded
    #[arg(long)]
    verify_tol: Option<f64>,
    /// Write the solution here, one value per line
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Benchmark the built-in grid family: ten shapes, each with both
    /// stencils of its dimensionality
    #[arg(long, conflicts_with_all = ["grid", "mtx"])]
    table2: bool,
    /// Grid dimensions, e.g. 64x64 or 32x32x32
    #[arg(long, value_parser = parse_grid)]
    grid: Option<GridDims>,
    /// Stencil width (defaults 5 for 2-D, 7 for 3-D)
    #[arg(long, requires = "grid")]
    stencil: Option<usize>,
    /// Matrix Market file(s); repeat the flag for several
    #[arg(long)]
    mtx: Vec<PathBuf>,
    /// Solvers to time: a comma-separated list, 'default' (the sequential
    /// row baseline plus the four parallel kinds), or 'all' (adds seq-col)
    #[arg(long, value_parser = parse_solvers, default_value = "default")]
    solvers: SolverList,
    /// Setup mode: 'seq' or 'kahn'
    #[arg(long, value_parser = parse_setup, default_value = "kahn")]
    setup: SetupMode,
    /// Worker threads (default: SPTRSV_WORKERS, then available parallelism)
    #[arg(long)]
    workers: Option<usize>,
    /// Timed solves per case (one extra untimed warm-up always runs)
    #[arg(long, default_value_t = 100)]
    runs: u32,
    /// Floating-point width: 'f32' or 'f64'
    #[arg(long, value_parser = parse_precision, default_value = "f64")]
    precision: Precision,
    /// Right-hand side: 'ones', 'random:SEED', or 'file:PATH'
    #[arg(long, value_parser = parse_rhs, default_value = "ones")]
    rhs: RhsSpec,
    /// Shrink grids to at most this many unknowns, halving every dimension
    /// together so aspect ratios are preserved
    #[arg(long, value_name = "N")]
    max_n: Option<usize>,
    /// Output format
    #[arg(long, value_parser = ["csv", "table"], default_value = "table")]
    format: String,
    /// Write results here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

/// Flag, then environment, then hardware.
fn resolve_workers(flag: Option<usize>) -> Result<usize, Error> {
    if let Some(w) = flag {
        return Ok(w.max(1));
    }
    if let Ok(raw) = std::env::var("SPTRSV_WORKERS") {
        let parsed: usize = raw.parse().map_err(|_| {
            Error::InvalidInput(format!(
                "SPTRSV_WORKERS is set to '{raw}', which is not a positive integer"
            ))
        })?;
        if parsed == 0 {
            return Err(Error::InvalidInput(
                "SPTRSV_WORKERS must be at least 1".into(),
            ));
        }
        return Ok(parsed);
    }
    Ok(std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1))
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode, Error> {
    let source = grid_source(args.grid, args.stencil);
    let a = source.load::<f64>()?;
    write_matrix_market(&args.out, &a)?;
    println!(
        "wrote {}: {} unknowns, {} entries -> {}",
        source.label(),
        a.n(),
        a.nnz(),
        args.out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<ExitCode, Error> {
    let workers = resolve_workers(args.workers)?;
    let source = args.input.source();
    let a = source.load::<f64>()?;
    let (lower, upper) = split_triangular(&a)?;
    println!("matrix: {}", source.label());
    println!("unknowns: {}", a.n());
    println!("entries: {}", a.nnz());
    println!("workers: {} (setup: {})", workers, args.setup);

    let mut lower_schedule = None;
    for (name, factor) in [("lower", &lower), ("upper", &upper)] {
        let kind = match args.setup {
            SetupMode::Sequential => SolverKind::LevelRow,
            SetupMode::Kahn => SolverKind::LevelCol,
        };
        let (ctx, _) = SolveContext::prepare(factor, kind, args.setup, workers)?;
        let schedule = ctx.schedule().expect("level solvers carry a schedule");
        let widths: Vec<usize> = (1..=schedule.num_levels())
            .map(|l| schedule.level(l).len())
            .collect();
        let mean = if widths.is_empty() {
            0.0
        } else {
            a.n() as f64 / widths.len() as f64
        };
        let max = widths.iter().copied().max().unwrap_or(0);
        println!(
            "{name} factor: {} levels, mean width {:.2}, max width {}",
            widths.len(),
            mean,
            max
        );
        if name == "lower" {
            lower_schedule = Some(schedule.clone());
        }
    }

    if let Some(schedule) = lower_schedule {
        if schedule.num_levels() > 0 {
            println!("level width histogram (lower factor):");
            print_width_histogram(&schedule);
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Bucket level widths by powers of two and draw scaled bars.
fn print_width_histogram(schedule: &LevelSchedule) {
    let mut buckets: Vec<usize> = Vec::new();
    for level in 1..=schedule.num_levels() {
        let width = schedule.level(level).len();
        let bucket = usize::BITS as usize - 1 - width.leading_zeros() as usize;
        if bucket >= buckets.len() {
            buckets.resize(bucket + 1, 0);
        }
        buckets[bucket] += 1;
    }
    let peak = buckets.iter().copied().max().unwrap_or(1).max(1);
    for (bucket, &count) in buckets.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let lo = 1usize << bucket;
        let hi = (1usize << (bucket + 1)) - 1;
        let bar = "#".repeat((count * 40).div_ceil(peak));
        println!("  {:>10} | {:>8} {}", format!("{lo}..{hi}"), count, bar);
    }
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode, Error> {
    let workers = resolve_workers(args.workers)?;
    match args.precision {
        Precision::F32 => solve_typed::<f32>(&args, workers, VERIFY_REL_TOL_F32),
        Precision::F64 => solve_typed::<f64>(&args, workers, VERIFY_REL_TOL_F64),
    }
}

fn solve_typed<T: Scalar>(
    args: &SolveArgs,
    workers: usize,
    default_tol: f64,
) -> Result<ExitCode, Error> {
    let source = args.input.source();
    let a = source.load::<T>()?;
    let (lower, upper) = split_triangular(&a)?;
    drop(a);
    let n = lower.n();
    let rhs = args.rhs.build::<T>(n)?;

    let prepare = |factor: &RowFactor<T>| SolveContext::prepare(factor, args.solver, args.setup, workers);
    let started = Instant::now();
    let (solution, back, setup_seconds) = match args.factor.as_str() {
        "lower" | "upper" => {
            let factor = if args.factor == "lower" { &lower } else { &upper };
            let (ctx, report) = prepare(factor)?;
            let mut x = rhs.clone();
            ctx.solve(&mut x)?;
            let back = factor.apply(&x);
            (x, back, report.seconds)
        }
        "pair" => {
            let (ctx_l, rep_l) = prepare(&lower)?;
            let (ctx_u, rep_u) = prepare(&upper)?;
            let x = lu_pair_solve(&ctx_l, &ctx_u, &rhs)?;
            let back = lower.apply(&upper.apply(&x));
            (x, back, rep_l.seconds + rep_u.seconds)
        }
        other => unreachable!("clap validates --factor, got '{other}'"),
    };
    let total_seconds = started.elapsed().as_secs_f64();
    let diff = sptrsv::relative_inf_diff(&back, &rhs);

    println!("matrix: {}", source.label());
    println!("system: {} ({} unknowns)", args.factor, n);
    println!(
        "solver: {} (setup: {}, workers: {})",
        args.solver, args.setup, workers
    );
    println!("setup seconds: {setup_seconds}");
    println!("solve+setup seconds: {total_seconds}");
    println!("verification: relative round-trip error {diff:e}");

    if let Some(path) = &args.out {
        let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
        for v in &solution {
            writeln!(file, "{v}")?;
        }
        file.flush()?;
        println!("solution written to {}", path.display());
    }

    let tol = args.verify_tol.unwrap_or(default_tol);
    if !(diff <= tol) {
        eprintln!("verification failed: {diff:e} exceeds the gate {tol:e}");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode, Error> {
    let workers = resolve_workers(args.workers)?;
    let mut sources: Vec<MatrixSource> = Vec::new();
    if args.table2 {
        sources = standard_grids();
    } else {
        if let Some(dims) = args.grid {
            sources.push(grid_source(dims, args.stencil));
        }
        for path in &args.mtx {
            sources.push(MatrixSource::File(path.clone()));
        }
    }
    if sources.is_empty() {
        return Err(Error::InvalidInput(
            "nothing to benchmark: pass --table2, --grid, or --mtx".into(),
        ));
    }

    let config = SuiteConfig {
        sources,
        solvers: args.solvers.0.clone(),
        setup_mode: args.setup,
        workers,
        runs: args.runs,
        precision: args.precision,
        rhs: args.rhs.clone(),
        max_unknowns: args.max_n,
    };
    let outcome = run_suite(&config);

    let mut rendered = Vec::new();
    match args.format.as_str() {
        "csv" => write_csv(&mut rendered, &outcome.records)?,
        "table" => write_table(&mut rendered, &outcome.records)?,
        other => unreachable!("clap validates --format, got '{other}'"),
    }
    match &args.out {
        Some(path) => {
            std::fs::write(path, &rendered)?;
            eprintln!(
                "{} records written to {}",
                outcome.records.len(),
                path.display()
            );
        }
        None => {
            std::io::stdout().write_all(&rendered)?;
        }
    }

    for (case, message) in &outcome.failures {
        eprintln!("failed: {case}: {message}");
    }
    if !outcome.failures.is_empty() || outcome.records.is_empty() {
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}
