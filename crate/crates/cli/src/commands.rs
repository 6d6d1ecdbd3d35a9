//! One function per subcommand. Each returns the text to write and leaves
//! I/O destinations and exit codes to the caller.

use std::fs;
use std::path::{Path, PathBuf};

use conedist::lab::{self, write_bench_csv};
use conedist::{
    generate, run_benchmark, slice_geometry, solve, verify_solution, BenchRow, GenParams,
    Instance64, Solution64, SolverConfig64, Status, StepRule, TargetMode,
};

use crate::document::{GeometryDocument, InstanceDocument, ResultDocument, VerificationDocument};
use crate::error::{CliError, Result};
use crate::json::{self, fmt_f64};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

pub const HISTORY_CSV_HEADER: &str = "k,objective,gap,lmo_index,step";

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_instance(path: &Path) -> Result<Instance64> {
    let text = read_text(path)?;
    InstanceDocument::parse(&text, &path.display().to_string())?
        .to_instance()
        .map_err(|e| match e {
            CliError::Invalid(msg) => CliError::Invalid(format!("{}: {msg}", path.display())),
            CliError::Cone(e) => CliError::Invalid(format!("{}: {e}", path.display())),
            other => other,
        })
}

#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    pub gap_tolerance: Option<f64>,
    pub max_iterations: Option<usize>,
    pub step_rule: StepRule,
    pub history_out: Option<PathBuf>,
}

impl SolveOptions {
    pub fn config(&self) -> SolverConfig64 {
        let mut config = SolverConfig64 {
            max_iterations: self.max_iterations,
            step_rule: self.step_rule,
            record_history: self.history_out.is_some(),
            ..SolverConfig64::default()
        };
        if let Some(tol) = self.gap_tolerance {
            config.gap_tolerance = tol;
        }
        config
    }
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub solution: Solution64,
    pub document: ResultDocument,
    pub exit_code: i32,
}

impl SolveOutcome {
    pub fn summary(&self) -> String {
        format!(
            "status={} distance={} iterations={} final_gap={}",
            self.document.status,
            fmt_f64(self.document.distance),
            self.document.iterations,
            fmt_f64(self.document.final_gap)
        )
    }
}

pub fn exit_code_for(status: Status) -> i32 {
    match status {
        Status::Converged | Status::TargetUnreachable => EXIT_OK,
        Status::MaxIterations => EXIT_BUDGET,
    }
}

pub fn solve_instance(instance: &Instance64, options: &SolveOptions) -> Result<SolveOutcome> {
    let solution = solve(instance, &options.config())?;
    if let Some(path) = &options.history_out {
        write_text(path, &history_csv(&solution))?;
    }
    Ok(SolveOutcome {
        document: ResultDocument::from_solution(&solution),
        exit_code: exit_code_for(solution.status),
        solution,
    })
}

pub fn cmd_solve(input: &Path, options: &SolveOptions) -> Result<SolveOutcome> {
    solve_instance(&load_instance(input)?, options)
}

pub fn history_csv(solution: &Solution64) -> String {
    let mut out = String::from(HISTORY_CSV_HEADER);
    out.push('\n');
    for r in solution.history.iter().flatten() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.k,
            fmt_f64(r.objective),
            fmt_f64(r.gap),
            r.lmo_index,
            fmt_f64(r.step)
        ));
    }
    out
}

/// Instance document text for one generated instance.
pub fn cmd_generate(params: &GenParams) -> Result<String> {
    let instance = generate::<f64>(params)?;
    Ok(json::to_string(&InstanceDocument::from_instance(&instance)))
}

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub ns: Vec<usize>,
    pub m: usize,
    pub ncs: Vec<usize>,
    pub cfs: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub target_mode: TargetMode,
    pub gap_tolerance: f64,
    pub max_iterations: usize,
    /// Worker threads; `None` uses the rayon default.
    pub jobs: Option<usize>,
}

impl BenchOptions {
    pub fn desk(seed: u64) -> Self {
        Self {
            ns: vec![20, 40, 60, 80, 100],
            m: 200,
            ncs: vec![1, 2, 5],
            cfs: vec![0.0, 5.0, 10.0],
            trials: 20,
            seed,
            target_mode: TargetMode::RandomNonneg,
            gap_tolerance: lab::BENCH_GAP_TOLERANCE,
            max_iterations: lab::BENCH_MAX_ITERATIONS,
            jobs: None,
        }
    }

    /// n = 100..=1000, m = 1000, 50 trials per cell.
    pub fn full(seed: u64) -> Self {
        Self {
            ns: (1..=10).map(|k| 100 * k).collect(),
            m: 1000,
            trials: 50,
            ..Self::desk(seed)
        }
    }

    pub fn grid(&self) -> Vec<GenParams> {
        lab::grid(
            &self.ns,
            self.m,
            &self.ncs,
            &self.cfs,
            self.seed,
            self.target_mode,
        )
    }

    pub fn config(&self) -> SolverConfig64 {
        SolverConfig64 {
            gap_tolerance: self.gap_tolerance,
            max_iterations: Some(self.max_iterations),
            ..SolverConfig64::default()
        }
    }
}

pub fn bench_rows(options: &BenchOptions) -> Result<Vec<BenchRow>> {
    let grid = options.grid();
    let run = || run_benchmark(&grid, options.trials, &options.config());
    let rows = match options.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| CliError::Invalid(format!("cannot start {jobs} workers: {e}")))?
            .install(run),
        None => run(),
    }?;
    Ok(rows)
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = Vec::new();
    write_bench_csv(rows, &mut out).expect("writing to memory");
    String::from_utf8(out).expect("CSV is UTF-8")
}

pub fn cmd_bench(options: &BenchOptions) -> Result<String> {
    Ok(bench_csv(&bench_rows(options)?))
}

/// Checks a result document against the reference oracle. Without a result
/// document the instance is solved first with default settings.
pub fn cmd_verify(
    instance_path: &Path,
    result_path: Option<&Path>,
    tolerance: f64,
) -> Result<VerificationDocument> {
    let instance = load_instance(instance_path)?;
    let candidate = match result_path {
        Some(path) => ResultDocument::parse(&read_text(path)?, &path.display().to_string())?
            .to_solution(&instance)?,
        None => solve(&instance, &SolverConfig64::default())?,
    };
    let report = verify_solution(&candidate, &instance, tolerance)?;
    Ok(VerificationDocument::from_report(&report))
}

pub fn cmd_geometry(input: &Path) -> Result<GeometryDocument> {
    let text = read_text(input)?;
    let doc = InstanceDocument::parse(&text, &input.display().to_string())?;
    if doc.target.len() != doc.n {
        return Err(CliError::Invalid(format!(
            "{}: target has {} entries, expected n = {}",
            input.display(),
            doc.target.len(),
            doc.n
        )));
    }
    Ok(GeometryDocument::from_geometry(&slice_geometry(
        &doc.target,
    )?))
}
