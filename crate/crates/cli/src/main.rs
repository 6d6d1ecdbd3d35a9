use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use conedist::lab::{BENCH_GAP_TOLERANCE, BENCH_MAX_ITERATIONS};
use conedist::{GenParams, StepRule, TargetMode};
use conedist_cli::commands::{
    self, BenchOptions, SolveOptions, EXIT_INPUT, EXIT_OK, EXIT_VERIFY_FAILED,
};
use conedist_cli::{json, Result};

/// Distance from a nonnegative target to the cone of nonnegative points.
#[derive(Parser)]
#[command(name = "conedist", version)]
struct Cli {
    /// Print a one-line summary on stdout.
    #[arg(long, global = true, default_value_t = true, action = ArgAction::Set)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StepArg {
    Exact,
    Diminishing,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    RandomNonneg,
    InCone,
    OrthogonalMix,
}

impl From<ModeArg> for TargetMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::RandomNonneg => TargetMode::RandomNonneg,
            ModeArg::InCone => TargetMode::InCone,
            ModeArg::OrthogonalMix => TargetMode::OrthogonalMix,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance document and write the result document.
    Solve {
        input: PathBuf,
        /// Result document path ("-" for stdout).
        #[arg(long)]
        out: PathBuf,
        /// Stop once the duality gap is at most this times ẑᵀẑ.
        #[arg(long)]
        gap_tolerance: Option<f64>,
        /// Oracle-call budget (default 10·n + 1000).
        #[arg(long)]
        max_iterations: Option<usize>,
        #[arg(long, value_enum, default_value = "exact")]
        step_rule: StepArg,
        /// Per-iteration CSV: k,objective,gap,lmo_index,step.
        #[arg(long)]
        history_out: Option<PathBuf>,
    },
    /// Generate a random clustered instance document.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        nc: usize,
        #[arg(long, default_value_t = 0.0)]
        cf: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value = "random-nonneg")]
        target_mode: ModeArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run an iteration-count benchmark over a parameter grid.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "20,40,60,80,100")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        m: usize,
        #[arg(long, value_delimiter = ',', default_value = "1,2,5")]
        nc: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0,5,10")]
        cf: Vec<f64>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value = "random-nonneg")]
        target_mode: ModeArg,
        #[arg(long, default_value_t = BENCH_GAP_TOLERANCE)]
        gap_tolerance: f64,
        #[arg(long, default_value_t = BENCH_MAX_ITERATIONS)]
        max_iterations: usize,
        /// Worker threads.
        #[arg(long)]
        jobs: Option<usize>,
        /// n = 100..1000, m = 1000, 50 trials (overrides the grid flags).
        #[arg(long)]
        full: bool,
        /// CSV path ("-" for stdout).
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a solve against the reference oracle; exit 3 on failure.
    Verify {
        instance: PathBuf,
        /// Result document to check; solved afresh when omitted.
        #[arg(long)]
        result: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
        /// Report path ("-" for stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the vertices and rays of the slice for an instance's target.
    Geometry {
        input: PathBuf,
        /// Listing path ("-" for stdout).
        #[arg(long)]
        out: PathBuf,
    },
}

fn emit(path: &Path, text: &str) -> Result<()> {
    if path == Path::new("-") {
        let mut stdout = std::io::stdout().lock();
        stdout
            .write_all(text.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(|source| conedist_cli::CliError::Write {
                path: path.to_path_buf(),
                source,
            })
    } else {
        commands::write_text(path, text)
    }
}

fn run(cli: Cli) -> Result<i32> {
    let say = |line: String| {
        if !cli.quiet {
            println!("{line}");
        }
    };
    match cli.command {
        Command::Solve {
            input,
            out,
            gap_tolerance,
            max_iterations,
            step_rule,
            history_out,
        } => {
            let options = SolveOptions {
                gap_tolerance,
                max_iterations,
                step_rule: match step_rule {
                    StepArg::Exact => StepRule::ExactLineSearch,
                    StepArg::Diminishing => StepRule::Diminishing,
                },
                history_out,
            };
            let outcome = commands::cmd_solve(&input, &options)?;
            emit(&out, &json::to_string(&outcome.document))?;
            if outcome.exit_code != EXIT_OK {
                eprintln!("conedist: iteration budget exhausted before the gap tolerance was met");
            }
            say(outcome.summary());
            Ok(outcome.exit_code)
        }
        Command::Generate {
            n,
            m,
            nc,
            cf,
            seed,
            target_mode,
            out,
        } => {
            let params = GenParams::new(n, m, nc, cf, seed).with_target_mode(target_mode.into());
            emit(&out, &commands::cmd_generate(&params)?)?;
            say(format!("generated n={n} m={m} nc={nc} cf={cf} seed={seed}"));
            Ok(EXIT_OK)
        }
        Command::Bench {
            n,
            m,
            nc,
            cf,
            trials,
            seed,
            target_mode,
            gap_tolerance,
            max_iterations,
            jobs,
            full,
            out,
        } => {
            let mut options = if full {
                BenchOptions::full(seed)
            } else {
                BenchOptions {
                    ns: n,
                    m,
                    ncs: nc,
                    cfs: cf,
                    trials,
                    ..BenchOptions::desk(seed)
                }
            };
            options.target_mode = target_mode.into();
            options.gap_tolerance = gap_tolerance;
            options.max_iterations = max_iterations;
            options.jobs = jobs;
            let rows = commands::bench_rows(&options)?;
            emit(&out, &commands::bench_csv(&rows))?;
            let failures: usize = rows.iter().map(|r| r.failures).sum();
            if failures > 0 {
                eprintln!("conedist: {failures} trial(s) hit the iteration budget");
            }
            say(format!("{} cells, {failures} budget failures", rows.len()));
            Ok(EXIT_OK)
        }
        Command::Verify {
            instance,
            result,
            tolerance,
            out,
        } => {
            let report = commands::cmd_verify(&instance, result.as_deref(), tolerance)?;
            if let Some(out) = out {
                emit(&out, &json::to_string(&report))?;
            }
            for c in report.checks.iter().filter(|c| !c.passed) {
                eprintln!(
                    "conedist: check {} failed (residual {:?}, threshold {})",
                    c.name, c.residual, c.threshold
                );
            }
            say(report.result.clone());
            Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            })
        }
        Command::Geometry { input, out } => {
            let geometry = commands::cmd_geometry(&input)?;
            emit(&out, &json::to_string(&geometry))?;
            say(format!(
                "{} vertices, {} rays",
                geometry.vertices.len(),
                geometry.rays.len()
            ));
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("conedist: {e}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
