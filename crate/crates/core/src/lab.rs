//! Random clustered instances and the iteration-count benchmark.
//!
//! Randomness: every instance owns one `ChaCha8Rng` seeded with
//! `seed_from_u64(params.seed)`. Draw order is fixed: generators block by
//! block (center first, then the block's other points), then the target.
//! In a benchmark, trial `t` of a cell uses seed `cell.seed + t` (wrapping).
//! All entries are uniform on `[0, 1)`.

use std::io::{self, Write};
use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{ConeError, Result};
use crate::instance::Instance;
use crate::solver::{solve, SolverConfig, Status};
use crate::Scalar;

/// How the target point is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TargetMode {
    /// Independent uniform entries.
    #[default]
    RandomNonneg,
    /// Positive combination of three distinct generators (distance zero).
    InCone,
    /// Uniform entries with a random half of the coordinates zeroed.
    OrthogonalMix,
}

impl TargetMode {
    pub fn as_str(self) -> &'static str {
        match self {
            TargetMode::RandomNonneg => "random_nonneg",
            TargetMode::InCone => "in_cone",
            TargetMode::OrthogonalMix => "orthogonal_mix",
        }
    }
}

impl std::str::FromStr for TargetMode {
    type Err = ConeError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random_nonneg" => Ok(TargetMode::RandomNonneg),
            "in_cone" => Ok(TargetMode::InCone),
            "orthogonal_mix" => Ok(TargetMode::OrthogonalMix),
            other => Err(ConeError::InvalidParameter(format!(
                "unknown target mode {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenParams {
    pub n: usize,
    pub m: usize,
    pub num_clusters: usize,
    pub cluster_coefficient: f64,
    pub seed: u64,
    pub target_mode: TargetMode,
}

impl GenParams {
    pub fn new(
        n: usize,
        m: usize,
        num_clusters: usize,
        cluster_coefficient: f64,
        seed: u64,
    ) -> Self {
        Self {
            n,
            m,
            num_clusters,
            cluster_coefficient,
            seed,
            target_mode: TargetMode::RandomNonneg,
        }
    }

    pub fn with_target_mode(mut self, mode: TargetMode) -> Self {
        self.target_mode = mode;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(ConeError::InvalidParameter(msg));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if self.num_clusters == 0 {
            return bad("the number of clusters must be at least 1".into());
        }
        if self.m < self.num_clusters || !self.m.is_multiple_of(self.num_clusters) {
            return bad(format!(
                "m = {} must be a positive multiple of the cluster count {}",
                self.m, self.num_clusters
            ));
        }
        if !(self.cluster_coefficient >= 0.0) || !self.cluster_coefficient.is_finite() {
            return bad(format!(
                "cluster coefficient must be finite and nonnegative, got {}",
                self.cluster_coefficient
            ));
        }
        Ok(())
    }

    pub fn block_size(&self) -> usize {
        self.m / self.num_clusters
    }
}

/// A generated instance together with its cluster centers (empty when the
/// cluster coefficient is zero).
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedInstance<T> {
    pub instance: Instance<T>,
    pub centers: Vec<Vec<T>>,
}

pub fn generate<T: Scalar>(params: &GenParams) -> Result<Instance<T>> {
    generate_detailed(params).map(|g| g.instance)
}

pub fn generate_detailed<T: Scalar>(params: &GenParams) -> Result<GeneratedInstance<T>> {
    params.validate()?;
    let GenParams { n, m, .. } = *params;
    let cf = params.cluster_coefficient;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let uniform = |rng: &mut ChaCha8Rng| -> Vec<f64> { (0..n).map(|_| rng.gen::<f64>()).collect() };

    let mut raw: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut centers = Vec::new();
    if cf == 0.0 {
        for _ in 0..m {
            raw.push(uniform(&mut rng));
        }
    } else {
        for _ in 0..params.num_clusters {
            let center = uniform(&mut rng);
            raw.push(center.clone());
            for _ in 1..params.block_size() {
                let jitter = uniform(&mut rng);
                raw.push(
                    center
                        .iter()
                        .zip(&jitter)
                        .map(|(c, j)| cf * c + j)
                        .collect(),
                );
            }
            centers.push(center);
        }
    }

    let target: Vec<f64> = match params.target_mode {
        TargetMode::RandomNonneg => uniform(&mut rng),
        TargetMode::InCone => {
            let picks = sample(&mut rng, m, m.min(3));
            let mut t = vec![0.0; n];
            for i in picks.iter() {
                let w = 0.5 + rng.gen::<f64>();
                for (tj, yj) in t.iter_mut().zip(&raw[i]) {
                    *tj += w * yj;
                }
            }
            t
        }
        TargetMode::OrthogonalMix => {
            let mut t = uniform(&mut rng);
            for j in sample(&mut rng, n, n / 2).iter() {
                t[j] = 0.0;
            }
            t
        }
    };

    let convert = |v: Vec<f64>| -> Vec<T> { v.into_iter().map(T::lit).collect() };
    Ok(GeneratedInstance {
        instance: Instance::new(raw.into_iter().map(convert).collect(), convert(target))?,
        centers: centers.into_iter().map(convert).collect(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub nc: usize,
    pub cf: f64,
    pub trials: usize,
    /// Mean oracle calls per solve.
    pub mean_iterations: f64,
    pub mean_distance: f64,
    pub mean_wall_time_s: f64,
    /// Trials that stopped on the iteration budget.
    pub failures: usize,
}

struct TrialOutcome {
    iterations: usize,
    distance: f64,
    seconds: f64,
    exhausted: bool,
}

/// Solves `trials_per_cell` seeded instances per grid cell and averages.
/// Rows come back in grid order; trials run on the current rayon pool.
pub fn run_benchmark<T: Scalar>(
    grid: &[GenParams],
    trials_per_cell: usize,
    config: &SolverConfig<T>,
) -> Result<Vec<BenchRow>> {
    if trials_per_cell == 0 {
        return Err(ConeError::InvalidParameter(
            "trials per cell must be at least 1".into(),
        ));
    }
    for p in grid {
        p.validate()?;
    }
    let jobs: Vec<(usize, u64)> = grid
        .iter()
        .enumerate()
        .flat_map(|(c, p)| (0..trials_per_cell as u64).map(move |t| (c, p.seed.wrapping_add(t))))
        .collect();
    let outcomes: Vec<TrialOutcome> = jobs
        .par_iter()
        .map(|&(c, seed)| {
            let instance = generate::<T>(&grid[c].with_seed(seed))?;
            let start = Instant::now();
            let solution = solve(&instance, config)?;
            Ok(TrialOutcome {
                iterations: solution.iterations,
                distance: solution.distance.as_f64(),
                seconds: start.elapsed().as_secs_f64(),
                exhausted: solution.status == Status::MaxIterations,
            })
        })
        .collect::<Result<_>>()?;

    Ok(grid
        .iter()
        .zip(outcomes.chunks(trials_per_cell))
        .map(|(p, cell)| {
            let t = cell.len() as f64;
            BenchRow {
                n: p.n,
                m: p.m,
                nc: p.num_clusters,
                cf: p.cluster_coefficient,
                trials: cell.len(),
                mean_iterations: cell.iter().map(|o| o.iterations as f64).sum::<f64>() / t,
                mean_distance: cell.iter().map(|o| o.distance).sum::<f64>() / t,
                mean_wall_time_s: cell.iter().map(|o| o.seconds).sum::<f64>() / t,
                failures: cell.iter().filter(|o| o.exhausted).count(),
            }
        })
        .collect())
}

/// Relative gap at which benchmark solves stop. Plain Frank-Wolfe needs on
/// the order of `1/tol` oracle calls on these instances, so tighter
/// tolerances only measure the iteration budget.
pub const BENCH_GAP_TOLERANCE: f64 = 1e-4;
/// Oracle-call budget for benchmark solves; generous enough that no grid
/// cell at [`BENCH_GAP_TOLERANCE`] runs into it.
pub const BENCH_MAX_ITERATIONS: usize = 100_000;

pub fn bench_config<T: Scalar>() -> SolverConfig<T> {
    SolverConfig {
        gap_tolerance: T::lit(BENCH_GAP_TOLERANCE),
        max_iterations: Some(BENCH_MAX_ITERATIONS),
        ..SolverConfig::default()
    }
}

pub const BENCH_CSV_HEADER: &str =
    "n,m,nc,cf,trials,mean_iterations,mean_distance,mean_wall_time_s,failures";

/// Decimal rendering with at most six significant digits.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.5e}").parse().expect("valid float");
    format!("{rounded}")
}

pub fn write_bench_csv<W: Write>(rows: &[BenchRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{BENCH_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.n,
            r.m,
            r.nc,
            format_sig6(r.cf),
            r.trials,
            format_sig6(r.mean_iterations),
            format_sig6(r.mean_distance),
            format_sig6(r.mean_wall_time_s),
            r.failures
        )?;
    }
    Ok(())
}

/// The full-grid cartesian product `n × nc × cf`, seeds derived per cell.
pub fn grid(
    ns: &[usize],
    m: usize,
    ncs: &[usize],
    cfs: &[f64],
    base_seed: u64,
    mode: TargetMode,
) -> Vec<GenParams> {
    let mut cells = Vec::new();
    for &nc in ncs {
        for &cf in cfs {
            for &n in ns {
                let seed = base_seed.wrapping_add(1_000_003u64.wrapping_mul(cells.len() as u64));
                cells.push(GenParams::new(n, m, nc, cf, seed).with_target_mode(mode));
            }
        }
    }
    cells
}

/// Spearman rank correlation with average ranks for ties. `NaN` when either
/// side is constant.
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let (rx, ry) = (ranks(xs), ranks(ys));
    let n = xs.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut out = vec![0.0; v.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && v[order[j + 1]] == v[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            out[k] = avg;
        }
        i = j + 1;
    }
    out
}
