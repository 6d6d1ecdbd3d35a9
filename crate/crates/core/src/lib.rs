//! Euclidean distance from a nonnegative target to the convex cone generated
//! by finitely many nonnegative points.
//!
//! The cone problem is moved onto the slice `{z ≥ 0 : ẑᵀz = ẑᵀẑ}`, where
//! it becomes a convex problem whose linear subproblems are answered by a
//! scan over lifted generators. Frank-Wolfe solves the slice problem, and
//! the slice optimum is scaled back onto the cone.
//!
//! All numerics are generic over [`Scalar`] (`f32`, `f64`); the `*64`
//! aliases below are what the CLI uses.
//!
//! ```
//! use conedist::{solve, Instance64, SolverConfig, Status};
//!
//! let instance = Instance64::new(
//!     vec![vec![1.0, 1.0, 2.0], vec![3.0, 0.0, 2.0], vec![0.0, 0.0, 2.0]],
//!     vec![1.0, 1.0, 0.0],
//! )
//! .unwrap();
//! let solution = solve(&instance, &SolverConfig::default()).unwrap();
//! assert_eq!(solution.status, Status::Converged);
//! assert!((solution.distance_sq - 1044.0 / 841.0).abs() < 1e-12);
//! ```

// `!(x > y)` is used on purpose so that NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blp;
pub mod certificate;
pub mod error;
pub mod instance;
pub mod lab;
pub mod lmo;
pub mod nnls;
pub mod scalar;
pub mod slice;
pub mod solver;
pub mod vector;

pub use blp::{enumerate_blp, enumerate_blp_capped, BlpRow, BlpSystem, Sense};
pub use certificate::{diameter_bound, BoundCertificate};
pub use error::{ConeError, Result};
pub use instance::Instance;
pub use lab::{
    bench_config, generate, generate_detailed, run_benchmark, BenchRow, GenParams, TargetMode,
};
pub use lmo::{duality_gap, solve_lmo, LinearOracle, LmoResult};
pub use nnls::{nnls_bruteforce, verify_solution, NnlsSolution, VerificationReport};
pub use scalar::Scalar;
pub use slice::{
    check_reachability, lift_to_slice, scale_back, slice_geometry, FeasibilityReport, Lift,
    SliceGeometry,
};
pub use solver::{
    initial_point, line_search, solve, IterationRecord, Solution, SolverConfig, Status, StepRule,
    SupportEntry,
};

pub type Instance64 = Instance<f64>;
pub type Solution64 = Solution<f64>;
pub type SolverConfig64 = SolverConfig<f64>;
pub type BlpSystem64 = BlpSystem<f64>;
pub type BlpRow64 = BlpRow<f64>;
pub type LmoResult64 = LmoResult<f64>;
pub type BoundCertificate64 = BoundCertificate<f64>;
pub type SliceGeometry64 = SliceGeometry<f64>;
pub type NnlsSolution64 = NnlsSolution<f64>;

pub type Instance32 = Instance<f32>;
pub type Solution32 = Solution<f32>;
pub type SolverConfig32 = SolverConfig<f32>;
